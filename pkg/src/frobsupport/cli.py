"""Command-line front end.

Exit codes: 0 success, 1 bad input, 3 resource cutoff, 4 no fixed point
within --max-iter, 5 a degree bound failed at runtime.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import BENCH_HEADER, bench
from .errors import (
    BoundViolationError,
    FrobSupportError,
    NonTerminationError,
    ParseError,
    ResourceLimitError,
    ShapeError,
)
from .fsupport import DEFAULT_MAX_ITER, GeneratingMorphism, is_zero_module, support_ideal
from .groebner import GBLimits
from .hyperloci import (
    DEFAULT_JMAX,
    DEFAULT_WINDOW,
    hypersurface_support,
    injectivity_locus,
    local_cohomology_gm,
    surjectivity_locus,
)
from .lccohom import (
    IteratedSpec,
    degree_diagnostics,
    ext_gm,
    iterated_gm,
    koszul_gm,
    resultant_support,
)
from .modules import PolyMatrix
from .problem import parse_problem
from .ring import PolynomialRing

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RESOURCE = 3
EXIT_NONTERMINATION = 4
EXIT_BOUND = 5

RESULTANT_BUDGET = 600.0

COMMANDS = ("support", "vanishes", "lc", "iterated", "hyperloci", "bounds", "bench")


def _limits(flags):
    size = getattr(flags, "gb_max_size", None)
    limits = GBLimits(
        max_basis_size=GBLimits.max_basis_size if size is None else size,
        max_degree=getattr(flags, "gb_max_deg", None),
    )
    budget = getattr(flags, "time_budget", None)
    if budget is None and getattr(flags, "resultant_example", False):
        budget = RESULTANT_BUDGET
    return limits.with_time_budget(budget) if budget is not None else limits


def _yesno(b):
    return "yes" if b else "no"


def _split_gens(ring, text):
    return [ring.parse(t) for t in text.split(",") if t.strip()]


def _ring_from(flags, pf):
    if pf is not None:
        return pf.ring
    p = getattr(flags, "p", None)
    vars_ = getattr(flags, "vars", None)
    if p is None or vars_ is None:
        raise ParseError("give a problem file or both --p and --vars")
    return PolynomialRing(p, vars_.split(","), getattr(flags, "order", "degrevlex"))


def _ideal_from(flags, pf, ring):
    if getattr(flags, "ideal", None):
        return _split_gens(ring, flags.ideal)
    if pf is not None and pf.ideals:
        return pf.ideal()
    raise ParseError("no ideal given (use --ideal or an ideal block)")


def _support_text(rep, header=None):
    lines = [header] if header else []
    lines += [
        f"iterations: {rep.iterations}",
        f"stable L: [{', '.join(str(g) for g in rep.L.gens)}]",
        f"J: {rep.J_str()}",
        f"module_is_zero: {_yesno(rep.module_is_zero)}",
        f"support_is_everything: {_yesno(rep.support_is_everything)}",
    ]
    if rep.stopped_early:
        lines.append("note: stopped early, an iterate already lies in Im A")
    return "\n".join(lines)


def _locus_text(rep):
    lines = [f"{rep.kind}: J = {rep.J_str()}  (empty: {_yesno(rep.is_empty)}, "
             f"eta/j: {rep.eta}, certified: {_yesno(rep.certified)})"]
    for part in rep.parts.values():
        lines.append("  " + _locus_text(part))
    return "\n".join(lines)


def run_command(name, pf, flags):
    """Execute one command; returns ``(text, data)``.

    ``pf`` may be None for commands that take their input from flags.
    Errors propagate as exceptions; :func:`main` maps them to exit codes.
    """
    limits = _limits(flags)
    max_iter = getattr(flags, "max_iter", None) or DEFAULT_MAX_ITER
    if name == "support":
        rep = support_ideal(pf.generating_morphism(), max_iter=max_iter, limits=limits)
        return _support_text(rep), rep.as_dict()
    if name == "vanishes":
        z = is_zero_module(pf.generating_morphism(), max_iter=max_iter, limits=limits)
        return _yesno(z), {"vanishes": z}
    if name == "lc":
        if getattr(flags, "resultant_example", False):
            rep = resultant_support(2, limits=limits)
            return _support_text(rep, "resultant example, H^4 in char 2"), rep.as_dict()
        ring = _ring_from(flags, pf)
        I = _ideal_from(flags, pf, ring)
        j = flags.j
        if flags.method == "koszul":
            free = GeneratingMorphism.free(ring, PolyMatrix.identity(ring, 1))
            gm = koszul_gm(free, I, j, limits=limits)
        else:
            gm = ext_gm(I, j, limits=limits, ring=ring)
        rep = support_ideal(gm, max_iter=max_iter, limits=limits)
        data = rep.as_dict()
        data["A"] = [[str(a) for a in r] for r in gm.A.rows]
        data["U"] = [[str(a) for a in r] for r in gm.U.rows]
        return _support_text(rep, f"H^{j} local cohomology, beta = {gm.beta}"), data
    if name == "iterated":
        ring = _ring_from(flags, pf)
        layers = []
        for spec in flags.layer or []:
            gens, _, idx = spec.rpartition(":")
            if not gens:
                raise ParseError(f"layer {spec!r} should look like 'x,y:2'")
            layers.append((_split_gens(ring, gens), int(idx)))
        gm = iterated_gm(IteratedSpec(layers), limits=limits)
        rep = support_ideal(gm, max_iter=max_iter, limits=limits)
        return _support_text(rep), rep.as_dict()
    if name == "hyperloci":
        ring = _ring_from(flags, pf)
        g = ring.parse(flags.g)
        jmax = flags.jmax or DEFAULT_JMAX
        window = flags.window or DEFAULT_WINDOW
        has_ideal = bool(getattr(flags, "ideal", None)) or (pf is not None and pf.ideals)
        if has_ideal:
            I = _ideal_from(flags, pf, ring)
            i = flags.i
            gm_i = local_cohomology_gm(I, i, ring=ring, limits=limits)
            gm_next = local_cohomology_gm(I, i + 1, ring=ring, limits=limits)
            rep = hypersurface_support(gm_i, gm_next, g, jmax, window, limits)
            return _locus_text(rep), rep.as_dict()
        gm = pf.generating_morphism()
        inj = injectivity_locus(gm, g, jmax, window, limits)
        sur = surjectivity_locus(gm, g, jmax, window, limits)
        text = _locus_text(inj) + "\n" + _locus_text(sur)
        return text, {"injectivity": inj.as_dict(), "surjectivity": sur.as_dict()}
    if name == "bounds":
        ring = _ring_from(flags, pf)
        if getattr(flags, "ideal", None):
            J = [t.strip() for t in flags.ideal.split(",") if t.strip()]
        else:
            J = [str(f) for f in pf.ideal()]
        primes = [int(t) for t in flags.primes.split(",") if t.strip()]
        rows = degree_diagnostics(J, primes, flags.j, variables=list(ring.variables),
                                  order=ring.order.monomial, limits=limits,
                                  max_iter=max_iter)
        lines = ["p  delta_p  Delta  2jDelta  ceil(delta_p/(p-1))  regular  delta_{e,p}"]
        data = []
        for r in rows:
            if r.error:
                lines.append(f"{r.p}  error: {r.error}")
            else:
                lines.append(f"{r.p}  {r.delta_p}  {r.Delta}  {r.bound_resolution}  "
                             f"{r.bound_remark}  {_yesno(r.regular)}  {r.deltas}")
            data.append(dict(vars(r)))
        return "\n".join(lines), {"rows": data}
    if name == "bench":
        rows = bench(flags.p, flags.n, flags.beta, flags.deg, flags.count, flags.seed or 0,
                     out=flags.csv, alpha=flags.alpha, empty_a=flags.empty_a,
                     zero_u=flags.zero_u, max_iter=max_iter, limits=limits, jobs=flags.jobs)
        text = "\n".join([BENCH_HEADER] + [",".join(r.fields()) for r in rows])
        return text, {"rows": [r.fields() for r in rows]}
    raise ValueError(f"unknown command {name!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="frobsupport",
        description="Supports of F-finite F-modules and local cohomology in characteristic p.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-iter", type=int, default=None)
    common.add_argument("--gb-max-size", type=int, default=None)
    common.add_argument("--gb-max-deg", type=int, default=None)
    common.add_argument("--time-budget", type=float, default=None,
                        help="seconds before Groebner computations give up (exit 3)")
    common.add_argument("--json", action="store_true", help="print structured output")
    ringopts = argparse.ArgumentParser(add_help=False)
    ringopts.add_argument("file", nargs="?", help="problem file")
    ringopts.add_argument("--p", type=int)
    ringopts.add_argument("--vars")
    ringopts.add_argument("--order", default="degrevlex")
    ringopts.add_argument("--ideal", help="comma separated generators")

    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("support", "vanishes"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("file")
    sp = sub.add_parser("lc", parents=[common, ringopts])
    sp.add_argument("--j", type=int, default=None)
    sp.add_argument("--method", choices=["ext", "koszul"], default="ext")
    sp.add_argument("--resultant-example", action="store_true",
                    help="attempt H^4 of the resultant ideal in char 2 "
                         "(default time budget 600 s)")
    sp = sub.add_parser("iterated", parents=[common, ringopts])
    sp.add_argument("--layer", action="append",
                    help="GENS:INDEX, outermost first; repeatable")
    sp = sub.add_parser("hyperloci", parents=[common, ringopts])
    sp.add_argument("--g", required=True)
    sp.add_argument("--i", type=int, default=0)
    sp.add_argument("--jmax", type=int, default=None)
    sp.add_argument("--window", type=int, default=None)
    sp = sub.add_parser("bounds", parents=[common, ringopts])
    sp.add_argument("--primes", default="2,3,5,7")
    sp.add_argument("--j", type=int, default=1)
    sp = sub.add_parser("bench", parents=[common])
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--n", type=int, default=5)
    sp.add_argument("--beta", type=int, default=2)
    sp.add_argument("--deg", type=int, default=4)
    sp.add_argument("--alpha", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", default=None, help="write rows to this path")
    sp.add_argument("--empty-a", action="store_true")
    sp.add_argument("--zero-u", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        pf = None
        if getattr(args, "file", None):
            with open(args.file, encoding="utf-8") as fh:
                pf = parse_problem(fh.read())
        if args.command == "lc" and args.j is None and not args.resultant_example:
            parser.error("lc needs --j")
        text, data = run_command(args.command, pf, args)
    except ResourceLimitError as exc:
        print(f"resource limit in stage {exc.stage}: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NonTerminationError as exc:
        print(f"no fixed point: {exc}", file=sys.stderr)
        return EXIT_NONTERMINATION
    except BoundViolationError as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (ParseError, ShapeError, ValueError, KeyError, OSError, FrobSupportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "json", False):
        print(json.dumps(data, indent=2, default=str))
    elif not (args.command == "bench" and args.csv):
        print(text)
    else:
        print(f"wrote {len(data['rows'])} rows to {args.csv}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
