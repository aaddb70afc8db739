"""Line-oriented problem files.

    # comment
    ring p=2 vars=x,y order=degrevlex
    matrix A 1 1
    x
    matrix U 1 1
    x
    ideal I
    x
    y

    param g=x

``matrix NAME ROWS COLS`` is followed by ROWS*COLS polynomial lines in
row-major order; ``ideal NAME`` by one polynomial per line up to a blank line
(or the end of the file); ``param KEY=VALUE`` stores a free-form string.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError, ShapeError
from .fsupport import GeneratingMorphism
from .modules import PolyMatrix
from .ring import PolynomialRing, is_prime

KEYWORDS = ("ring", "matrix", "ideal", "param")


@dataclass
class ProblemFile:
    ring: PolynomialRing
    matrices: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    def matrix(self, name):
        return self.matrices[name]

    def ideal(self, name=None):
        if name is None:
            if not self.ideals:
                raise KeyError("no ideal in problem file")
            return next(iter(self.ideals.values()))
        return self.ideals[name]

    def generating_morphism(self):
        """(A, U) from matrices named A and U; a missing A means no relations."""
        if "U" not in self.matrices:
            raise KeyError("problem file has no matrix U")
        U = self.matrices["U"]
        A = self.matrices.get("A")
        if A is None:
            return GeneratingMorphism.free(self.ring, U)
        return GeneratingMorphism(A, U)

    def __eq__(self, other):
        if not isinstance(other, ProblemFile):
            return NotImplemented
        return (self.ring == other.ring and self.matrices == other.matrices
                and self.ideals == other.ideals and self.params == other.params)


def _kv(tokens, lineno):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", lineno)
        k, v = tok.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _is_keyword_line(stripped):
    head = stripped.split(None, 1)[0] if stripped else ""
    return head in KEYWORDS


def parse_problem(text):
    """Parse problem text; every error names its line."""
    lines = text.splitlines()
    ring = None
    pf = None
    i = 0
    n = len(lines)
    while i < n:
        lineno = i + 1
        raw = lines[i].split("#", 1)[0].strip()
        i += 1
        if not raw:
            continue
        parts = raw.split()
        head = parts[0]
        if head == "ring":
            if ring is not None:
                raise ParseError("second ring header", lineno)
            kv = _kv(parts[1:], lineno)
            try:
                p = int(kv["p"])
                vars_ = [v for v in kv["vars"].split(",") if v]
            except (KeyError, ValueError):
                raise ParseError("ring header needs p=<prime> vars=<names>", lineno) from None
            if not is_prime(p):
                raise ParseError(f"p={p} is not prime", lineno)
            order = kv.get("order", "degrevlex")
            extra = set(kv) - {"p", "vars", "order"}
            if extra:
                raise ParseError(f"unknown ring options {sorted(extra)}", lineno)
            try:
                ring = PolynomialRing(p, vars_, order)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            pf = ProblemFile(ring)
            continue
        if ring is None:
            raise ParseError("the ring header must come first", lineno)
        if head == "matrix":
            if len(parts) != 4:
                raise ParseError("expected: matrix NAME ROWS COLS", lineno)
            name = parts[1]
            try:
                r, c = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("matrix dimensions must be integers", lineno) from None
            if r < 0 or c < 0:
                raise ParseError("negative matrix dimension", lineno)
            if name in pf.matrices:
                raise ParseError(f"matrix {name} defined twice", lineno)
            entries = []
            while len(entries) < r * c:
                if i >= n:
                    raise ParseError(
                        f"matrix {name} needs {r * c} entries, file ended after {len(entries)}",
                        lineno)
                body = lines[i].split("#", 1)[0].strip()
                i += 1
                if not body:
                    continue
                if _is_keyword_line(body):
                    raise ParseError(
                        f"matrix {name} needs {r * c} entries, got {len(entries)}", i)
                entries.append(ring.parse(body, i))
            rows = [entries[k * c:(k + 1) * c] for k in range(r)]
            pf.matrices[name] = PolyMatrix(ring, rows, c)
            pf.order.append(("matrix", name))
            _check_shapes(pf, lineno)
            continue
        if head == "ideal":
            if len(parts) != 2:
                raise ParseError("expected: ideal NAME", lineno)
            name = parts[1]
            if name in pf.ideals:
                raise ParseError(f"ideal {name} defined twice", lineno)
            gens = []
            while i < n:
                body = lines[i].split("#", 1)[0].strip()
                if not lines[i].strip():
                    i += 1
                    break
                if _is_keyword_line(body):
                    break
                i += 1
                if body:
                    gens.append(ring.parse(body, i))
            pf.ideals[name] = gens
            pf.order.append(("ideal", name))
            continue
        if head == "param":
            kv = _kv(parts[1:], lineno)
            for k, v in kv.items():
                pf.params[k] = v
                pf.order.append(("param", k))
            continue
        raise ParseError(f"unknown directive {head!r}", lineno)
    if ring is None:
        raise ParseError("missing ring header", 1)
    return pf


def _check_shapes(pf, lineno):
    U = pf.matrices.get("U")
    A = pf.matrices.get("A")
    if U is not None and U.nrows != U.ncols:
        raise ShapeError(f"line {lineno}: U must be square, declared {U.nrows}x{U.ncols}")
    if U is not None and A is not None and A.nrows != U.nrows:
        raise ShapeError(f"line {lineno}: A has {A.nrows} rows but U is {U.nrows}x{U.ncols}")


def format_problem(pf):
    """Canonical text of a problem; ``parse_problem`` inverts it."""
    ring = pf.ring
    out = [f"ring p={ring.p} vars={','.join(ring.variables)} order={ring.order.monomial}"]
    done = set()
    for kind, name in pf.order:
        if (kind, name) in done:
            continue
        done.add((kind, name))
        if kind == "matrix":
            M = pf.matrices[name]
            out.append(f"matrix {name} {M.nrows} {M.ncols}")
            out.extend(str(a) for row in M.rows for a in row)
        elif kind == "ideal":
            out.append(f"ideal {name}")
            out.extend(str(f) for f in pf.ideals[name])
            out.append("")
        else:
            out.append(f"param {name}={pf.params[name]}")
    while out and out[-1] == "":
        out.pop()
    return "\n".join(out) + "\n"


def problem_from_gm(gm, params=None):
    """A problem file holding (A, U)."""
    pf = ProblemFile(gm.ring)
    pf.matrices["A"] = gm.A
    pf.matrices["U"] = gm.U
    pf.order += [("matrix", "A"), ("matrix", "U")]
    for k, v in (params or {}).items():
        pf.params[k] = str(v)
        pf.order.append(("param", k))
    return pf
