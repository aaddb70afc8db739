"""Seeded random generating morphisms and a CSV benchmark over them.

Instance ``id`` under base seed ``s`` draws from ``random.Random(s * 100003 + id)``.
Every U entry (and, unless disabled, every A entry) is a random polynomial of
degree <= deg in x1..xn: each monomial is kept with probability 1/2 and gets
a uniformly random nonzero coefficient.  A is beta x alpha.
"""

from __future__ import annotations

import csv
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass

from .errors import BoundViolationError, NonTerminationError, ResourceLimitError
from .fsupport import GeneratingMorphism, iterate_support_trace, quotient_support
from .groebner import GBLimits
from .modules import PolyMatrix, SubmoduleGens
from .ring import PolynomialRing, is_prime

BENCH_HEADER = "id,seed,p,n,beta,deg,iters,gens,time_ms,outcome"
SEED_STRIDE = 100003


@dataclass
class BenchRow:
    id: int
    seed: int
    p: int
    n: int
    beta: int
    deg: int
    iters: int
    gens: int
    time_ms: float
    outcome: str

    def fields(self):
        return [str(x) if not isinstance(x, float) else f"{x:.1f}" for x in astuple(self)]

    def stable_fields(self):
        """Everything except the wall time."""
        f = self.fields()
        return f[:8] + f[9:]


def instance_seed(seed, idx):
    return seed * SEED_STRIDE + idx


def bench_ring(p, n):
    return PolynomialRing(p, [f"x{i}" for i in range(1, n + 1)])


def random_polynomial(ring, deg, rng, monos=None):
    monos = monos if monos is not None else ring.monomials_up_to(deg)
    p = ring.p
    terms = []
    for m in monos:
        if rng.random() < 0.5:
            terms.append((m, rng.randrange(1, p)))
    return ring.normalize(terms)


def make_instance(idx, seed, p, n, beta, deg, alpha=1, empty_a=False, zero_u=False):
    """The generating morphism of instance ``idx``."""
    ring = bench_ring(p, n)
    rng = random.Random(instance_seed(seed, idx))
    monos = ring.monomials_up_to(deg)
    if zero_u:
        U = PolyMatrix.zeros(ring, beta, beta)
    else:
        U = PolyMatrix(ring, [[random_polynomial(ring, deg, rng, monos) for _ in range(beta)]
                              for _ in range(beta)], beta)
    if empty_a:
        A = PolyMatrix(ring, [[] for _ in range(beta)], 0)
    else:
        A = PolyMatrix(ring, [[random_polynomial(ring, deg, rng, monos) for _ in range(alpha)]
                              for _ in range(beta)], alpha)
    return GeneratingMorphism(A, U)


def run_instance(idx, seed, p, n, beta, deg, alpha=1, empty_a=False, zero_u=False,
                 max_iter=1000, limits=None):
    gm = make_instance(idx, seed, p, n, beta, deg, alpha, empty_a, zero_u)
    iters = 0
    gens = 0
    t0 = time.perf_counter()
    try:
        trace = iterate_support_trace(gm, max_iter=max_iter)
        iters = trace.iterations
        gens = trace.stable.dim
        qs = quotient_support(trace.L, SubmoduleGens.from_matrix(gm.A), limits)
        outcome = "zero-module" if qs.is_zero else "ok"
    except NonTerminationError:
        iters = max_iter
        outcome = "nonterminating"
    except ResourceLimitError as exc:
        outcome = f"resource:{exc.stage}"
    except BoundViolationError:
        outcome = "bound-violation"
    elapsed = (time.perf_counter() - t0) * 1000.0
    return BenchRow(idx, instance_seed(seed, idx), p, n, beta, deg, iters, gens,
                    elapsed, outcome)


def _run_packed(args):
    return run_instance(*args[0], **args[1])


def bench(p, n, beta, deg, count, seed, out=None, alpha=1, empty_a=False, zero_u=False,
          max_iter=1000, limits=None, jobs=1):
    """Run ``count`` instances and return their rows (written to ``out`` as CSV)."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if count < 1:
        raise ValueError("count must be >= 1")
    if n < 1 or beta < 1 or deg < 0 or alpha < 0:
        raise ValueError("need n >= 1, beta >= 1, deg >= 0, alpha >= 0")
    limits = limits or GBLimits()
    kw = dict(alpha=alpha, empty_a=empty_a, zero_u=zero_u, max_iter=max_iter, limits=limits)
    tasks = [((i, seed, p, n, beta, deg), kw) for i in range(count)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_packed, tasks))
    else:
        rows = [_run_packed(t) for t in tasks]
    rows.sort(key=lambda r: r.id)
    if out is not None:
        write_csv(rows, out)
    return rows


def write_csv(rows, out):
    close = False
    if isinstance(out, str):
        out = open(out, "w", newline="")
        close = True
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(BENCH_HEADER.split(","))
        for r in rows:
            w.writerow(r.fields())
    finally:
        if close:
            out.close()
