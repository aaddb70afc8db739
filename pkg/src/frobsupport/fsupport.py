"""Supports of F-finite F-modules given by a generating morphism (A, U).

The module is the direct limit of Coker A -> Coker A^[p] -> ... where the
first map is multiplication by U.  Starting from L_0 = R^beta the iteration
L_{j+1} = I_1(U L_j) descends to a fixed point L; the module vanishes iff
L lies in Im A, and its support is cut out by the maximal minors of a
presentation of (L + Im A) / Im A.

All iterates have generator degree at most D = ceil(delta / (p - 1)) where
delta bounds the entries of U, so the iteration runs inside the finite
dimensional space (R_{<=D})^beta.  Iterates are compared as K-spans of their
generators, in reduced row echelon form.  Over F_p the map v -> {u_b(U v)} is
linear, so one step is a single matrix product followed by an echelon
reduction (the "operator" route).  The "direct" route decomposes polynomials
one generator at a time and serves as a cross-check.  When the truncated
space is too large for dense rows (many variables, large D) the "sparse"
route does the same work with dictionary rows and never materializes the
space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from heapq import heapify, heappop, heappush

import numpy as np

from . import _linalg
from .errors import BoundViolationError, NonTerminationError, ResourceLimitError, ShapeError
from .frobroot import frob_decompose
from .groebner import (
    ModuleGB,
    minimize_presentation,
    minors_ideal,
    presentation_matrix,
    reduced_ideal_basis,
)
from .modules import FreeVector, PolyMatrix, SubmoduleGens
from .ring import monomials_up_to

DEFAULT_MAX_ITER = 1000
# operator matrices above this many entries fall back to the direct route
OPERATOR_MAX_ENTRIES = 60_000_000
# dense rows above this many columns switch to the sparse route
DENSE_MAX_DIM = 50_000


def _ceil_div(a, b):
    return -(-a // b)


@dataclass(frozen=True)
class GeneratingMorphism:
    """A pair (A, U): A is beta x alpha, U is beta x beta, both over one ring.

    Coker A -> Coker A^[p] is v -> U v; a valid pair has U Im A inside
    Im A^[p] (see :meth:`is_valid`).  ``beta == 0`` encodes the zero module.
    """

    A: PolyMatrix
    U: PolyMatrix

    def __post_init__(self):
        if self.A.ring != self.U.ring:
            raise ShapeError("A and U live over different rings")
        if self.U.nrows != self.U.ncols:
            raise ShapeError(f"U must be square, got {self.U.shape}")
        if self.U.nrows != self.A.nrows:
            raise ShapeError(f"U is {self.U.shape} but A has {self.A.nrows} rows")

    @classmethod
    def zero(cls, ring):
        return cls(PolyMatrix(ring, [], 0), PolyMatrix(ring, [], 0))

    @classmethod
    def free(cls, ring, U):
        """R^beta with no relations (A has no columns)."""
        return cls(PolyMatrix(ring, [[] for _ in range(U.nrows)], 0), U)

    @property
    def ring(self):
        return self.A.ring

    @property
    def p(self):
        return self.A.ring.p

    @property
    def beta(self):
        return self.A.nrows

    @property
    def alpha(self):
        return self.A.ncols

    @property
    def delta(self):
        """Max entry degree of U (0 when U vanishes)."""
        return max(self.U.max_degree(), 0)

    @property
    def degree_bound(self):
        return _ceil_div(self.delta, self.p - 1)

    def is_zero_marker(self):
        return self.beta == 0

    def is_valid(self, limits=None):
        """Check U Im A inside Im A^[p] by module membership."""
        if self.beta == 0 or self.alpha == 0:
            return True
        p = self.p
        Ap = self.A.map(lambda f: f.frobenius(p))
        gb = ModuleGB(self.ring, self.beta, limits=limits)
        gb.add_all(c.to_terms() for c in Ap.columns())
        return all(gb.contains((self.U @ c).to_terms()) for c in self.A.columns())

    def __str__(self):
        return f"A =\n{self.A}\nU =\n{self.U}"


# -- K-span canonical forms ------------------------------------------------


class TermIndex:
    """Columns of (R_{<=D})^rank, sorted from the largest term down."""

    def __init__(self, ring, rank, D):
        self.ring = ring
        self.rank = rank
        self.D = D
        monos = monomials_up_to(ring.nvars, D)
        key = ring.rank_key
        terms = [(i, m) for i in range(rank) for m in monos]
        terms.sort(key=lambda t: (t[0],) + key(t[1]))
        self.terms = terms
        self.col = {t: k for k, t in enumerate(terms)}
        self.monos = monos

    def __len__(self):
        return len(self.terms)

    def row_of(self, v):
        row = np.zeros(len(self.terms), dtype=np.int64)
        for pos, f in enumerate(v.coords):
            for m, c in f._d.items():
                k = self.col.get((pos, m))
                if k is None:
                    raise BoundViolationError(
                        f"term of degree {sum(m)} outside the truncated space (D={self.D})")
                row[k] = c
        return row

    def vector_of(self, row):
        parts = [{} for _ in range(self.rank)]
        for k in np.flatnonzero(row):
            pos, m = self.terms[k]
            parts[pos][m] = int(row[k])
        return FreeVector(self.ring, [self.ring.from_dict(d) for d in parts])


@lru_cache(maxsize=64)
def term_index(ring, rank, D):
    return TermIndex(ring, rank, D)


class SpanForm:
    """Reduced echelon basis of the K-span of a finite set of vectors."""

    def __init__(self, ring, rank, D, matrix, pivots):
        self.ring = ring
        self.rank = rank
        self.D = D
        self.matrix = matrix
        self.pivots = list(pivots)
        self._basis = None

    @property
    def basis(self):
        if self._basis is None:
            index = term_index(self.ring, self.rank, self.D)
            self._basis = tuple(index.vector_of(r) for r in self.matrix)
        return self._basis

    @property
    def dim(self):
        return self.matrix.shape[0]

    def is_zero(self):
        return self.matrix.shape[0] == 0

    def degree(self):
        if self.is_zero():
            return -1
        index = term_index(self.ring, self.rank, self.D)
        used = np.flatnonzero(np.any(self.matrix != 0, axis=0))
        return max(sum(index.terms[k][1]) for k in used)

    def gens(self):
        return SubmoduleGens(self.ring, self.rank, self.basis)

    def __eq__(self, other):
        if not isinstance(other, SpanForm):
            return NotImplemented
        if self.rank != other.rank or self.dim != other.dim:
            return False
        if self.ring == other.ring and self.D == other.D:
            return self.pivots == other.pivots and np.array_equal(self.matrix, other.matrix)
        return self.basis == other.basis

    def __hash__(self):
        return hash((self.rank, self.basis))

    def __repr__(self):
        return f"SpanForm(rank={self.rank}, dim={self.dim}, basis=[{', '.join(map(str, self.basis))}])"


def span_canonicalize(gens, D=None):
    """Canonical reduced echelon basis of the K-span of ``gens``.

    ``gens`` is a SubmoduleGens; ``D`` defaults to the largest generator degree.
    """
    ring, rank = gens.ring, gens.rank
    if D is None:
        D = max(gens.degree_bound, 0)
    index = term_index(ring, rank, D)
    if not gens.gens:
        return SpanForm(ring, rank, D, np.zeros((0, len(index)), dtype=np.int64), [])
    rows = np.vstack([index.row_of(g) for g in gens.gens])
    m, piv = _linalg.span_rref(rows, ring.p, len(index))
    return SpanForm(ring, rank, D, m, piv)


def _sparse_rref(rows, hk, p):
    """Reduced echelon form of dictionary rows ``{term: coeff}``.

    Pivots are leading terms (smallest ``hk``).  Returns the rows sorted by
    pivot, each monic and free of every other pivot term.
    """
    piv = {}
    for row in rows:
        f = {t: c % p for t, c in row.items() if c % p}
        heap = [(hk(t), t) for t in f]
        heapify(heap)
        while heap:
            _, t = heappop(heap)
            c = f.get(t)
            if c is None:
                continue
            g = piv.get(t)
            if g is None:
                lead = t
                break
            for tt, gc in g.items():
                v = f.get(tt)
                if v is None:
                    f[tt] = (-c * gc) % p
                    heappush(heap, (hk(tt), tt))
                else:
                    v = (v - c * gc) % p
                    if v:
                        f[tt] = v
                    else:
                        del f[tt]
        else:
            continue
        inv = pow(f[lead], -1, p)
        piv[lead] = {t: c * inv % p for t, c in f.items()}
    # back substitution, smallest pivots first
    order = sorted(piv, key=hk, reverse=True)
    done = set()
    for t in order:
        row = piv[t]
        for u in [u for u in row if u != t and u in done]:
            c = row.get(u)
            if not c:
                continue
            for tt, gc in piv[u].items():
                v = (row.get(tt, 0) - c * gc) % p
                if v:
                    row[tt] = v
                else:
                    row.pop(tt, None)
        done.add(t)
    return [piv[t] for t in sorted(piv, key=hk)]


class SparseSpan:
    """A K-span in reduced echelon form with dictionary rows.

    Same interface as :class:`SpanForm`; used when dense rows would not fit.
    """

    def __init__(self, ring, rank, D, rows):
        self.ring = ring
        self.rank = rank
        self.D = D
        self.rows = rows
        self._basis = None

    @classmethod
    def of(cls, gens, D):
        hk = _term_key(gens.ring)
        rows = _sparse_rref([g.to_terms() for g in gens.gens], hk, gens.ring.p)
        return cls(gens.ring, gens.rank, D, rows)

    @property
    def basis(self):
        if self._basis is None:
            self._basis = tuple(FreeVector.from_terms(self.ring, self.rank, r)
                                for r in self.rows)
        return self._basis

    @property
    def dim(self):
        return len(self.rows)

    def is_zero(self):
        return not self.rows

    def degree(self):
        return max((sum(m) for r in self.rows for _, m in r), default=-1)

    def gens(self):
        return SubmoduleGens(self.ring, self.rank, self.basis)

    def _canon(self):
        return [sorted(r.items()) for r in self.rows]

    def __eq__(self, other):
        if isinstance(other, SparseSpan):
            return self.rank == other.rank and self._canon() == other._canon()
        if isinstance(other, SpanForm):
            return self.rank == other.rank and self.basis == other.basis
        return NotImplemented

    def __hash__(self):
        return hash((self.rank, self.basis))

    def __repr__(self):
        return f"SparseSpan(rank={self.rank}, dim={self.dim})"


def _term_key(ring):
    key = ring.rank_key
    return lambda t: (t[0],) + key(t[1])


def _root_generators(U, basis, D, limits=None):
    gens = []
    seen = set()
    for k, v in enumerate(basis):
        if limits is not None and k % 64 == 63:
            limits.check_deadline("fsupport")
        w = U @ v
        if w.is_zero():
            continue
        for u in frob_decompose(w, 1).values():
            if u.degree > D:
                raise BoundViolationError(
                    f"root generator of degree {u.degree} exceeds the bound D={D}")
            if u not in seen:
                seen.add(u)
                gens.append(u)
    return SubmoduleGens(U.ring, U.nrows, gens)


def _sparse_step(U, span, D, limits=None):
    return SparseSpan.of(_root_generators(U, span.basis, D, limits), D)


# -- the iteration ---------------------------------------------------------


class FrobeniusOperator:
    """The F_p-linear map v -> (u_b(U v))_b on (R_{<=D})^beta as a matrix.

    Row k of ``phi`` holds the images of the k-th basis term of the index,
    concatenated over the exponent classes b.
    """

    def __init__(self, U, D):
        ring = U.ring
        p = ring.p
        beta = U.nrows
        n = ring.nvars
        index = term_index(ring, beta, D)
        self.index = index
        self.p = p
        N = len(index)
        monos = np.array(index.monos, dtype=np.int64).reshape(len(index.monos), n)
        radix = (D + 1) ** np.arange(n, dtype=np.int64)
        pradix = p ** np.arange(n, dtype=np.int64)
        lut = np.full((beta, (D + 1) ** n), -1, dtype=np.int64)
        mcode = monos @ radix
        for (i, m), k in index.col.items():
            lut[i, int(np.dot(m, radix)) if n else 0] = k
        rows_k, bcodes, cols_t, coeffs = [], [], [], []
        for r in range(beta):
            for i in range(beta):
                f = U.rows[r][i]
                for a, c in f._d.items():
                    e = monos + np.array(a, dtype=np.int64)
                    u = e // p
                    if n and int(u.sum(axis=1).max()) > D:
                        raise BoundViolationError(
                            f"root term of degree {int(u.sum(axis=1).max())} exceeds the bound D={D}")
                    rows_k.append(lut[i, mcode])
                    cols_t.append(lut[r, u @ radix])
                    bcodes.append((e % p) @ pradix)
                    coeffs.append(np.full(len(mcode), c, dtype=np.int64))
        if rows_k:
            rk = np.concatenate(rows_k)
            ct = np.concatenate(cols_t)
            slots_b, slot = np.unique(np.concatenate(bcodes), return_inverse=True)
            cf = np.concatenate(coeffs)
            nb = len(slots_b)
        else:
            nb = 1
        self.nb = nb
        phi = np.zeros((N, nb * N), dtype=np.float64)
        if rows_k:
            np.add.at(phi, (rk, slot.reshape(-1) * N + ct), cf)
            phi = np.mod(phi, p)
        self.phi = phi

    def apply(self, basis):
        """rref of the span of all u_b(U v) for rows v of ``basis``."""
        N = len(self.index)
        r = basis.shape[0]
        if r == 0:
            return basis, []
        p = self.p
        y = np.mod(basis.astype(np.float64) @ self.phi, p).astype(np.int64)
        y = y.reshape(r * self.nb, N)
        return _linalg.span_rref(y, p, N)


def _direct_step(U, span, D):
    return span_canonicalize(_root_generators(U, span.basis, D), D)


@dataclass
class IterationTrace:
    """Record of one run of the fixed-point iteration."""

    spans: list
    iterations: int
    D: int
    persisted: bool | None = None
    route: str = "operator"
    stopped_early: bool = False

    @property
    def stable(self):
        return self.spans[-1]

    @property
    def L(self):
        return self.stable.gens()

    @property
    def degrees(self):
        """Largest generator degree of L_1, L_2, ... (-1 for a zero iterate)."""
        return [s.degree() for s in self.spans[1:]]


def _choose_route(gm, D, route):
    if route != "auto":
        return route
    N = gm.beta * len(monomials_up_to(gm.ring.nvars, D))
    nb = min(gm.p ** gm.ring.nvars, 1 << 30)
    lut = gm.beta * (D + 1) ** gm.ring.nvars
    if N * N * nb <= OPERATOR_MAX_ENTRIES and lut <= OPERATOR_MAX_ENTRIES:
        return "operator"
    if N <= DENSE_MAX_DIM:
        return "direct"
    return "sparse"


def iterate_support_trace(gm, max_iter=DEFAULT_MAX_ITER, route="auto", extra=0, limits=None,
                          stop=None):
    """Run L_{j+1} = I_1(U L_j) from L_0 = R^beta to its first fixed point.

    Stops at the first j with span(L_{j+1}) == span(L_j), or with L_{j+1} = 0
    (zero is always a fixed point); the iteration count is j + 1, the number
    of root computations performed.  ``extra`` forced further steps check
    that the fixed point persists.  A deadline in ``limits`` is checked
    between steps.  ``stop(span)``, if given, is asked about every new
    iterate; a true answer ends the run there with ``stopped_early`` set (the
    last span is then an iterate, not necessarily the fixed point).
    """
    if route not in ("auto", "operator", "direct", "sparse"):
        raise ValueError(f"unknown route {route!r}")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    ring = gm.ring
    beta = gm.beta
    D = gm.degree_bound
    route = _choose_route(gm, D, route)
    start = SubmoduleGens.free(ring, beta)
    if route == "sparse":
        span = SparseSpan.of(start, D)
    else:
        index = term_index(ring, beta, D)
        span = span_canonicalize(start, D)
    spans = [span]
    if beta == 0:
        return IterationTrace(spans, 0, D, True if extra else None, route)
    op = FrobeniusOperator(gm.U, D) if route == "operator" else None

    def step(s):
        if op is not None:
            m, piv = op.apply(s.matrix)
            if not len(piv):
                m = np.zeros((0, len(index)), dtype=np.int64)
            return SpanForm(ring, beta, D, m, piv)
        if route == "sparse":
            return _sparse_step(gm.U, s, D, limits)
        return _direct_step(gm.U, s, D)

    for j in range(max_iter):
        if limits is not None:
            limits.check_deadline("fsupport")
        nxt = step(span)
        spans.append(nxt)
        if nxt.degree() > D:
            raise BoundViolationError(f"iterate degree {nxt.degree()} exceeds D={D}")
        if stop is not None and not (nxt == span or nxt.is_zero()) and stop(nxt):
            return IterationTrace(spans, j + 1, D, None, route, stopped_early=True)
        if nxt == span or nxt.is_zero():
            trace = IterationTrace(spans, j + 1, D, None, route)
            if extra:
                s = nxt
                ok = True
                for _ in range(extra):
                    s = step(s)
                    ok = ok and s == nxt
                trace.persisted = ok
            return trace
        span = nxt
    raise NonTerminationError(max_iter)


def iterate_support(gm, max_iter=DEFAULT_MAX_ITER, route="auto", limits=None):
    """Return ``(stable L, iterations)``; see :func:`iterate_support_trace`."""
    trace = iterate_support_trace(gm, max_iter, route, limits=limits)
    return trace.L, trace.iterations


# -- vanishing and support -------------------------------------------------


def _column_gb(A, limits=None):
    gb = ModuleGB(A.ring, A.nrows, limits=limits)
    gb.add_all(c.to_terms() for c in A.columns())
    return gb


def _inside_image(gm, limits):
    """Predicate "every basis vector of the span lies in Im A"."""
    if gm.alpha == 0:
        return lambda span: span.is_zero()
    gb = _column_gb(gm.A, limits)
    return lambda span: all(gb.contains(g.to_terms()) for g in span.basis)


def vanishing_trace(gm, max_iter=DEFAULT_MAX_ITER, limits=None):
    """Iterate until the fixed point or until an iterate lies inside Im A.

    The iterates descend as modules, so once L_j (j >= 1) is inside Im A the
    fixed point is too and the module vanishes; there is no need to reach it.
    Returns ``(vanishes, trace)``.
    """
    inside = _inside_image(gm, limits)
    trace = iterate_support_trace(gm, max_iter, limits=limits, stop=inside)
    if trace.stopped_early:
        return True, trace
    return inside(trace.stable), trace


def is_zero_module(gm, max_iter=DEFAULT_MAX_ITER, limits=None):
    """True iff the limit module vanishes, i.e. the stable L lies in Im A."""
    if gm.beta == 0:
        return True
    return vanishing_trace(gm, max_iter, limits)[0]


def minimal_quotient_generators(L, N, limits=None):
    """Greedy subset of L's generators that still generates (L + N) / N.

    Generators are tried by increasing degree; one is kept only when it is
    not already in N plus the ones kept so far.
    """
    gb = ModuleGB(L.ring, L.rank, limits=limits)
    gb.add_all(g.to_terms() for g in N.gens)
    chosen = []
    for g in sorted(L.gens, key=lambda v: v.degree):
        terms = g.to_terms()
        if not gb.contains(terms):
            chosen.append(g)
            gb.add(terms)
    return chosen


@dataclass
class QuotientSupport:
    W: PolyMatrix
    J: list
    k: int

    @property
    def is_zero(self):
        return any(f.is_unit() for f in self.J)

    @property
    def is_everything(self):
        return not self.J


def quotient_support(L, N, limits=None, minimize=True):
    """Support data of (L + N) / N for submodules L, N of R^beta.

    Returns the (pruned) presentation W and the ideal J of its maximal minors.
    """
    ring = L.ring
    chosen = minimal_quotient_generators(L, N, limits) if minimize else list(L.gens)
    k = len(chosen)
    if k == 0:
        return QuotientSupport(PolyMatrix(ring, [], 0), [ring.one], 0)
    A = N.to_matrix() if N.gens else PolyMatrix(ring, [[] for _ in range(N.rank)], 0)
    W = presentation_matrix(chosen, A, limits)
    W, _ = minimize_presentation(W)
    J = minors_ideal(W, W.nrows, limits)
    if J and not any(f.is_unit() for f in J):
        try:
            J = reduced_ideal_basis(J, limits)
        except ResourceLimitError:
            pass
    elif any(f.is_unit() for f in J):
        J = [ring.one]
    return QuotientSupport(W, J, W.nrows)


@dataclass
class SupportReport:
    """Outcome of :func:`support_ideal`."""

    L: SubmoduleGens
    iterations: int
    W: PolyMatrix
    J: list
    module_is_zero: bool
    support_is_everything: bool
    degrees: list = field(default_factory=list)
    stopped_early: bool = False

    def J_str(self):
        if not self.J:
            return "0"
        return ", ".join(str(f) for f in self.J)

    def as_dict(self):
        return {
            "iterations": self.iterations,
            "stable_L": [str(g) for g in self.L.gens],
            "W": [[str(a) for a in row] for row in self.W.rows],
            "J": [str(f) for f in self.J],
            "module_is_zero": self.module_is_zero,
            "support_is_everything": self.support_is_everything,
            "degrees": list(self.degrees),
            "stopped_early": self.stopped_early,
        }


def support_ideal(gm, max_iter=DEFAULT_MAX_ITER, limits=None, vanishing_shortcut=False):
    """Fixed point L, a presentation W of (L + Im A)/Im A, and J = its maximal minors.

    ``J == [1]`` means the module is zero; ``J == []`` (the zero ideal) means
    the support is all of Spec R.  With ``vanishing_shortcut`` the iteration
    stops at the first iterate inside Im A (see :func:`vanishing_trace`);
    the report then carries that iterate and ``stopped_early``.
    """
    ring = gm.ring
    if gm.beta == 0:
        return SupportReport(SubmoduleGens(ring, 0, []), 0, PolyMatrix(ring, [], 0),
                             [ring.one], True, False)
    if vanishing_shortcut:
        vanishes, trace = vanishing_trace(gm, max_iter, limits)
        if vanishes:
            return SupportReport(trace.L, trace.iterations, PolyMatrix(ring, [], 0),
                                 [ring.one], True, False, trace.degrees,
                                 stopped_early=trace.stopped_early)
    else:
        trace = iterate_support_trace(gm, max_iter, limits=limits)
    L = trace.L
    qs = quotient_support(L, SubmoduleGens.from_matrix(gm.A), limits)
    return SupportReport(L, trace.iterations, qs.W, qs.J, qs.is_zero, qs.is_everything,
                         trace.degrees)

