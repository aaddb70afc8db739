"""A small Buchberger engine over F_p[x1..xn] for ideals and submodules of R^r.

Vectors are handled as flat dictionaries ``{(position, monomial): coeff}``
under a position-over-term order (position 0 highest).  A basis may *track*
its input generators: every element then carries a second dictionary with
its expression in the inputs, which gives lifts (division with explicit
coefficients) and syzygies.  Syzygies are read off Schreyer style: reduce the
S-vectors of the finished basis (one per minimal lcm quotient) to zero and
collect the tracked coefficients, plus the reductions of the inputs.

Every resource limit raises :class:`ResourceLimitError`; nothing is ever
silently truncated.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from heapq import heapify, heappop, heappush
from itertools import combinations
from operator import add, sub

from .errors import FrobSupportError, ResourceLimitError, ShapeError
from .modules import FreeVector, PolyMatrix, SubmoduleGens
from .ring import Polynomial, PolynomialRing, divides, monomial_lcm


@dataclass
class GBLimits:
    """Explicit cutoffs for Groebner-type computations."""

    max_basis_size: int = 4000
    max_degree: int | None = None
    max_pairs: int = 2_000_000
    max_minor_subsets: int = 500_000
    max_poly_terms: int = 500_000
    deadline: float | None = None

    def with_time_budget(self, seconds):
        """A copy whose computations stop ``seconds`` from now (monotonic clock)."""
        return replace(self, deadline=time.monotonic() + seconds)

    def check_deadline(self, stage="groebner"):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimitError(stage, "time budget exhausted")


DEFAULT_LIMITS = GBLimits()


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Elem:
    __slots__ = ("f", "t", "pos", "mono", "deg")

    def __init__(self, f, t, pos, mono):
        self.f = f
        self.t = t
        self.pos = pos
        self.mono = mono
        self.deg = sum(mono)


class ModuleGB:
    """Incremental Groebner basis of a submodule of R^rank.

    After every :meth:`add` the basis is complete, so membership tests can be
    interleaved with additions.
    """

    def __init__(self, ring, rank, track=False, limits=None):
        self.ring = ring
        self.p = ring.p
        self.rank = rank
        self.track = track
        self.limits = limits or DEFAULT_LIMITS
        self._key = ring.rank_key
        self._kcache = {}
        self.elems = []
        self.by_pos = {}
        self.pairs = []
        self.inputs = []
        self.ngens = 0
        self._zero = ring.zero_exps

    # -- term order helpers

    def _hk(self, term):
        k = self._kcache.get(term)
        if k is None:
            k = (term[0],) + self._key(term[1])
            self._kcache[term] = k
        return k

    def _lead(self, f):
        return min(f, key=self._hk)

    # -- reduction

    def _find_reducer(self, pos, mono):
        elems = self.elems
        d = sum(mono)
        for gi in self.by_pos.get(pos, ()):
            g = elems[gi]
            if g.deg <= d and divides(g.mono, mono):
                return g
        return None

    def _reduce(self, f, t=None, full=True):
        """Reduce ``f`` (mutated) by the basis; ``t`` accumulates tracking terms.

        Returns ``(remainder, t)``.
        """
        p = self.p
        hk = self._hk
        heap = [(hk(term), term) for term in f]
        heapify(heap)
        rem = {}
        find = self._find_reducer
        limits = self.limits
        steps = 0
        while heap:
            steps += 1
            if steps & 4095 == 0:
                limits.check_deadline()
                if len(f) > limits.max_poly_terms:
                    raise ResourceLimitError(
                        "groebner", f"intermediate vector exceeded {limits.max_poly_terms} terms")
            _, term = heappop(heap)
            c = f.get(term)
            if c is None:
                continue
            pos, mono = term
            g = find(pos, mono) if pos < self.rank else None
            if g is None:
                rem[term] = c
                del f[term]
                if not full:
                    rem.update(f)
                    f.clear()
                    break
                continue
            shift = tuple(map(sub, mono, g.mono))
            for (gp, gm), gc in g.f.items():
                nt = (gp, tuple(map(add, gm, shift)))
                v = f.get(nt)
                if v is None:
                    f[nt] = (-c * gc) % p
                    heappush(heap, (hk(nt), nt))
                else:
                    v = (v - c * gc) % p
                    if v:
                        f[nt] = v
                    else:
                        del f[nt]
            if t is not None:
                for (gp, gm), gc in g.t.items():
                    nt = (gp, tuple(map(add, gm, shift)))
                    v = (t.get(nt, 0) - c * gc) % p
                    if v:
                        t[nt] = v
                    else:
                        t.pop(nt, None)
        return rem, t

    def _check_input(self, terms):
        for pos, _ in terms:
            if not 0 <= pos < self.rank:
                raise ShapeError(f"position {pos} outside rank {self.rank}")

    # -- building

    def add(self, terms):
        """Add a generator (flat term dict).  Returns False if it was redundant."""
        self._check_input(terms)
        f = dict(terms)
        t = None
        if self.track:
            idx = self.ngens
            self.ngens += 1
            self.inputs.append((dict(terms), idx))
            t = {(idx, self._zero): 1}
        if not f:
            return False
        f, t = self._reduce(f, t)
        if not f:
            return False
        self._insert(f, t)
        self._complete()
        return True

    def add_all(self, term_dicts):
        """Add many generators before running the pair completion once."""
        added = False
        for terms in term_dicts:
            self._check_input(terms)
            f = dict(terms)
            t = None
            if self.track:
                idx = self.ngens
                self.ngens += 1
                self.inputs.append((dict(terms), idx))
                t = {(idx, self._zero): 1}
            if not f:
                continue
            f, t = self._reduce(f, t)
            if f:
                self._insert(f, t)
                added = True
        self._complete()
        return added

    def _insert(self, f, t):
        p = self.p
        lead = self._lead(f)
        c = f[lead]
        if c != 1:
            inv = pow(c, -1, p)
            f = {k: v * inv % p for k, v in f.items()}
            if t is not None:
                t = {k: v * inv % p for k, v in t.items()}
        h = _Elem(f, t, lead[0], lead[1])
        hi = len(self.elems)
        self.elems.append(h)
        self._gm_update(hi)
        if len(self.by_pos_all()) > self.limits.max_basis_size:
            raise ResourceLimitError(
                "groebner", f"basis exceeded {self.limits.max_basis_size} elements")

    def by_pos_all(self):
        out = []
        for lst in self.by_pos.values():
            out.extend(lst)
        return out

    def _pair_key(self, pos, L, i, j):
        return (sum(L), tuple(-x for x in self._hk((pos, L))), i, j)

    def _gm_update(self, hi):
        """Gebauer-Moeller installation of element ``hi``."""
        elems = self.elems
        h = elems[hi]
        pos, lm = h.pos, h.mono
        same = self.by_pos.get(pos, [])
        ideal = self.rank == 1
        C = [(gi, monomial_lcm(lm, elems[gi].mono)) for gi in same]
        D = []
        while C:
            gi, L = C.pop()
            if ideal and _coprime(lm, elems[gi].mono):
                D.append((gi, L, True))
                continue
            if any(divides(L2, L) for _, L2 in C):
                continue
            if any(divides(L2, L) for _, L2, _ in D):
                continue
            D.append((gi, L, False))
        kept = []
        for entry in self.pairs:
            _, i, j, L, ppos = entry
            if (ppos == pos and divides(lm, L)
                    and monomial_lcm(elems[i].mono, lm) != L
                    and monomial_lcm(elems[j].mono, lm) != L):
                continue
            kept.append(entry)
        for gi, L, cop in D:
            if not cop:
                kept.append((self._pair_key(pos, L, gi, hi), gi, hi, L, pos))
        heapify(kept)
        self.pairs = kept
        if len(kept) > self.limits.max_pairs:
            raise ResourceLimitError("groebner", f"more than {self.limits.max_pairs} pending pairs")
        self.by_pos[pos] = [gi for gi in same if not divides(lm, elems[gi].mono)] + [hi]

    def _spoly(self, a, b):
        p = self.p
        L = monomial_lcm(a.mono, b.mono)
        sa = tuple(map(sub, L, a.mono))
        sb = tuple(map(sub, L, b.mono))
        f = {}
        for (pp, m), c in a.f.items():
            f[(pp, tuple(map(add, m, sa)))] = c
        for (pp, m), c in b.f.items():
            nt = (pp, tuple(map(add, m, sb)))
            v = (f.get(nt, 0) - c) % p
            if v:
                f[nt] = v
            else:
                f.pop(nt, None)
        t = None
        if self.track:
            t = {}
            for (pp, m), c in a.t.items():
                t[(pp, tuple(map(add, m, sa)))] = c
            for (pp, m), c in b.t.items():
                nt = (pp, tuple(map(add, m, sb)))
                v = (t.get(nt, 0) - c) % p
                if v:
                    t[nt] = v
                else:
                    t.pop(nt, None)
        return f, t

    def _complete(self):
        maxdeg = self.limits.max_degree
        elems = self.elems
        while self.pairs:
            self.limits.check_deadline()
            _, i, j, L, _ = heappop(self.pairs)
            if maxdeg is not None and sum(L) > maxdeg:
                raise ResourceLimitError(
                    "groebner", f"S-pair degree {sum(L)} exceeds max degree {maxdeg}")
            f, t = self._spoly(elems[i], elems[j])
            if not f:
                continue
            f, t = self._reduce(f, t)
            if f:
                self._insert(f, t)

    # -- queries

    def basis_indices(self):
        return sorted(self.by_pos_all())

    def basis(self):
        return [self.elems[i] for i in self.basis_indices()]

    def normal_form(self, terms):
        rem, _ = self._reduce(dict(terms))
        return rem

    def contains(self, terms):
        self._check_input(terms)
        return not self.normal_form(terms)

    def lift(self, terms):
        """Coefficients ``c`` with ``terms == sum_i c_i * input_i``, or None."""
        if not self.track:
            raise FrobSupportError("lift needs a tracking basis")
        rem, t = self._reduce(dict(terms), {})
        if rem:
            return None
        p = self.p
        return {k: (-v) % p for k, v in t.items()}

    def interreduce(self):
        """Tail-reduce every basis element (leads are already minimal)."""
        idx = self.basis_indices()
        for gi in idx:
            g = self.elems[gi]
            lead = (g.pos, g.mono)
            tail = {k: v for k, v in g.f.items() if k != lead}
            t = dict(g.t) if g.t is not None else None
            # detach g so it cannot reduce itself
            self.by_pos[g.pos].remove(gi)
            rem, t = self._reduce(tail, t)
            rem[lead] = 1
            g.f = rem
            g.t = t
            self.by_pos[g.pos].append(gi)
            self.by_pos[g.pos].sort()

    def syzygy_terms(self):
        """Generators of the syzygy module of the inputs, as tracking-term dicts."""
        if not self.track:
            raise FrobSupportError("syzygies need a tracking basis")
        out = []
        elems = self.elems
        for pos in sorted(self.by_pos):
            lst = sorted(self.by_pos[pos])
            for jj, j in enumerate(lst):
                mj = elems[j].mono
                quots = []
                for i in lst[:jj]:
                    L = monomial_lcm(elems[i].mono, mj)
                    quots.append((i, tuple(map(sub, L, mj))))
                for k, (i, q) in enumerate(quots):
                    minimal = True
                    for k2, (_, q2) in enumerate(quots):
                        if k2 != k and divides(q2, q) and (q2 != q or k2 < k):
                            minimal = False
                            break
                    if not minimal:
                        continue
                    f, t = self._spoly(elems[i], elems[j])
                    rem, t = self._reduce(f, t)
                    if rem:
                        raise FrobSupportError("S-vector of a finished basis did not reduce to 0")
                    if t:
                        out.append(t)
        for terms, idx in self.inputs:
            t = {(idx, self._zero): 1}
            rem, t = self._reduce(dict(terms), t)
            if rem:
                raise FrobSupportError("input not in its own module")
            if t:
                out.append(t)
        return out

    def verify(self):
        """Recheck the Buchberger criterion on every same-position pair."""
        elems = self.basis()
        for a, b in combinations(elems, 2):
            if a.pos != b.pos:
                continue
            f, _ = self._spoly(a, b)
            rem, _ = self._reduce(f)
            if rem:
                return False
        return True


# -- public wrappers -------------------------------------------------------


def _as_vectors(gens, ring=None):
    """Normalize a list of Polynomials / FreeVectors into (ring, rank, vectors)."""
    gens = list(gens)
    if isinstance(gens, SubmoduleGens):
        return gens.ring, gens.rank, list(gens.gens)
    vecs = []
    rank = None
    for g in gens:
        if isinstance(g, Polynomial):
            ring = ring or g.ring
            g = FreeVector(ring, [g])
        ring = ring or g.ring
        if rank is None:
            rank = g.rank
        elif g.rank != rank:
            raise ShapeError("generators of different ranks")
        vecs.append(g)
    return ring, rank, vecs


def _to_vector(v, ring):
    if isinstance(v, Polynomial):
        return FreeVector(ring, [v])
    return v


class GroebnerBasis:
    """Groebner basis of an ideal (rank 1, Polynomial generators) or a submodule."""

    def __init__(self, ring, rank, gens, track=False, limits=None, is_ideal=None):
        self.ring = ring
        self.rank = rank
        self.order = ring.order
        self.is_ideal = rank == 1 if is_ideal is None else is_ideal
        self.inputs = list(gens)
        self._gb = ModuleGB(ring, rank, track=track, limits=limits)
        self._gb.add_all(g.to_terms() for g in self.inputs)
        self._gb.interreduce()

    @property
    def gens(self):
        out = [FreeVector.from_terms(self.ring, self.rank, e.f) for e in self._gb.basis()]
        out.sort(key=lambda v: self._sort_key(v))
        if self.is_ideal:
            return [v[0] for v in out]
        return out

    def _sort_key(self, v):
        terms = v.to_terms()
        hk = self._gb._hk
        return sorted(hk(t) for t in terms)

    def leads(self):
        return [(e.pos, e.mono) for e in self._gb.basis()]

    def add(self, v):
        return self._gb.add(_to_vector(v, self.ring).to_terms())

    def normal_form(self, v):
        v = _to_vector(v, self.ring)
        if v.rank != self.rank:
            raise ShapeError(f"rank-{v.rank} vector against a rank-{self.rank} basis")
        out = FreeVector.from_terms(self.ring, self.rank, self._gb.normal_form(v.to_terms()))
        return out[0] if self.is_ideal else out

    def contains(self, v):
        v = _to_vector(v, self.ring)
        if v.rank != self.rank:
            raise ShapeError(f"rank-{v.rank} vector against a rank-{self.rank} basis")
        return not self._gb.normal_form(v.to_terms())

    def contains_one(self):
        z = self.ring.zero_exps
        return any(e.mono == z for e in self._gb.basis())

    def lift(self, v):
        """Coefficient list expressing ``v`` in the input generators, or None."""
        v = _to_vector(v, self.ring)
        t = self._gb.lift(v.to_terms())
        if t is None:
            return None
        return _track_to_vector(self.ring, len(self.inputs), t).coords

    def syzygies(self):
        n = len(self.inputs)
        return [_track_to_vector(self.ring, n, t) for t in self._gb.syzygy_terms()]

    def verify(self):
        return self._gb.verify()

    def __len__(self):
        return len(self._gb.by_pos_all())


def _track_to_vector(ring, n, t):
    parts = [{} for _ in range(n)]
    for (idx, mono), c in t.items():
        parts[idx][mono] = c
    return FreeVector(ring, [ring.from_dict(d) for d in parts])


def groebner_basis(gens, order=None, limits=None, ring=None):
    """Reduced Groebner basis of the ideal or module generated by ``gens``."""
    ring, rank, vecs = _as_vectors(gens, ring)
    if ring is None:
        raise ValueError("cannot infer the ring of an empty generator list")
    if order is not None:
        order = getattr(order, "monomial", order)
        if order != ring.order.monomial:
            ring = PolynomialRing(ring.p, ring.variables, order)
            vecs = [FreeVector(ring, [ring.from_dict(f._d) for f in v]) for v in vecs]
    is_ideal = all(isinstance(g, Polynomial) for g in gens) if gens else rank == 1
    return GroebnerBasis(ring, rank, vecs, limits=limits, is_ideal=is_ideal)


def normal_form(v, gb):
    return gb.normal_form(v)


def syzygies(gens, ring=None, rank=None, limits=None):
    """Generators of the module of relations ``sum c_i * gens_i = 0``.

    Zero generators contribute the corresponding unit vectors.
    """
    gens = list(gens)
    if not gens:
        return []
    ring, rk, vecs = _as_vectors(gens, ring)
    rank = rk if rank is None else rank
    n = len(vecs)
    if rank == 0:
        return [FreeVector.unit(ring, n, i) for i in range(n)]
    gb = ModuleGB(ring, rank, track=True, limits=limits)
    gb.add_all(v.to_terms() for v in vecs)
    out = []
    seen = set()
    for t in gb.syzygy_terms():
        v = _track_to_vector(ring, n, t)
        v = _monic_vector(v)
        if not v.is_zero() and v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _monic_vector(v):
    """Scale so the leading coefficient (first nonzero coordinate) is 1."""
    for f in v.coords:
        if f:
            c = f.lead_coefficient()
            if c != 1:
                return v * pow(c, -1, v.ring.p)
            return v
    return v


def lift(v, gens, limits=None):
    """Coefficients expressing ``v`` in ``gens`` (None if ``v`` is not in the span)."""
    ring, rank, vecs = _as_vectors(gens, getattr(v, "ring", None))
    v = _to_vector(v, ring)
    gb = ModuleGB(ring, v.rank, track=True, limits=limits)
    gb.add_all(g.to_terms() for g in vecs)
    t = gb.lift(v.to_terms())
    if t is None:
        return None
    return _track_to_vector(ring, len(vecs), t).coords


def module_contains(gens, v, ring=None, rank=None, limits=None):
    if isinstance(gens, SubmoduleGens):
        ring, rank, vecs = gens.ring, gens.rank, list(gens.gens)
    else:
        ring, rk, vecs = _as_vectors(gens, ring)
        rank = rk if rank is None else rank
    v = _to_vector(v, ring)
    if v.is_zero():
        return True
    if not vecs:
        return False
    gb = ModuleGB(ring, rank, limits=limits)
    gb.add_all(g.to_terms() for g in vecs)
    return gb.contains(v.to_terms())


def submodule_contains(big, small, limits=None):
    """True iff every generator of ``small`` lies in the module ``big``."""
    if small.is_zero():
        return True
    if big.is_zero():
        return False
    gb = ModuleGB(big.ring, big.rank, limits=limits)
    gb.add_all(g.to_terms() for g in big.gens)
    return all(gb.contains(g.to_terms()) for g in small.gens)


def submodules_equal(a, b, limits=None):
    return submodule_contains(a, b, limits) and submodule_contains(b, a, limits)


# -- presentations and minors ----------------------------------------------


def presentation_matrix(Lgens, A, limits=None):
    """A matrix W with Coker W isomorphic to (L + Im A) / Im A.

    Columns of W are the projections onto the first k coordinates of a
    generating set of syzygies of (g_1..g_k, columns of A).
    """
    if isinstance(Lgens, SubmoduleGens):
        ring, rank, lg = Lgens.ring, Lgens.rank, list(Lgens.gens)
    else:
        lg = list(Lgens)
        ring, rank = A.ring, A.nrows
    k = len(lg)
    if k == 0:
        return PolyMatrix(A.ring, [], 0)
    if A.nrows != rank:
        raise ShapeError(f"L lives in rank {rank}, A has {A.nrows} rows")
    syz = syzygies(lg + A.columns(), ring=ring, rank=rank, limits=limits)
    cols = []
    seen = set()
    for s in syz:
        c = tuple(s.coords[:k])
        if any(c) and c not in seen:
            seen.add(c)
            cols.append(c)
    return PolyMatrix.from_columns(ring, k, cols)


def minimize_presentation(A, U=None):
    """Drop generator/relation pairs that meet in a unit entry.

    ``A`` presents Coker A (rows = generators); the result presents an
    isomorphic module.  When ``U`` (a map Coker A -> Coker A^[p]) is given it
    is transported along the isomorphism.  Zero and repeated columns are
    removed too.  Returns ``(A', U')``.
    """
    ring = A.ring
    p = ring.p
    rows = [list(r) for r in A.rows]
    nrows, ncols = A.nrows, A.ncols
    cols = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    Urows = [list(r) for r in U.rows] if U is not None else None

    nr = nrows
    while True:
        found = None
        best = None
        for j, col in enumerate(cols):
            for i, a in enumerate(col):
                if a.is_unit():
                    weight = sum(1 for x in col if x)
                    if best is None or weight < best:
                        found, best = (i, j), weight
                    break
        if found is None:
            break
        r, c = found
        pivot = cols[c]
        uinv = pow(pivot[r].constant_value(), -1, p)
        newcols = []
        for j, col in enumerate(cols):
            if j == c:
                continue
            f = col[r]
            if f:
                f = f.scale(uinv)
                newcols.append([col[i] - pivot[i] * f for i in range(len(col)) if i != r])
            else:
                newcols.append([col[i] for i in range(len(col)) if i != r])
        if Urows is not None:
            urow_r = Urows[r]
            newU = []
            for i, row in enumerate(Urows):
                if i == r:
                    continue
                a = pivot[i]
                if a:
                    coef = a.frobenius(p).scale(uinv)
                    newU.append([row[j] - coef * urow_r[j] for j in range(len(row)) if j != r])
                else:
                    newU.append([row[j] for j in range(len(row)) if j != r])
            Urows = newU
        cols = newcols
        nr -= 1
    seen = set()
    kept = []
    for col in cols:
        key = tuple(col)
        if any(col) and key not in seen:
            seen.add(key)
            kept.append(col)
    A2 = PolyMatrix.from_columns(ring, nr, kept)
    U2 = PolyMatrix(ring, Urows, nr) if Urows is not None else None
    return A2, U2


def prune_presentation(W):
    """Fitting-invariant minimization of a presentation matrix."""
    return minimize_presentation(W)[0]


def minors_ideal(W, k=None, limits=None):
    """Nonzero k x k minors of W (k defaults to the row count).

    k = 0 gives the unit ideal; fewer than k columns give the zero ideal
    (an empty list).
    """
    ring = W.ring
    limits = limits or DEFAULT_LIMITS
    k = W.nrows if k is None else k
    if k == 0:
        return [ring.one]
    if W.ncols < k or W.nrows < k:
        return []
    from math import comb
    if comb(W.ncols, k) > limits.max_minor_subsets:
        raise ResourceLimitError(
            "minors", f"{comb(W.ncols, k)} column subsets exceed {limits.max_minor_subsets}")
    rows = W.rows[:k] if k == W.nrows else None
    if rows is None:
        out = []
        seen = set()
        for rs in combinations(range(W.nrows), k):
            sub_w = W.submatrix(rows=rs)
            for f in minors_ideal(sub_w, k, limits):
                if f not in seen:
                    seen.add(f)
                    out.append(f)
        return out
    # level r: determinants of rows[0..r) against r-subsets of columns
    prev = {(): ring.one}
    for r in range(1, k + 1):
        row = rows[r - 1]
        cur = {}
        for S in combinations(range(W.ncols), r):
            acc = ring.zero
            for pos, c in enumerate(S):
                a = row[c]
                if not a:
                    continue
                sub_det = prev.get(S[:pos] + S[pos + 1:])
                if sub_det is None or not sub_det:
                    continue
                term = a * sub_det
                acc = acc + term if (r - 1 + pos) % 2 == 0 else acc - term
            if acc:
                cur[S] = acc
        prev = cur
    out = []
    seen = set()
    for f in prev.values():
        f = f.monic()
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


# -- colon, preimage, radical, intersection --------------------------------


def preimage_colon(N, V, rank=None, limits=None):
    """{v in R^beta : V v in N}.

    ``N`` is a SubmoduleGens of R^gamma; ``V`` a gamma x beta PolyMatrix, or a
    Polynomial g (colon ``(N :_{R^gamma} g)``).
    """
    ring = N.ring
    gamma = N.rank
    if isinstance(V, Polynomial):
        V = PolyMatrix.diagonal(ring, [V] * gamma)
    if V.nrows != gamma:
        raise ShapeError(f"map has {V.nrows} rows, target module has rank {gamma}")
    beta = V.ncols
    if beta == 0:
        return SubmoduleGens(ring, 0, [])
    if gamma == 0:
        return SubmoduleGens.free(ring, beta)
    gens = V.columns() + list(N.gens)
    syz = syzygies(gens, ring=ring, rank=gamma, limits=limits)
    out = []
    seen = set()
    for s in syz:
        v = FreeVector(ring, s.coords[:beta])
        if not v.is_zero() and v not in seen:
            seen.add(v)
            out.append(v)
    return SubmoduleGens(ring, beta, out)


def _fresh_name(ring, base="t_"):
    name = base
    k = 0
    while name in ring.variables:
        k += 1
        name = f"{base}{k}"
    return name


def radical_membership(f, J, limits=None):
    """True iff ``f`` lies in the radical of the ideal generated by ``J``."""
    ring = f.ring
    J = [g for g in J if g]
    if not f:
        return True
    if not J:
        return False
    big = ring.extend(_fresh_name(ring))

    def up(g):
        return big.from_dict({m + (0,): c for m, c in g._d.items()})

    t = big.gens[-1]
    gens = [up(g) for g in J] + [big.one - t * up(f)]
    gb = ModuleGB(big, 1, limits=limits)
    gb.add_all(FreeVector(big, [g]).to_terms() for g in gens)
    z = big.zero_exps
    return any(e.mono == z for e in gb.basis())


def radicals_equal(I, J, limits=None):
    I = [g for g in I if g]
    J = [g for g in J if g]
    return (all(radical_membership(f, J, limits) for f in I)
            and all(radical_membership(g, I, limits) for g in J))


def ideal_contains(J, f, limits=None):
    J = [g for g in J if g]
    if not f:
        return True
    if not J:
        return False
    gb = ModuleGB(f.ring, 1, limits=limits)
    gb.add_all(FreeVector(f.ring, [g]).to_terms() for g in J)
    return gb.contains(FreeVector(f.ring, [f]).to_terms())


def ideal_intersection(I, J, limits=None):
    """Generators of I cap J, read off the syzygies of (I, J)."""
    I = [g for g in I if g]
    J = [g for g in J if g]
    if not I or not J:
        return []
    ring = I[0].ring
    syz = syzygies(I + J, ring=ring, rank=1, limits=limits)
    out = []
    seen = set()
    for s in syz:
        h = ring.zero
        for c, g in zip(s.coords[:len(I)], I):
            if c:
                h = h + c * g
        if h:
            h = h.monic()
            if h not in seen:
                seen.add(h)
                out.append(h)
    return out


def reduced_ideal_basis(J, limits=None):
    """Reduced Groebner basis of an ideal as a list of monic polynomials."""
    J = [g for g in J if g]
    if not J:
        return []
    return groebner_basis(J, limits=limits).gens


# -- resolutions and Frobenius chain maps ----------------------------------


class Resolution:
    """Free resolution 0 <- R <- R^b1 <- ... <- R^bs of R/J.

    ``matrices[i-1]`` is A_i: R^{b_i} -> R^{b_{i-1}} (shape b_{i-1} x b_i).
    """

    def __init__(self, ring, matrices):
        self.ring = ring
        self.matrices = list(matrices)
        self.ranks = [1] + [A.ncols for A in self.matrices]

    @property
    def length(self):
        return len(self.matrices)

    @property
    def Delta(self):
        """Largest entry degree over all differentials."""
        return max((A.max_degree() for A in self.matrices), default=0)

    def A(self, i):
        """A_i, or the zero map out of R^0 when i exceeds the length."""
        if 1 <= i <= len(self.matrices):
            return self.matrices[i - 1]
        if i == len(self.matrices) + 1:
            return PolyMatrix.zeros(self.ring, self.ranks[-1], 0)
        raise IndexError(i)

    def b(self, i):
        return self.ranks[i] if i < len(self.ranks) else 0

    def check(self):
        for A1, A2 in zip(self.matrices, self.matrices[1:]):
            if not (A1 @ A2).is_zero():
                return False
        return True


def _drop_unit_pair(prev, cur, r, c):
    """Remove basis vector r of the middle module and column c of ``cur``."""
    ring = cur.ring
    p = ring.p
    uinv = pow(cur.rows[r][c].constant_value(), -1, p)
    prev2 = prev.submatrix(cols=[j for j in range(prev.ncols) if j != r])
    rows = []
    for i in range(cur.nrows):
        if i == r:
            continue
        a = cur.rows[i][c]
        row = []
        for j in range(cur.ncols):
            if j == c:
                continue
            v = cur.rows[i][j]
            if a:
                v = v - a * cur.rows[r][j].scale(uinv)
            row.append(v)
        rows.append(row)
    cur2 = PolyMatrix(ring, rows, cur.ncols - 1)
    return prev2, cur2


def free_resolution(J, s, limits=None, ring=None):
    """Resolve R/J through A_s by iterated syzygies, stripping unit entries."""
    J = [g for g in J if g]
    if ring is None:
        if not J:
            raise ValueError("need a ring for the zero ideal")
        ring = J[0].ring
    if not J:
        return Resolution(ring, [])
    if ideal_contains(J, ring.one, limits):
        return Resolution(ring, [PolyMatrix(ring, [[ring.one]], 1)])
    mats = [PolyMatrix(ring, [J], len(J))]
    while len(mats) < s:
        A = mats[-1]
        syz = syzygies(A.columns(), ring=ring, rank=A.nrows, limits=limits)
        if not syz:
            break
        B = PolyMatrix.from_columns(ring, A.ncols, syz)
        while True:
            hit = None
            for i in range(B.nrows):
                for j in range(B.ncols):
                    if B.rows[i][j].is_unit():
                        hit = (i, j)
                        break
                if hit:
                    break
            if hit is None:
                break
            A, B = _drop_unit_pair(A, B, *hit)
        keep = [j for j in range(B.ncols) if any(B.rows[i][j] for i in range(B.nrows))]
        B = B.submatrix(cols=keep)
        mats[-1] = A
        if B.ncols == 0:
            break
        mats.append(B)
    res = Resolution(ring, mats)
    if not res.check():
        raise FrobSupportError("resolution differentials do not compose to zero")
    return res


def lift_frobenius_chain(res, e=1, limits=None, upto=None):
    """Chain maps theta_j with A_j theta_j = theta_{j-1} A_j^[q], q = p^e.

    theta_j maps the Frobenius transform F^e(res), a resolution of R/J^[q],
    into ``res``, covering the surjection R/J^[q] -> R/J.  Returns
    ``[theta_0, theta_1, ..., theta_s]`` with ``theta_0`` = identity; ``upto``
    stops early.
    """
    ring = res.ring
    q = ring.p ** e
    thetas = [PolyMatrix.identity(ring, 1)]
    last = res.length if upto is None else min(upto, res.length)
    for j in range(1, last + 1):
        A = res.A(j)
        rhs = thetas[-1] @ A.map(lambda f: f.frobenius(q))
        gb = ModuleGB(ring, A.nrows, track=True, limits=limits)
        gb.add_all(c.to_terms() for c in A.columns())
        cols = []
        for col in rhs.columns():
            t = gb.lift(col.to_terms())
            if t is None:
                raise FrobSupportError(
                    f"cannot lift through A_{j}: the input is not a resolution")
            cols.append(_track_to_vector(ring, A.ncols, t))
        theta = PolyMatrix.from_columns(ring, A.ncols, cols)
        if A @ theta != rhs:
            raise FrobSupportError(f"chain map square {j} does not commute")
        thetas.append(theta)
    return thetas
