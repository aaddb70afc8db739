"""Generating morphisms for local cohomology modules.

* ``principal_gm``: H^1_(f)(R) from R/f -> R/f^p, multiplication by f^(p-1).
* ``ext_gm``: H^j_J(R) from Ext^j(R/J, R) -> Ext^j(R/J^[p], R), induced by
  R/J^[p] -> R/J and computed from a free resolution and a lifted chain map.
* ``koszul_gm``: given (A, U) for M, the Koszul cohomology H^i(M; f) with the
  morphism that is U (f_S)^(p-1) on the summand indexed by S.  Iterating it
  yields generating morphisms for iterated local cohomology.

Subquotients ker/im are presented as cokernels by the same recipe throughout:
kernel generators G come from syzygies, the relations are the preimage of
the image under G, and maps are transported by lifting images of the columns
of G over the Frobenius transform G^[p].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .errors import FrobSupportError, ResourceLimitError
from .fsupport import GeneratingMorphism, iterate_support_trace, support_ideal
from .groebner import (
    ModuleGB,
    _track_to_vector,
    free_resolution,
    lift_frobenius_chain,
    minimize_presentation,
    preimage_colon,
    syzygies,
)
from .modules import PolyMatrix, SubmoduleGens, block_diagonal
from .ring import Polynomial, PolynomialRing, is_prime

DEFAULT_MAX_TERMS = 200_000


# -- helpers ---------------------------------------------------------------


def _frob(M, p):
    return M.map(lambda f: f.frobenius(p))


def _empty_cols(ring, nrows):
    return PolyMatrix(ring, [[] for _ in range(nrows)], 0)


def _lift_columns(targets, gens, rank, ring, limits=None, what="map"):
    """Matrix C with gens @ C == targets (columns), via a tracking basis."""
    gb = ModuleGB(ring, rank, track=True, limits=limits)
    gb.add_all(g.to_terms() for g in gens)
    cols = []
    for t in targets:
        lifted = gb.lift(t.to_terms())
        if lifted is None:
            raise FrobSupportError(f"cannot transport the {what}: image not in the target module")
        cols.append(_track_to_vector(ring, len(gens), lifted))
    return PolyMatrix.from_columns(ring, len(gens), cols)


@dataclass
class CohomPresentation:
    """ker/im presented as Coker A, with generators G inside the ambient free module."""

    G: PolyMatrix
    A: PolyMatrix

    @property
    def ngens(self):
        return self.G.ncols


def present_subquotient(Z, image, limits=None):
    """Present (Z + image) / image for submodules of one free module.

    ``Z`` is a SubmoduleGens containing ``image``.
    """
    ring = Z.ring
    G = Z.to_matrix()
    if G.ncols == 0:
        return CohomPresentation(G, _empty_cols(ring, 0))
    rel = preimage_colon(image, G, limits=limits)
    return CohomPresentation(G, rel.to_matrix() if rel.gens else _empty_cols(ring, G.ncols))


def prune_gm(gm):
    """Strip generator/relation pairs meeting in unit entries of A."""
    if gm.beta == 0:
        return gm
    A, U = minimize_presentation(gm.A, gm.U)
    if A.nrows == 0:
        return GeneratingMorphism.zero(gm.ring)
    return GeneratingMorphism(A, U)


def _transport(pres, images, limits, what):
    """U with G^[p] U == images (columns), for a presentation with generators G."""
    ring = pres.G.ring
    Gp = _frob(pres.G, ring.p)
    return _lift_columns(images, Gp.columns(), pres.G.nrows, ring, limits, what)


# -- principal and Ext -----------------------------------------------------


def principal_gm(f):
    """(A, U) = ([f], [f^(p-1)]) for H^1_(f)(R)."""
    if not isinstance(f, Polynomial):
        raise TypeError("principal_gm needs a Polynomial")
    if f.is_zero() or f.is_unit():
        raise ValueError("principal_gm needs a nonzero nonunit f")
    ring = f.ring
    return GeneratingMorphism(PolyMatrix(ring, [[f]], 1),
                              PolyMatrix(ring, [[f ** (ring.p - 1)]], 1))


def _feasibility_gate(ring, j, Delta, max_terms, stage):
    if max_terms is None:
        return
    bound = j * ring.p * max(Delta, 1)
    count = comb(ring.nvars + bound, bound)
    if count > max_terms:
        raise ResourceLimitError(
            stage, f"expanding the Frobenius powers is not feasible: degree bound {bound} "
                   f"spans {count} monomials (limit {max_terms})")


def ext_gm(J, j, limits=None, max_terms=DEFAULT_MAX_TERMS, ring=None, resolution=None):
    """Generating morphism of H^j_J(R) through Ext^j(R/J, R).

    Returns the zero marker (beta = 0) when Ext^j vanishes.
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    J = [g for g in J if g]
    if ring is None:
        if not J:
            raise ValueError("need a ring for the zero ideal")
        ring = J[0].ring
    res = resolution or free_resolution(J, j + 1, limits=limits, ring=ring)
    if j > res.length:
        return GeneratingMorphism.zero(ring)
    _feasibility_gate(ring, j, res.Delta, max_terms, "ext_gm")
    thetas = lift_frobenius_chain(res, 1, limits, upto=j)
    theta = thetas[j]
    bj = res.b(j)
    if bj == 0:
        return GeneratingMorphism.zero(ring)
    # Ext^j = ker(A_{j+1}^T) / im(A_j^T) inside R^{b_j}
    if j + 1 <= res.length:
        At = res.A(j + 1).transpose()
        kernel = syzygies(At.columns(), ring=ring, rank=At.nrows, limits=limits)
        Z = SubmoduleGens(ring, bj, kernel)
    else:
        Z = SubmoduleGens.free(ring, bj)
    if j >= 1:
        image = SubmoduleGens(ring, bj, res.A(j).transpose().columns())
    else:
        image = SubmoduleGens(ring, bj, [])
    if Z.is_zero():
        return GeneratingMorphism.zero(ring)
    pres = present_subquotient(Z, image, limits)
    thetaT = theta.transpose()
    images = [thetaT @ g for g in pres.G.columns()]
    U = _transport(pres, images, limits, "Ext map")
    gm = prune_gm(GeneratingMorphism(pres.A, U))
    return gm


# -- Koszul cohomology -----------------------------------------------------


def koszul_indices(m, i):
    """Index sets of size i in lexicographic order."""
    if i < 0 or i > m:
        return []
    return list(combinations(range(m), i))


def koszul_differential(ring, fs, i, beta=1):
    """Matrix of D^i: K^i -> K^{i+1} with K^i = (R^beta)^{C(m, i)}.

    The block from S to S + {j} (j not in S) is (-1)^{#{s in S : s < j}} f_j.
    """
    m = len(fs)
    src = koszul_indices(m, i)
    dst = koszul_indices(m, i + 1)
    pos = {T: k for k, T in enumerate(dst)}
    z = ring.zero
    rows = [[z] * (len(src) * beta) for _ in range(len(dst) * beta)]
    for c, S in enumerate(src):
        for j in range(m):
            if j in S:
                continue
            T = tuple(sorted(S + (j,)))
            sign = -1 if sum(1 for s in S if s < j) % 2 else 1
            entry = fs[j] if sign == 1 else -fs[j]
            r = pos[T]
            for b in range(beta):
                rows[r * beta + b][c * beta + b] = entry
    return PolyMatrix(ring, rows, len(src) * beta)


def _block_A(gm, count):
    if count == 0:
        return _empty_cols(gm.ring, 0)
    return block_diagonal(gm.ring, [gm.A] * count)


def koszul_phi(gm, fs, i):
    """phi_i: K^i(M) -> K^i(F(M)), blockwise U * f_S^(p-1)."""
    ring = gm.ring
    p = ring.p
    blocks = []
    for S in koszul_indices(len(fs), i):
        fS = ring.one
        for s in S:
            fS = fS * fs[s]
        blocks.append(gm.U.scale(fS ** (p - 1)))
    if not blocks:
        return PolyMatrix(ring, [], 0)
    return block_diagonal(ring, blocks)


def koszul_gm(gm, fs, i, limits=None):
    """Generating morphism of H^i(M; f_1..f_m) for M given by ``gm``."""
    ring = gm.ring
    fs = [ring(f) for f in fs]
    m = len(fs)
    if not 0 <= i <= m:
        raise ValueError(f"index {i} outside 0..{m}")
    if gm.beta == 0:
        return GeneratingMorphism.zero(ring)
    beta = gm.beta
    n_i = comb(m, i) * beta
    Ai = _block_A(gm, comb(m, i))
    # Z = {v : D^i v in Im A_{i+1}}
    if i < m:
        Di = koszul_differential(ring, fs, i, beta)
        Anext = _block_A(gm, comb(m, i + 1))
        Z = preimage_colon(SubmoduleGens(ring, Anext.nrows, Anext.columns()), Di, limits=limits)
    else:
        Z = SubmoduleGens.free(ring, n_i)
    image_gens = list(Ai.columns())
    if i > 0:
        image_gens += koszul_differential(ring, fs, i - 1, beta).columns()
    image = SubmoduleGens(ring, n_i, image_gens)
    if Z.is_zero():
        return GeneratingMorphism.zero(ring)
    pres = present_subquotient(Z, image, limits)
    phi = koszul_phi(gm, fs, i)
    images = [phi @ g for g in pres.G.columns()]
    # the Frobenius transform of Z is generated by G^[p]; add the relations of
    # F(M) so lifts succeed even when G only generates Z modulo Im A
    U = _transport_mod(pres, images, _frob(Ai, ring.p), limits)
    return prune_gm(GeneratingMorphism(pres.A, U))


def _transport_mod(pres, images, rel, limits):
    ring = pres.G.ring
    Gp = _frob(pres.G, ring.p)
    g = Gp.ncols
    gens = Gp.columns() + rel.columns()
    C = _lift_columns(images, gens, pres.G.nrows, ring, limits, "Koszul map")
    return C.submatrix(rows=range(g))


# -- iterated local cohomology --------------------------------------------


@dataclass
class IteratedSpec:
    """Layers (ideal generators, index), outermost first.

    ``[(I_1, i_1), ..., (I_s, i_s)]`` stands for H^{i_1}_{I_1} ... H^{i_s}_{I_s}(R).
    """

    layers: list

    def __post_init__(self):
        if not self.layers:
            raise ValueError("an iterated spec needs at least one layer")
        for gens, i in self.layers:
            if i < 0:
                raise ValueError("cohomological indices must be >= 0")
            if not list(gens):
                raise ValueError("empty ideal in an iterated spec")


def iterated_gm(spec, limits=None, max_terms=DEFAULT_MAX_TERMS):
    """Generating morphism of the iterated local cohomology module."""
    layers = list(spec.layers)
    gens, i = layers[-1]
    gens = [g for g in gens if g]
    ring = gens[0].ring
    if len(gens) == 1 and i == 1 and not gens[0].is_unit():
        gm = principal_gm(gens[0])
    else:
        gm = ext_gm(gens, i, limits=limits, max_terms=max_terms, ring=ring)
    for gens, i in reversed(layers[:-1]):
        if gm.beta == 0:
            break
        gm = koszul_gm(gm, list(gens), i, limits=limits)
    return gm


def iterated_support(spec, limits=None, max_iter=1000):
    return support_ideal(iterated_gm(spec, limits), max_iter=max_iter, limits=limits)


# -- degree diagnostics ----------------------------------------------------

REFERENCE_PRIME = 32003


@dataclass
class DiagnosticRow:
    p: int
    delta_p: int | None = None
    Delta: int | None = None
    bound_resolution: int | None = None
    bound_remark: int | None = None
    deltas: list = field(default_factory=list)
    regular: bool | None = None
    violation: bool = False
    error: str | None = None

    def entries(self):
        """(p, e, delta_{e,p}) triples."""
        return [(self.p, e, d) for e, d in enumerate(self.deltas, start=1)]


def _betti(J, s, limits):
    try:
        return free_resolution(J, s, limits=limits).ranks
    except ResourceLimitError:
        return None


def degree_diagnostics(J, primes, j=1, variables=None, order="degrevlex", limits=None,
                       strict=True, max_iter=1000):
    """Per prime p: delta_p, Delta_p and the iterate degrees delta_{e,p}.

    ``J`` is a list of polynomial strings with integer coefficients.  Rows
    with a resource failure carry ``error``.  With ``strict`` a breach of
    delta_{e,p} <= 2 j Delta at a prime judged regular, or of the always-valid
    delta_{e,p} <= ceil(delta_p / (p - 1)), raises BoundViolationError.
    """
    from .errors import BoundViolationError

    if variables is None:
        raise ValueError("variables are required")
    rows = []
    ref = None
    if primes:
        ref_ring = PolynomialRing(REFERENCE_PRIME, variables, order)
        ref = _betti([ref_ring.parse(t) for t in J], j + 1, limits)
    for p in primes:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        row = DiagnosticRow(p)
        rows.append(row)
        ring = PolynomialRing(p, variables, order)
        Jp = [ring.parse(t) for t in J]
        try:
            res = free_resolution(Jp, j + 1, limits=limits)
            row.Delta = res.Delta
            row.regular = ref is not None and res.ranks == ref
            row.bound_resolution = 2 * j * res.Delta
            gm = ext_gm(Jp, j, limits=limits, resolution=res)
            row.delta_p = gm.delta if gm.beta else 0
            row.bound_remark = -(-row.delta_p // (p - 1))
            if gm.beta:
                trace = iterate_support_trace(gm, max_iter=max_iter)
                row.deltas = [max(d, 0) for d in trace.degrees]
        except ResourceLimitError as exc:
            row.error = str(exc)
            continue
        over_thm = row.regular and any(d > row.bound_resolution for d in row.deltas)
        over_rem = any(d > row.bound_remark for d in row.deltas)
        row.violation = bool(over_thm or over_rem)
        if strict and row.violation:
            raise BoundViolationError(f"degree bound violated at p={p}: {row}")
    return rows


# -- the resultant example -------------------------------------------------


def resultant_ideal(p=2):
    """Four Sylvester resultants of generic quadratics in nine variables.

    Returns ``(ring, generators)``; the question is whether H^4 of R with
    support in this ideal vanishes.
    """
    names = ["x0", "x1", "x2", "y0", "y1", "y2", "z0", "z1", "z2"]
    ring = PolynomialRing(p, names)
    g = {n: ring.gen(n) for n in names}
    F1 = [g["x0"], g["x1"], g["x2"]]
    F2 = [g["y0"], g["y1"], g["y2"]]
    F3 = [g["z0"], g["z1"], g["z2"]]

    def res(a, b):
        z = ring.zero
        M = PolyMatrix(ring, [[a[0], a[1], a[2], z], [z, a[0], a[1], a[2]],
                              [b[0], b[1], b[2], z], [z, b[0], b[1], b[2]]], 4)
        return _det(M)

    F12 = [a + b for a, b in zip(F1, F2)]
    return ring, [res(F1, F2), res(F1, F3), res(F2, F3), res(F12, F3)]


def _det(M):
    n = M.nrows
    if n == 1:
        return M.rows[0][0]
    acc = M.ring.zero
    for c in range(n):
        a = M.rows[0][c]
        if not a:
            continue
        minor = M.submatrix(rows=range(1, n), cols=[k for k in range(n) if k != c])
        term = a * _det(minor)
        acc = acc + term if c % 2 == 0 else acc - term
    return acc


def resultant_support(p=2, limits=None, max_terms=None):
    """Attempt Supp H^4 for the resultant ideal; resource failures propagate.

    Vanishing is tested first (an iterate inside Im A settles it), so a zero
    module is reported without running to the fixed point.
    """
    ring, I = resultant_ideal(p)
    gm = ext_gm(I, 4, limits=limits, max_terms=max_terms, ring=ring)
    return support_ideal(gm, limits=limits, vanishing_shortcut=True)
