"""Loci where multiplication by g on H^i_I(R) fails to be injective or surjective.

For a generating morphism (A, U) write V_{ej} = U^[p^(e+j-1)] ... U^[p^e].
Injectivity is read off the ascending chain N_j = {v : V_{0j} v in Im A^[p^j]}
(the kernel of Coker A -> Coker A^[p^j] pulled back to R^beta); surjectivity
off the ascending union T_j of {v : V_{0k} v in g R^beta + Im A^[p^k]},
k <= j.  Neither chain comes with a certified stopping rule, so both are
watched for a persistence window and cut off at ``jmax``.  The support of
H^i_I(R/gR) is then the union of the surjectivity locus at i and the
injectivity locus at i + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ResourceLimitError
from .fsupport import GeneratingMorphism, quotient_support
from .groebner import (
    ModuleGB,
    ideal_intersection,
    minimize_presentation,
    minors_ideal,
    preimage_colon,
    reduced_ideal_basis,
)
from .lccohom import ext_gm, principal_gm
from .modules import PolyMatrix, SubmoduleGens

DEFAULT_JMAX = 8
DEFAULT_WINDOW = 2


def v_product(U, e, j):
    """U^[p^(e+j-1)] U^[p^(e+j-2)] ... U^[p^e], multiplied left to right."""
    if j < 0 or e < 0:
        raise ValueError("e and j must be >= 0")
    ring = U.ring
    p = ring.p
    out = PolyMatrix.identity(ring, U.nrows)
    for k in range(e + j - 1, e - 1, -1):
        q = p ** k
        out = out @ U.map(lambda f: f.frobenius(q))
    return out


@dataclass
class LocusReport:
    """A closed locus V(J).  ``J == [1]`` is the empty set, ``J == []`` everything."""

    kind: str
    J: list
    module: SubmoduleGens | None = None
    eta: int | None = None
    certified: bool = True
    chain: list = field(default_factory=list)
    parts: dict = field(default_factory=dict)

    @property
    def is_empty(self):
        return any(f.is_unit() for f in self.J)

    def J_str(self):
        if not self.J:
            return "0"
        return ", ".join(str(f) for f in self.J)

    def as_dict(self):
        out = {
            "kind": self.kind,
            "J": [str(f) for f in self.J],
            "empty": self.is_empty,
            "eta": self.eta,
            "certified": self.certified,
        }
        for name, part in self.parts.items():
            out[name] = part.as_dict()
        return out


def _contains_all(big, small, limits):
    if small.is_zero():
        return True
    if big.is_zero():
        return False
    gb = ModuleGB(big.ring, big.rank, limits=limits)
    gb.add_all(g.to_terms() for g in big.gens)
    return all(gb.contains(g.to_terms()) for g in small.gens)


def _bracket_image(A, k):
    q = A.ring.p ** k
    return SubmoduleGens(A.ring, A.nrows, [c for c in A.map(lambda f: f.frobenius(q)).columns()])


def kernel_chain_term(gm, j, limits=None):
    """N_j = {v in R^beta : V_{0j} v in Im A^[p^j]}."""
    V = v_product(gm.U, 0, j)
    return preimage_colon(_bracket_image(gm.A, j), V, limits=limits)


def _empty(kind, ring, **kw):
    return LocusReport(kind, [ring.one], **kw)


def injectivity_locus(gm, g, jmax=DEFAULT_JMAX, window=DEFAULT_WINDOW, limits=None):
    """Locus where g fails to act injectively on the limit module.

    eta is the first j >= 1 after which N_j stays equal for ``window`` steps.
    """
    ring = gm.ring
    g = ring(g)
    if g.is_zero():
        raise ValueError("g must be nonzero")
    if gm.beta == 0:
        return _empty("injectivity", ring, eta=0)
    chain = [kernel_chain_term(gm, 0, limits), kernel_chain_term(gm, 1, limits)]
    eta = None
    j = 1
    while True:
        # chain[j] is N_j; look for `window` equalities N_j = N_{j+1} = ...
        while len(chain) <= j + window and len(chain) <= jmax + 1:
            chain.append(kernel_chain_term(gm, len(chain), limits))
        if len(chain) <= j + window:
            break
        if all(_contains_all(chain[j], chain[j + k], limits) for k in range(1, window + 1)):
            eta = j
            break
        j += 1
    certified = eta is not None
    if eta is None:
        eta = len(chain) - 1
    N = chain[eta]
    colon = preimage_colon(N, g, limits=limits)
    qs = quotient_support(colon, N, limits)
    return LocusReport("injectivity", qs.J, module=N, eta=eta, certified=certified,
                       chain=[len(c.gens) for c in chain])


def _is_free(T, limits):
    return _contains_all(T, SubmoduleGens.free(T.ring, T.rank), limits)


def surjectivity_locus(gm, g, jmax=DEFAULT_JMAX, window=DEFAULT_WINDOW, limits=None):
    """Locus where g fails to act surjectively on the limit module.

    Certified only when the union T reaches all of R^beta (empty locus);
    stopping on a persistence window or at ``jmax`` is marked uncertified.
    """
    ring = gm.ring
    g = ring(g)
    if g.is_zero():
        raise ValueError("g must be nonzero")
    if jmax < 0:
        raise ValueError("jmax must be >= 0")
    beta = gm.beta
    if beta == 0:
        return _empty("surjectivity", ring, eta=0)
    gR = [v * g for v in SubmoduleGens.free(ring, beta).gens]
    T = SubmoduleGens(ring, beta, [])
    stable = 0
    stop = None
    certified = False
    history = []
    for j in range(jmax + 1):
        target = SubmoduleGens(ring, beta, gR) + _bracket_image(gm.A, j)
        piece = preimage_colon(target, v_product(gm.U, 0, j), limits=limits)
        grew = not _contains_all(T, piece, limits)
        T = T + piece
        history.append(len(T.gens))
        if _is_free(T, limits):
            stop, certified = j, True
            break
        stable = 0 if grew else stable + 1
        if j >= 1 and stable >= window:
            stop = j
            break
    if stop is None:
        stop = jmax
    if certified:
        J = [ring.one]
    else:
        W, _ = minimize_presentation(T.to_matrix())
        J = minors_ideal(W, W.nrows, limits)
        if any(f.is_unit() for f in J):
            J = [ring.one]
        elif J:
            try:
                J = reduced_ideal_basis(J, limits)
            except ResourceLimitError:
                pass
    return LocusReport("surjectivity", J, module=T, eta=stop, certified=certified,
                       chain=history)


def locus_union(J1, J2, limits=None):
    """Ideal of V(J1) union V(J2): the intersection, or the product if that is too costly."""
    if any(f.is_unit() for f in J1):
        return list(J2)
    if any(f.is_unit() for f in J2):
        return list(J1)
    if not J1 or not J2:
        return []
    try:
        out = ideal_intersection(J1, J2, limits)
        return reduced_ideal_basis(out, limits)
    except ResourceLimitError:
        prods = {(a * b).monic() for a in J1 for b in J2}
        return sorted(prods, key=str)


def hypersurface_support(gm_i, gm_next, g, jmax=DEFAULT_JMAX, window=DEFAULT_WINDOW,
                         limits=None):
    """Support of H^i_I(R/gR) as S^i union I^(i+1).

    ``gm_i`` and ``gm_next`` are generating morphisms for H^i_I(R) and
    H^(i+1)_I(R).
    """
    S = surjectivity_locus(gm_i, g, jmax, window, limits)
    I = injectivity_locus(gm_next, g, jmax, window, limits)
    J = locus_union(S.J, I.J, limits)
    return LocusReport("hypersurface-support", J, certified=S.certified and I.certified,
                       parts={"surjectivity": S, "injectivity": I})


def local_cohomology_gm(I, i, ring=None, limits=None):
    """Generating morphism for H^i_I(R): principal form when I = (f), i = 1."""
    I = [f for f in I if f]
    if len(I) == 1 and i == 1 and not I[0].is_unit():
        return principal_gm(I[0])
    if not I:
        if ring is None:
            raise ValueError("need a ring for the zero ideal")
        return GeneratingMorphism.zero(ring)
    return ext_gm(I, i, limits=limits, ring=ring)
