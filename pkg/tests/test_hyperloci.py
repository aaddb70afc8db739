import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobsupport.fsupport import GeneratingMorphism, support_ideal
from frobsupport.groebner import module_contains, preimage_colon, radical_membership
from frobsupport.hyperloci import (
    hypersurface_support,
    injectivity_locus,
    kernel_chain_term,
    local_cohomology_gm,
    locus_union,
    surjectivity_locus,
    v_product,
)
from frobsupport.lccohom import koszul_gm, principal_gm
from frobsupport.modules import FreeVector, PolyMatrix, SubmoduleGens
from frobsupport.ring import PolynomialRing
from oracles import in_radical, polynomials, ring_for, same_radical


def gm_x(R):
    return principal_gm(R.parse("x"))


def test_v_product_examples():
    R = PolynomialRing(2, "x")
    U = PolyMatrix(R, [[R.parse("x")]])
    assert v_product(U, 0, 2) == PolyMatrix(R, [[R.parse("x^3")]])
    assert v_product(U, 1, 1) == PolyMatrix(R, [[R.parse("x^2")]])
    assert v_product(U, 3, 0) == PolyMatrix.identity(R, 1)


def test_v_product_order_matters():
    R = PolynomialRing(2, "x,y")
    x, y = R.gens
    U = PolyMatrix(R, [[x, y], [R.zero, R.one]])
    U2 = U.map(lambda f: f ** 2)
    assert v_product(U, 0, 2) == U2 @ U
    assert v_product(U, 0, 2) != U @ U2


def test_injectivity_examples():
    R = PolynomialRing(2, "x,y")
    rep = injectivity_locus(gm_x(R), R.parse("x"))
    assert rep.eta == 1 and rep.certified
    assert same_radical(rep.J, [R.parse("x")])
    rep = injectivity_locus(gm_x(R), R.parse("y"))
    assert rep.is_empty
    rep = injectivity_locus(GeneratingMorphism.zero(R), R.parse("x"))
    assert rep.is_empty
    with pytest.raises(ValueError):
        injectivity_locus(gm_x(R), R.zero)


def test_surjectivity_examples():
    R = PolynomialRing(2, "x,y")
    rep = surjectivity_locus(gm_x(R), R.parse("x"))
    assert rep.is_empty and rep.certified and rep.eta <= 2
    rep = surjectivity_locus(gm_x(R), R.one)
    assert rep.is_empty and rep.eta == 0
    top = koszul_gm(GeneratingMorphism.free(R, PolyMatrix.identity(R, 1)),
                    [R.parse("x"), R.parse("y")], 2)
    rep = surjectivity_locus(top, R.parse("x"))
    assert rep.is_empty


def test_hypersurface_examples():
    R = PolynomialRing(2, "x")
    x = R.parse("x")
    h0 = local_cohomology_gm([x], 0, ring=R)
    h1 = local_cohomology_gm([x], 1, ring=R)
    h2 = local_cohomology_gm([x], 2, ring=R)
    rep = hypersurface_support(h0, h1, x)
    assert same_radical(rep.J, [x])
    assert rep.parts["surjectivity"].is_empty
    rep = hypersurface_support(h1, h2, x)
    assert rep.is_empty
    R2 = PolynomialRing(2, "x,y")
    x, y = R2.gens
    g1 = local_cohomology_gm([x, y], 1, ring=R2)
    g2 = local_cohomology_gm([x, y], 2, ring=R2)
    rep = hypersurface_support(g1, g2, x)
    assert same_radical(rep.J, [x, y])


def test_locus_union():
    R = PolynomialRing(3, "x,y")
    x, y = R.gens
    assert locus_union([R.one], [x]) == [x]
    assert locus_union([x], []) == []
    U = locus_union([x], [y])
    assert same_radical(U, [x * y])


def _chain_ascends(gm, jmax=4):
    R = gm.ring
    Ns = [kernel_chain_term(gm, j) for j in range(jmax + 1)]
    for a, b in zip(Ns, Ns[1:]):
        assert all(module_contains(b, v, ring=R, rank=gm.beta) for v in a.gens)


@st.composite
def principal_cases(draw):
    p = draw(st.sampled_from([2, 3]))
    R = ring_for(p, 2)
    f = draw(polynomials(R, 2, 3))
    g = draw(polynomials(R, 2, 2))
    if not f or f.is_unit():
        f = R.gens[0]
    if not g:
        g = R.gens[1]
    return principal_gm(f), g


@settings(max_examples=20)
@given(principal_cases())
def test_kernel_chain_ascends(case):
    gm, _ = case
    _chain_ascends(gm, 3)


@settings(max_examples=20)
@given(principal_cases())
def test_surjectivity_union_ascends(case):
    gm, g = case
    R = gm.ring
    T = SubmoduleGens(R, gm.beta, [])
    for j in range(4):
        target = SubmoduleGens(R, 1, [FreeVector(R, [g])]) + SubmoduleGens(
            R, 1, [FreeVector(R, [a.frobenius(R.p ** j)]) for a in gm.A.rows[0]])
        piece = preimage_colon(target, v_product(gm.U, 0, j))
        newT = T + piece
        assert all(module_contains(newT, v, ring=R, rank=1) for v in T.gens)
        T = newT


@settings(max_examples=20)
@given(principal_cases(), st.integers(0, 1), st.integers(0, 2))
def test_bracket_power_colon_identity(case, e, j):
    gm, g = case
    R = gm.ring
    p = R.p

    def colon(e_, j_):
        tgt = SubmoduleGens(R, 1, [FreeVector(R, [g])]) + SubmoduleGens(
            R, 1, [FreeVector(R, [a.frobenius(p ** (e_ + j_))]) for a in gm.A.rows[0]])
        return preimage_colon(tgt, v_product(gm.U, e_, j_))

    left = colon(e, j)
    right = colon(e + 1, j)
    for v in left.gens:
        assert module_contains(right, FreeVector(R, [c.frobenius(p) for c in v]), ring=R, rank=1)


@settings(max_examples=15)
@given(principal_cases())
def test_loci_inside_support(case):
    gm, g = case
    J = support_ideal(gm).J
    for rep in (injectivity_locus(gm, g), surjectivity_locus(gm, g)):
        if rep.is_empty:
            continue
        # V(rep.J) inside V(J)
        assert all(radical_membership(f, rep.J) for f in J)
        assert all(in_radical(f, rep.J) for f in J)
