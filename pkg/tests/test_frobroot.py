from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobsupport.frobroot import (
    apply_matrix,
    bracket_power,
    frob_decompose,
    frob_root,
    reconstruct,
)
from frobsupport.groebner import submodules_equal
from frobsupport.modules import FreeVector, PolyMatrix, SubmoduleGens
from frobsupport.ring import PolynomialRing
from oracles import in_module, polynomials, ring_for, same_module


def test_decompose_example():
    R = PolynomialRing(2, "x,y")
    v = FreeVector(R, [R.parse("x^3 + x*y^2 + y")])
    parts = frob_decompose(v, 1)
    assert set(parts) == {(1, 0), (0, 1)}
    assert parts[(1, 0)] == FreeVector(R, [R.parse("x + y")])
    assert parts[(0, 1)] == FreeVector(R, [R.one])


def test_root_examples():
    R = PolynomialRing(2, "x,y")
    V = SubmoduleGens(R, 1, [FreeVector(R, [R.parse("x^2")])])
    L = frob_root(V, 1)
    assert [g[0] for g in L.gens] == [R.parse("x")]
    # x^3 = (x)^2 * x
    V = SubmoduleGens(R, 1, [FreeVector(R, [R.parse("x^3")])])
    assert [g[0] for g in frob_root(V, 1).gens] == [R.parse("x")]
    # a unit part gives the whole ring
    V = SubmoduleGens(R, 1, [FreeVector(R, [R.parse("x^2 + y")])])
    assert submodules_equal(frob_root(V, 1), SubmoduleGens.free(R, 1))


def test_zero_module_root_is_zero():
    R = PolynomialRing(3, "x")
    assert frob_root(SubmoduleGens(R, 2, []), 1).is_zero()


def test_bad_exponent():
    R = PolynomialRing(2, "x")
    v = FreeVector(R, [R.gen("x")])
    with pytest.raises(ValueError):
        frob_decompose(v, 0)
    with pytest.raises(ValueError):
        bracket_power(v, -1)


def test_bracket_power_types():
    R = PolynomialRing(3, "x,y")
    f = R.parse("x + y")
    assert bracket_power(f, 1) == R.parse("x^3 + y^3")
    assert bracket_power(f, 0) == f
    M = PolyMatrix(R, [[f, R.one]])
    assert list(bracket_power(M, 1).rows[0]) == [R.parse("x^3 + y^3"), R.one]


@st.composite
def submodules(draw, max_deg=8):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 3))
    beta = draw(st.integers(1, 2))
    R = ring_for(p, n)
    k = draw(st.integers(1, 3))
    gens = [FreeVector(R, [draw(polynomials(R, max_deg, 5)) for _ in range(beta)])
            for _ in range(k)]
    return SubmoduleGens(R, beta, gens)


@settings(max_examples=500)
@given(submodules(), st.integers(1, 2))
def test_reconstruction_exact(V, e):
    for g in V.gens:
        parts = frob_decompose(g, e)
        q = V.ring.p ** e
        assert all(max(b) < q for b in parts)
        assert reconstruct(parts, e, V.ring, V.rank) == g


@settings(max_examples=500)
@given(submodules(), st.integers(1, 2))
def test_containment_is_explicit(V, e):
    # every generator is a combination of bracket powers of root generators
    L = frob_root(V, e)
    index = {u: i for i, u in enumerate(L.gens)}
    for g in V.gens:
        acc = FreeVector.zero(V.ring, V.rank)
        for b, u in frob_decompose(g, e).items():
            assert u in index
            acc = acc + FreeVector(V.ring, [c.shift(b) for c in bracket_power(L.gens[index[u]], e)])
        assert acc == g


@settings(max_examples=60)
@given(submodules(max_deg=6))
def test_containment_oracle(V):
    L = frob_root(V, 1)
    Lq = bracket_power(L, 1)
    assert all(in_module(g, Lq.gens) for g in V.gens)


@settings(max_examples=500)
@given(submodules())
def test_composition(V):
    two = frob_root(V, 2)
    step = frob_root(frob_root(V, 1), 1)
    assert submodules_equal(two, step)


@settings(max_examples=40)
@given(submodules(max_deg=6))
def test_composition_oracle(V):
    two = frob_root(V, 2)
    step = frob_root(frob_root(V, 1), 1)
    assert same_module(two.gens, step.gens)


@settings(max_examples=300)
@given(submodules(), st.data())
def test_additivity(V, data):
    split = data.draw(st.integers(0, len(V.gens)))
    A = SubmoduleGens(V.ring, V.rank, V.gens[:split])
    B = SubmoduleGens(V.ring, V.rank, V.gens[split:])
    assert submodules_equal(frob_root(A + B, 1), frob_root(A, 1) + frob_root(B, 1))


@settings(max_examples=300)
@given(submodules(max_deg=4), st.data())
def test_u_compatibility(V, data):
    # I_e(U^[p^e] V) = U I_e(V)
    R = V.ring
    U = PolyMatrix(R, [[data.draw(polynomials(R, 2, 3)) for _ in range(V.rank)]
                       for _ in range(V.rank)], V.rank)
    left = frob_root(apply_matrix(bracket_power(U, 1), V), 1)
    right = apply_matrix(U, frob_root(V, 1))
    assert submodules_equal(left, right)


@settings(max_examples=30)
@given(submodules(max_deg=3), st.data())
def test_u_compatibility_oracle(V, data):
    R = V.ring
    U = PolyMatrix(R, [[data.draw(polynomials(R, 2, 3)) for _ in range(V.rank)]
                       for _ in range(V.rank)], V.rank)
    left = frob_root(apply_matrix(bracket_power(U, 1), V), 1)
    right = apply_matrix(U, frob_root(V, 1))
    assert same_module(left.gens, right.gens)


def brute_monomial_root(a, q):
    """Largest monomial c with c^q dividing x^a, found by search."""
    best = None
    for c in product(*[range(ai + 1) for ai in a]):
        if all(ci * q <= ai for ci, ai in zip(c, a)):
            if best is None or all(ci >= bi for ci, bi in zip(c, best)):
                best = c
    return best


@settings(max_examples=500)
@given(st.sampled_from([2, 3, 5]), st.lists(st.integers(0, 12), min_size=1, max_size=3),
       st.integers(1, 2))
def test_monomial_floor(p, a, e):
    R = ring_for(p, len(a))
    a = tuple(a)
    V = SubmoduleGens(R, 1, [FreeVector(R, [R.monomial(a)])])
    L = frob_root(V, e)
    assert len(L.gens) == 1
    got = L.gens[0][0]
    expected = brute_monomial_root(a, p ** e)
    assert got == R.monomial(expected)
    assert expected == tuple(x // p ** e for x in a)
