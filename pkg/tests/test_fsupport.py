import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobsupport.errors import NonTerminationError, ShapeError
from frobsupport.frobroot import apply_matrix, frob_root
from frobsupport.fsupport import (
    GeneratingMorphism,
    is_zero_module,
    iterate_support,
    iterate_support_trace,
    span_canonicalize,
    support_ideal,
)
from frobsupport.groebner import submodule_contains, submodules_equal
from frobsupport.hyperloci import v_product
from frobsupport.modules import FreeVector, PolyMatrix, SubmoduleGens
from frobsupport.ring import PolynomialRing
from oracles import in_radical, polynomials, ring_for, same_module


def gm1(R, a, u):
    return GeneratingMorphism(PolyMatrix(R, [[R.parse(a)]]), PolyMatrix(R, [[R.parse(u)]]))


def vec(R, *fs):
    return FreeVector(R, [R.parse(f) if isinstance(f, str) else f for f in fs])


def test_span_examples():
    R = PolynomialRing(2, "x,y")
    s = span_canonicalize(SubmoduleGens(R, 1, [vec(R, "x"), vec(R, "x")]), 1)
    assert [v[0] for v in s.basis] == [R.parse("x")]
    s = span_canonicalize(SubmoduleGens(R, 1, [vec(R, "x"), vec(R, "x + y")]), 1)
    assert sorted(str(v[0]) for v in s.basis) == ["x", "y"]
    s = span_canonicalize(SubmoduleGens(R, 1, [vec(R, "0")]), 1)
    assert s.is_zero()


@settings(max_examples=100)
@given(st.sampled_from([2, 3]), st.data())
def test_span_canonical_under_recombination(p, data):
    R = ring_for(p, 2)
    gens = [vec(R, data.draw(polynomials(R, 2, 3)), data.draw(polynomials(R, 2, 3)))
            for _ in range(3)]
    a, b, c = gens
    k = data.draw(st.integers(1, p - 1))
    other = [a + b * k, b, c + a, a * 0]
    s1 = span_canonicalize(SubmoduleGens(R, 2, gens), 2)
    s2 = span_canonicalize(SubmoduleGens(R, 2, other), 2)
    assert s1 == s2


def test_iteration_examples():
    R = PolynomialRing(2, "x")
    L, it = iterate_support(gm1(R, "x", "x"))
    assert it == 1 and [g[0] for g in L.gens] == [R.one]
    L, it = iterate_support(gm1(R, "x^2", "x^2"))
    assert it == 2 and [g[0] for g in L.gens] == [R.parse("x")]
    L, it = iterate_support(gm1(R, "x", "0"))
    assert it == 1 and L.is_zero()


def test_vanishing_examples():
    R = PolynomialRing(2, "x")
    assert is_zero_module(gm1(R, "1", "x"))
    assert not is_zero_module(gm1(R, "x", "x"))
    assert is_zero_module(gm1(R, "x", "0"))


def test_support_examples():
    R = PolynomialRing(2, "x")
    x = R.parse("x")
    rep = support_ideal(gm1(R, "x", "x"))
    assert all(in_radical(f, [x]) for f in rep.J) and in_radical(x, rep.J)
    assert not rep.module_is_zero
    rep = support_ideal(gm1(R, "x^2", "x^2"))
    assert rep.J == [x]
    assert rep.W.shape == (1, 1)
    rep = support_ideal(gm1(R, "1", "1"))
    assert rep.J == [R.one] and rep.module_is_zero


def test_shape_errors():
    R = PolynomialRing(2, "x")
    with pytest.raises(ShapeError):
        GeneratingMorphism(PolyMatrix(R, [[R.one]]), PolyMatrix(R, [[R.one, R.one]]))
    with pytest.raises(ShapeError):
        GeneratingMorphism(PolyMatrix(R, [[R.one], [R.one]]), PolyMatrix(R, [[R.one]]))


def test_max_iter_reports_non_termination():
    R = PolynomialRing(2, "x")
    with pytest.raises(NonTerminationError):
        iterate_support(gm1(R, "x^2", "x^2"), max_iter=1)
    with pytest.raises(ValueError):
        iterate_support(gm1(R, "x", "x"), max_iter=0)


def test_zero_marker():
    R = PolynomialRing(3, "x")
    gm = GeneratingMorphism.zero(R)
    assert is_zero_module(gm)
    assert support_ideal(gm).J == [R.one]


@st.composite
def morphisms(draw, primes=(2, 3), max_vars=2, max_beta=2, max_deg=3):
    p = draw(st.sampled_from(primes))
    n = draw(st.integers(1, max_vars))
    R = ring_for(p, n)
    beta = draw(st.integers(1, max_beta))
    U = PolyMatrix(R, [[draw(polynomials(R, max_deg, 3)) for _ in range(beta)]
                       for _ in range(beta)], beta)
    alpha = draw(st.integers(0, 2))
    A = PolyMatrix(R, [[draw(polynomials(R, max_deg, 3)) for _ in range(alpha)]
                       for _ in range(beta)], alpha)
    return GeneratingMorphism(A, U)


@settings(max_examples=80)
@given(morphisms())
def test_chain_descends_and_respects_degree_bound(gm):
    tr = iterate_support_trace(gm, extra=2)
    assert tr.persisted
    assert all(d <= gm.degree_bound for d in tr.degrees)
    Ls = [s.gens() for s in tr.spans]
    for a, b in zip(Ls[1:], Ls[2:]):
        assert submodule_contains(a, b)


@settings(max_examples=60)
@given(morphisms())
def test_routes_agree(gm):
    a = iterate_support_trace(gm, route="operator")
    b = iterate_support_trace(gm, route="direct")
    assert a.iterations == b.iterations
    assert [s.basis for s in a.spans] == [s.basis for s in b.spans]


@settings(max_examples=60)
@given(morphisms(max_deg=2))
def test_nested_roots_equal_root_of_product(gm):
    R = gm.ring
    tr = iterate_support_trace(gm, extra=3)
    free = SubmoduleGens.free(R, gm.beta)
    L = free
    for t in range(1, 4):
        L = frob_root(apply_matrix(gm.U, L), 1)
        direct = frob_root(apply_matrix(v_product(gm.U, 0, t), free), t)
        assert submodules_equal(L, direct)
        if t < len(tr.spans):
            assert submodules_equal(tr.spans[t].gens(), L)


@settings(max_examples=15)
@given(morphisms(max_deg=2, max_vars=2, max_beta=1))
def test_nested_roots_oracle(gm):
    R = gm.ring
    free = SubmoduleGens.free(R, gm.beta)
    L = frob_root(apply_matrix(gm.U, frob_root(apply_matrix(gm.U, free), 1)), 1)
    direct = frob_root(apply_matrix(v_product(gm.U, 0, 2), free), 2)
    assert same_module(L.gens, direct.gens)


@st.composite
def valid_morphisms(draw):
    """Principal (A=[f], U=[f^(p-1)]) or free ones, both always valid."""
    p = draw(st.sampled_from([2, 3]))
    R = ring_for(p, draw(st.integers(1, 2)))
    f = draw(polynomials(R, 2, 3))
    if draw(st.booleans()) and f:
        return GeneratingMorphism(PolyMatrix(R, [[f]]), PolyMatrix(R, [[f ** (p - 1)]]))
    U = PolyMatrix(R, [[draw(polynomials(R, 2, 2))]])
    return GeneratingMorphism.free(R, U)


@settings(max_examples=60)
@given(valid_morphisms())
def test_zero_module_consistency(gm):
    assert gm.is_valid()
    rep = support_ideal(gm)
    z = is_zero_module(gm)
    assert z == rep.module_is_zero
    assert z == (rep.J == [gm.ring.one])


def test_operator_handles_bench_sized_instance():
    from frobsupport.bench import make_instance
    gm = make_instance(0, 42, 2, 5, 2, 4)
    tr = iterate_support_trace(gm, extra=2)
    assert tr.route == "operator" and tr.persisted
    assert max(tr.degrees) <= 4


@settings(max_examples=60)
@given(morphisms())
def test_sparse_route_agrees(gm):
    a = iterate_support_trace(gm, route="operator")
    b = iterate_support_trace(gm, route="sparse")
    assert a.iterations == b.iterations
    assert [s.basis for s in a.spans] == [s.basis for s in b.spans]
    assert a.stable == b.stable and b.stable == a.stable


def test_unknown_route():
    R = PolynomialRing(2, "x")
    with pytest.raises(ValueError):
        iterate_support_trace(gm1(R, "x", "x"), route="fast")


def test_vanishing_shortcut_stops_inside_image():
    # A = [x], U = [x^2]: L_1 = I_1(x^2) = (x) is already inside Im A
    R = PolynomialRing(2, "x")
    gm = gm1(R, "x", "x^2")
    rep = support_ideal(gm, vanishing_shortcut=True)
    assert rep.module_is_zero and rep.J == [R.one] and rep.stopped_early
    assert rep.iterations == 1
    full = support_ideal(gm)
    assert full.module_is_zero and not full.stopped_early
    assert is_zero_module(gm)


@settings(max_examples=60)
@given(valid_morphisms())
def test_vanishing_shortcut_agrees_with_fixed_point(gm):
    a = support_ideal(gm)
    b = support_ideal(gm, vanishing_shortcut=True)
    assert a.module_is_zero == b.module_is_zero
    if not b.module_is_zero:
        assert a.J == b.J and a.iterations == b.iterations
