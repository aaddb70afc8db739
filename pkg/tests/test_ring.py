import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobsupport.errors import ParseError, ShapeError
from frobsupport.ring import (
    ExtensionField,
    FieldSpec,
    PolynomialRing,
    compare_monomials,
    evaluate,
    is_prime,
    monomials_up_to,
)
from oracles import polynomials, ring_for


def test_normalize_examples():
    R2 = PolynomialRing(2, "x,y")
    assert R2.parse("x + x").is_zero()
    R3 = PolynomialRing(3, "x,y")
    assert str(R3.parse("x + x + x^2")) == "x^2 + 2*x"
    R5 = PolynomialRing(5, "x,y")
    assert R5.parse("7*x*y") == R5.parse("2*x*y")
    assert str(R5.parse("7*x*y")) == "2*x*y"


def test_negative_coefficients_and_constants():
    R = PolynomialRing(5, "x,y")
    assert R.parse("-x") == R.parse("4*x")
    assert R.parse("3 - 3") == 0
    assert R.parse("x*y^2*x") == R.parse("x^2*y^2")
    assert R.parse("2 x y") == R.parse("2*x*y")


def test_compare_monomials_examples():
    assert compare_monomials((2, 1), (1, 2), "degrevlex") == 1
    assert compare_monomials((3, 0), (2, 2), "degrevlex") == -1
    assert compare_monomials((1, 0), (0, 5), "lex") == 1
    assert compare_monomials((1, 1), (1, 1)) == 0
    with pytest.raises(ShapeError):
        compare_monomials((1,), (1, 2))


def test_evaluate_examples():
    R2 = PolynomialRing(2, "x,y")
    assert R2.parse("x + y").evaluate((1, 1)) == 0
    R3 = PolynomialRing(3, "x,y")
    assert evaluate(R3.parse("x^2*y"), (2, 2)) == 2
    assert R2.one.evaluate((0, 1)) == 1
    with pytest.raises(ShapeError):
        R2.one.evaluate((1,))


def test_terms_sorted_decreasing():
    R = PolynomialRing(3, "x,y,z")
    f = R.parse("z + x*y + y^2 + x^3 + 1")
    monos = [m for m, _ in f.terms()]
    for a, b in zip(monos, monos[1:]):
        assert compare_monomials(a, b) == 1
    assert str(f) == "x^3 + x*y + y^2 + z + 1"


def test_parse_errors_carry_line():
    R = PolynomialRing(2, "x,y")
    with pytest.raises(ParseError) as exc:
        R.parse("x + q", line=7)
    assert "line 7" in str(exc.value)
    for bad in ["", "x +", "x**2", "*x"]:
        with pytest.raises(ParseError):
            R.parse(bad)


def test_field_spec_and_primes():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert FieldSpec(2, 3).q == 8
    with pytest.raises(ValueError):
        FieldSpec(4)
    with pytest.raises(ValueError):
        PolynomialRing(6, "x")


def test_monomials_up_to_counts():
    from math import comb
    for n in range(1, 5):
        for d in range(5):
            ms = monomials_up_to(n, d)
            assert len(ms) == comb(n + d, d) == len(set(ms))
            assert [sum(m) for m in ms] == sorted(sum(m) for m in ms)


def test_extension_field_is_a_field():
    for p, s in [(2, 2), (2, 3), (3, 2)]:
        F = ExtensionField(p, s)
        q = p ** s
        for a in range(1, q):
            # a^(q-1) = 1 for every nonzero element
            assert F.pow(a, q - 1) == 1
        # multiplicative group has an element of full order
        orders = set()
        for a in range(1, q):
            k = 1
            while F.pow(a, k) != 1:
                k += 1
            orders.add(k)
        assert q - 1 in orders


def test_evaluate_in_extension_matches_prime_field_on_subfield():
    R = PolynomialRing(2, "x,y")
    f = R.parse("x^3 + x*y + 1")
    F = ExtensionField(2, 3)
    for a in (0, 1):
        for b in (0, 1):
            assert f.evaluate((a, b), F) == f.evaluate((a, b))


def test_frobenius_power_and_pow():
    R = PolynomialRing(3, "x,y")
    f = R.parse("x + y")
    assert f ** 3 == R.parse("x^3 + y^3")
    assert f.frobenius(3) == f ** 3
    assert f ** 0 == 1
    assert f ** 5 == f * f * f * f * f


@st.composite
def ring_and_polys(draw, k=3):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    n = draw(st.integers(1, 4))
    R = ring_for(p, n)
    return R, [draw(polynomials(R, 6, 6)) for _ in range(k)]


@settings(max_examples=1000)
@given(ring_and_polys())
def test_ring_axioms(data):
    R, (f, g, h) = data
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == 0
    assert f + R.zero == f and f * R.one == f


@settings(max_examples=300)
@given(ring_and_polys(2), st.data())
def test_evaluation_is_a_homomorphism(data, d):
    R, (f, g) = data
    pt = tuple(d.draw(st.integers(0, R.p - 1)) for _ in range(R.nvars))
    p = R.p
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt) % p
    assert (f + g).evaluate(pt) == (f.evaluate(pt) + g.evaluate(pt)) % p


@settings(max_examples=200)
@given(ring_and_polys(2))
def test_frobenius_additive(data):
    R, (f, g) = data
    p = R.p
    assert (f + g) ** p == f ** p + g ** p
    assert (f + g).frobenius(p) == f.frobenius(p) + g.frobenius(p)


@settings(max_examples=200)
@given(ring_and_polys(1))
def test_normalize_idempotent_and_text_round_trip(data):
    R, (f,) = data
    again = R.normalize(list(f.as_dict().items()))
    assert again == f
    assert R.parse(str(f)) == f


@settings(max_examples=200)
@given(st.sampled_from(["degrevlex", "lex"]),
       st.lists(st.integers(0, 4), min_size=3, max_size=3),
       st.lists(st.integers(0, 4), min_size=3, max_size=3),
       st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_orders_are_multiplicative(order, a, b, m):
    a, b, m = tuple(a), tuple(b), tuple(m)
    c = compare_monomials(a, b, order)
    am = tuple(x + y for x, y in zip(a, m))
    bm = tuple(x + y for x, y in zip(b, m))
    assert compare_monomials(am, bm, order) == c
    assert compare_monomials(b, a, order) == -c
