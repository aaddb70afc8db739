import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from frobsupport._linalg import extend_rref, matmul_mod, rref_mod_p, span_rref
from oracles import gf_rref


@st.composite
def matrices(draw, max_rows=8, max_cols=8):
    p = draw(st.sampled_from([2, 3, 5, 7, 101]))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [[draw(st.integers(0, p - 1)) for _ in range(c)] for _ in range(r)]
    return p, rows


@settings(max_examples=300)
@given(matrices())
def test_rref_matches_sympy(data):
    p, rows = data
    m, piv = rref_mod_p(rows, p)
    assert m.tolist() == gf_rref(rows, p)
    assert piv == sorted(piv) and len(piv) == m.shape[0]
    for i, c in enumerate(piv):
        assert m[i, c] == 1
        assert np.count_nonzero(m[:, c]) == 1


@settings(max_examples=200)
@given(matrices(), st.integers(1, 4))
def test_chunked_span_equals_plain_rref(data, chunk):
    p, rows = data
    m, piv = span_rref(np.array(rows), p, len(rows[0]), chunk=chunk)
    m2, piv2 = rref_mod_p(rows, p)
    assert np.array_equal(m, m2) and piv == piv2


@settings(max_examples=200)
@given(matrices(), st.data())
def test_extend_rref(data, d):
    p, rows = data
    k = d.draw(st.integers(0, len(rows)))
    if k == 0:
        return
    base, piv = rref_mod_p(rows[:k], p)
    if len(rows) > k:
        base, piv = extend_rref(base, piv, rows[k:], p)
    assert base.tolist() == gf_rref(rows, p)


def test_matmul_mod_large_prime_path():
    p = 2 ** 31 - 1
    a = np.array([[p - 1, p - 2]], dtype=np.int64)
    b = np.array([[p - 1], [1]], dtype=np.int64)
    assert matmul_mod(a, b, p)[0, 0] == ((p - 1) ** 2 + (p - 2)) % p
