"""Dense linear algebra over F_p on numpy integer arrays."""

from __future__ import annotations

import numpy as np

_FLOAT_EXACT = 2 ** 53


def matmul_mod(a, b, p):
    """``a @ b mod p`` for nonnegative int64 arrays with entries below p."""
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if k * (p - 1) ** 2 < _FLOAT_EXACT:
        out = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(out, p).astype(np.int64)
    if k * (p - 1) ** 2 < 2 ** 63:
        return (a @ b) % p
    raise OverflowError("modulus too large for exact int64 products")


def _inverses(p):
    return {c: pow(c, -1, p) for c in range(1, p)} if p < 100_000 else None


def rref_mod_p(m, p):
    """Reduced row echelon form of ``m`` over F_p.

    Returns ``(rows, pivots)`` where zero rows are dropped, ``pivots`` is the
    strictly increasing list of leading columns and every leading entry is 1.
    """
    m = np.array(m, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        if inv != 1:
            m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        idx = np.flatnonzero(col)
        if idx.size:
            m[idx] = (m[idx] - np.outer(col[idx], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def extend_rref(basis, pivots, rows, p):
    """Add ``rows`` to the span of an rref ``basis``; returns the new rref."""
    rows = np.asarray(rows, dtype=np.int64) % p
    if basis.shape[0]:
        rows = (rows - matmul_mod(rows[:, pivots], basis, p)) % p
    rows = rows[np.any(rows != 0, axis=1)]
    if rows.shape[0] == 0:
        return basis, pivots
    new, newpiv = rref_mod_p(rows, p)
    if basis.shape[0]:
        basis = (basis - matmul_mod(basis[:, newpiv], new, p)) % p
        allrows = np.vstack([basis, new])
        allpiv = list(pivots) + list(newpiv)
        order = np.argsort(allpiv, kind="stable")
        return allrows[order], [allpiv[i] for i in order]
    return new, list(newpiv)


def span_rref(rows, p, ncols, chunk=None):
    """rref of the row span of a (possibly tall) matrix, processed in chunks."""
    basis = np.zeros((0, ncols), dtype=np.int64)
    pivots = []
    n = rows.shape[0]
    chunk = chunk or max(ncols, 64)
    for start in range(0, n, chunk):
        basis, pivots = extend_rref(basis, pivots, rows[start:start + chunk], p)
        if len(pivots) == ncols:
            break
    return basis, pivots
