"""Bracket powers and Frobenius roots of submodules of free modules.

F^e_* R is free over R on the monomials x^b with every exponent below p^e, so
every v in R^beta has a unique expansion v = sum_b u_b^[p^e] x^b.  The root
I_e(V) of a submodule V is generated by all the u_b of all generators of V.
The expansion is computed term by term: x^a splits as (x^(a // p^e))^(p^e) *
x^(a mod p^e), componentwise.
"""

from __future__ import annotations

from .modules import FreeVector, PolyMatrix, SubmoduleGens
from .ring import Polynomial


def bracket_power(x, e):
    """Raise every polynomial entry of ``x`` to the ``p**e`` power."""
    if e < 0:
        raise ValueError("e must be >= 0")
    if isinstance(x, Polynomial):
        return x.frobenius(x.ring.p ** e) if e else x
    if isinstance(x, FreeVector):
        q = x.ring.p ** e
        return FreeVector(x.ring, [f.frobenius(q) for f in x.coords])
    if isinstance(x, PolyMatrix):
        q = x.ring.p ** e
        return x.map(lambda f: f.frobenius(q))
    if isinstance(x, SubmoduleGens):
        return SubmoduleGens(x.ring, x.rank, [bracket_power(g, e) for g in x.gens])
    raise TypeError(f"cannot take bracket power of {type(x).__name__}")


def frob_decompose(v, e):
    """Split ``v`` as ``sum_b bracket_power(u_b, e) * x^b``.

    Returns ``{b: u_b}`` with only nonzero ``u_b``; ``b`` ranges over exponent
    tuples with every entry below ``p**e``.
    """
    if e < 1:
        raise ValueError("frob_decompose needs e >= 1")
    ring = v.ring
    q = ring.p ** e
    rank = v.rank
    parts = {}
    for pos, f in enumerate(v.coords):
        for m, c in f._d.items():
            b = tuple(a % q for a in m)
            u = tuple(a // q for a in m)
            slot = parts.get(b)
            if slot is None:
                slot = parts[b] = [{} for _ in range(rank)]
            slot[pos][u] = c
    return {b: FreeVector(ring, [ring.from_dict(d) for d in parts[b]])
            for b in sorted(parts)}


def reconstruct(parts, e, ring, rank):
    """Inverse of :func:`frob_decompose`."""
    acc = FreeVector.zero(ring, rank)
    for b, u in parts.items():
        acc = acc + FreeVector(ring, [f.frobenius(ring.p ** e).shift(b) for f in u.coords])
    return acc


def frob_root(V, e):
    """Generators of I_e(V), the smallest L with V inside L^[p^e]."""
    if e < 1:
        raise ValueError("frob_root needs e >= 1")
    gens = []
    seen = set()
    for g in V.gens:
        for u in frob_decompose(g, e).values():
            if u not in seen:
                seen.add(u)
                gens.append(u)
    return SubmoduleGens(V.ring, V.rank, gens)


def apply_matrix(U, V):
    """The submodule U*V, generated by U*g for the generators g of V."""
    return SubmoduleGens(V.ring, U.nrows, [U @ g for g in V.gens])
