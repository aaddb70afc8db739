"""Free-module vectors, submodule generator lists and polynomial matrices."""

from __future__ import annotations

from .errors import ShapeError
from .ring import Polynomial


class FreeVector:
    """An element of R^rank, stored as a tuple of polynomials."""

    __slots__ = ("ring", "coords", "_hash")

    def __init__(self, ring, coords):
        coords = tuple(ring(c) for c in coords)
        self.ring = ring
        self.coords = coords
        self._hash = None

    @classmethod
    def zero(cls, ring, rank):
        return cls(ring, [ring.zero] * rank)

    @classmethod
    def unit(cls, ring, rank, i):
        return cls(ring, [ring.one if k == i else ring.zero for k in range(rank)])

    @classmethod
    def from_terms(cls, ring, rank, terms):
        """Inverse of :meth:`to_terms`."""
        parts = [{} for _ in range(rank)]
        for (pos, mono), c in terms.items():
            parts[pos][mono] = c
        return cls(ring, [ring.from_dict(d) for d in parts])

    def to_terms(self):
        """Flat ``{(position, monomial): coefficient}`` dictionary."""
        out = {}
        for pos, f in enumerate(self.coords):
            for m, c in f._d.items():
                out[(pos, m)] = c
        return out

    @property
    def rank(self):
        return len(self.coords)

    @property
    def degree(self):
        """Maximal total degree of a coordinate (-1 for the zero vector)."""
        return max((f.degree for f in self.coords), default=-1)

    def is_zero(self):
        return not any(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def _check(self, other):
        if not isinstance(other, FreeVector):
            return NotImplemented
        if other.rank != self.rank:
            raise ShapeError(f"rank {self.rank} vs {other.rank}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FreeVector(self.ring, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return FreeVector(self.ring, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return FreeVector(self.ring, [-a for a in self.coords])

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Polynomial)):
            return FreeVector(self.ring, [a * scalar for a in self.coords])
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FreeVector):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"FreeVector{self}"


class SubmoduleGens:
    """A finite generating list of a submodule of R^rank (zero generators dropped)."""

    def __init__(self, ring, rank, gens=()):
        kept = []
        for g in gens:
            if not isinstance(g, FreeVector):
                g = FreeVector(ring, g)
            if g.rank != rank:
                raise ShapeError(f"generator of rank {g.rank} in a rank-{rank} module")
            if not g.is_zero():
                kept.append(g)
        self.ring = ring
        self.rank = rank
        self.gens = tuple(kept)
        self.degree_bound = max((g.degree for g in kept), default=-1)

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank, [FreeVector.unit(ring, rank, i) for i in range(rank)])

    @classmethod
    def from_matrix(cls, matrix):
        return cls(matrix.ring, matrix.nrows, matrix.columns())

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __add__(self, other):
        if other.rank != self.rank:
            raise ShapeError("submodules of different free modules")
        return SubmoduleGens(self.ring, self.rank, self.gens + other.gens)

    def is_zero(self):
        return not self.gens

    def to_matrix(self):
        return PolyMatrix.from_columns(self.ring, self.rank, self.gens)

    def __repr__(self):
        return f"SubmoduleGens(rank={self.rank}, gens=[{', '.join(map(str, self.gens))}])"


class PolyMatrix:
    """A dense rows x cols matrix of polynomials."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring, rows, ncols=None):
        rows = tuple(tuple(ring(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ShapeError(f"ragged matrix: row of length {len(r)}, expected {ncols}")
        self.ring = ring
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def zeros(cls, ring, nrows, ncols):
        z = ring.zero
        return cls(ring, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)]
                          for i in range(n)], n)

    @classmethod
    def from_columns(cls, ring, nrows, columns):
        columns = [c.coords if isinstance(c, FreeVector) else tuple(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise ShapeError(f"column of length {len(c)}, expected {nrows}")
        return cls(ring, [[c[i] for c in columns] for i in range(nrows)], len(columns))

    @classmethod
    def diagonal(cls, ring, entries):
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else ring.zero for j in range(n)]
                          for i in range(n)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return FreeVector(self.ring, [r[j] for r in self.rows])

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self):
        return PolyMatrix(self.ring, [[self.rows[i][j] for i in range(self.nrows)]
                                      for j in range(self.ncols)], self.nrows)

    @property
    def T(self):
        return self.transpose()

    def __matmul__(self, other):
        if isinstance(other, FreeVector):
            if other.rank != self.ncols:
                raise ShapeError(f"{self.shape} matrix times rank-{other.rank} vector")
            zero = self.ring.zero
            out = []
            for r in self.rows:
                acc = zero
                for a, b in zip(r, other.coords):
                    if a and b:
                        acc = acc + a * b
                out.append(acc)
            return FreeVector(self.ring, out)
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.ring.zero
        cols = [other.column(j).coords for j in range(other.ncols)]
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, out, other.ncols)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return PolyMatrix(self.ring, [[a + b for a, b in zip(r, s)]
                                      for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ShapeError(f"cannot subtract {self.shape} and {other.shape}")
        return PolyMatrix(self.ring, [[a - b for a, b in zip(r, s)]
                                      for r, s in zip(self.rows, other.rows)], self.ncols)

    def scale(self, c):
        return PolyMatrix(self.ring, [[a * c for a in r] for r in self.rows], self.ncols)

    def map(self, fn):
        return PolyMatrix(self.ring, [[fn(a) for a in r] for r in self.rows], self.ncols)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ShapeError("hstack needs equal row counts")
        return PolyMatrix(self.ring, [r + s for r, s in zip(self.rows, other.rows)],
                          self.ncols + other.ncols)

    def submatrix(self, rows=None, cols=None):
        rows = range(self.nrows) if rows is None else rows
        cols = range(self.ncols) if cols is None else cols
        cols = list(cols)
        return PolyMatrix(self.ring, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def max_degree(self):
        """Largest entry degree (-1 if the matrix is zero or empty)."""
        return max((a.degree for r in self.rows for a in r), default=-1)

    def is_zero(self):
        return not any(a for r in self.rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __str__(self):
        if not self.nrows or not self.ncols:
            return f"<{self.nrows}x{self.ncols} matrix>"
        return "\n".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows)

    def __repr__(self):
        return f"PolyMatrix({self.nrows}x{self.ncols})"


def block_diagonal(ring, blocks):
    """Block-diagonal matrix from a list of matrices."""
    nr = sum(b.nrows for b in blocks)
    nc = sum(b.ncols for b in blocks)
    z = ring.zero
    rows = [[z] * nc for _ in range(nr)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                rows[r0 + i][c0 + j] = b.rows[i][j]
        r0 += b.nrows
        c0 += b.ncols
    return PolyMatrix(ring, rows, nc)
