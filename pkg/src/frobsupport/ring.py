"""Sparse multivariate polynomials over a prime field F_p.

Monomials are dense exponent tuples.  A :class:`Polynomial` is an immutable
mapping ``monomial -> coefficient`` (coefficients in ``1..p-1``); the sorted
term sequence is produced on demand, decreasing in the ring's monomial order.

Two monomial orders are supported, ``degrevlex`` (default) and ``lex``.
Internally every order is represented by a *rank key*: a tuple-valued
function such that ``rank_key(m1) < rank_key(m2)`` iff ``m1 > m2`` in the
order.  Sorting by rank key therefore lists terms largest first, and a
min-heap of rank keys pops the leading term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from operator import add

from .errors import ParseError, ShapeError

ORDERS = ("degrevlex", "lex")


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field F_q, q = p**s.

    Polynomial arithmetic is over the prime field (``s == 1``); ``s > 1`` is
    only used to pick evaluation points in an extension, see
    :class:`ExtensionField`.
    """

    p: int
    s: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic must be prime, got {self.p}")
        if self.s < 1:
            raise ValueError("extension degree must be >= 1")

    @property
    def q(self):
        return self.p ** self.s


@dataclass(frozen=True)
class OrderSpec:
    """Monomial order plus the module order used on free modules.

    The module order is always position-over-term with coordinate 0 (the
    first coordinate) highest.
    """

    monomial: str = "degrevlex"
    module: str = "pot"

    def __post_init__(self):
        if self.monomial not in ORDERS:
            raise ValueError(f"unknown monomial order {self.monomial!r}")
        if self.module != "pot":
            raise ValueError("only position-over-term module orders are supported")


def rank_key_function(order, nvars):
    if order == "degrevlex":
        def key(m):
            return (-sum(m),) + m[::-1]
    elif order == "lex":
        def key(m):
            return tuple(-e for e in m)
    else:
        raise ValueError(f"unknown monomial order {order!r}")
    return key


def compare_monomials(m1, m2, order="degrevlex"):
    """Return 1, 0 or -1 as ``m1`` is greater than, equal to or less than ``m2``."""
    if isinstance(order, OrderSpec):
        order = order.monomial
    m1, m2 = tuple(m1), tuple(m2)
    if len(m1) != len(m2):
        raise ShapeError(f"monomials have {len(m1)} and {len(m2)} variables")
    key = rank_key_function(order, len(m1))
    k1, k2 = key(m1), key(m2)
    if k1 == k2:
        return 0
    return 1 if k1 < k2 else -1


def divides(a, b):
    """True iff monomial ``a`` divides monomial ``b``."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def monomial_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def monomials_up_to(nvars, degree):
    """All exponent tuples of total degree <= ``degree``, by increasing degree."""
    out = []

    def rec(prefix, left, k):
        if k == nvars - 1:
            out.append(prefix + (left,))
            return
        for e in range(left, -1, -1):
            rec(prefix + (e,), left - e, k + 1)

    if nvars == 0:
        return [()]
    for d in range(degree + 1):
        rec((), d, 0)
    return out


# -- text form -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)(?:\s*\^\s*(\d+))?|(\*))")


def _parse_term(text, index, line):
    exps = [0] * len(index)
    coeff = 1
    pos = 0
    seen_factor = False
    expect_factor = True
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot parse {text[pos:]!r}", line)
        pos = m.end()
        num, var, exp, star = m.groups()
        if star:
            if expect_factor:
                raise ParseError(f"misplaced '*' in {text!r}", line)
            expect_factor = True
            continue
        if num is not None:
            coeff *= int(num)
        else:
            if var not in index:
                raise ParseError(f"unknown variable {var!r}", line)
            exps[index[var]] += int(exp) if exp is not None else 1
        seen_factor = True
        expect_factor = False
    if not seen_factor or expect_factor:
        raise ParseError(f"incomplete term {text!r}", line)
    return tuple(exps), coeff


def parse_raw(text, variables, line=None):
    """Parse ``text`` into a list of ``(exponents, integer coefficient)``.

    Coefficients are left as integers (no reduction), so the result can be
    pushed into rings of different characteristics.
    """
    index = {v: i for i, v in enumerate(variables)}
    s = text.strip()
    if not s:
        raise ParseError("empty polynomial", line)
    chunks = re.split(r"([+-])", s)
    terms = []
    sign = 1
    pending = False
    for chunk in chunks:
        if chunk in ("+", "-"):
            if pending:
                raise ParseError(f"dangling operator in {text!r}", line)
            sign = sign * (-1 if chunk == "-" else 1)
            pending = True
            continue
        chunk = chunk.strip()
        if not chunk:
            continue
        exps, c = _parse_term(chunk, index, line)
        terms.append((exps, sign * c))
        sign = 1
        pending = False
    if pending:
        raise ParseError(f"dangling operator in {text!r}", line)
    if not terms:
        raise ParseError(f"no terms in {text!r}", line)
    return terms


def format_term(mono, coeff, variables):
    factors = []
    for v, e in zip(variables, mono):
        if e == 1:
            factors.append(v)
        elif e > 1:
            factors.append(f"{v}^{e}")
    if not factors:
        return str(coeff)
    if coeff != 1:
        factors.insert(0, str(coeff))
    return "*".join(factors)


# -- ring and polynomials -------------------------------------------------


class PolynomialRing:
    """The ring F_p[x_1..x_n] with a fixed monomial order."""

    def __init__(self, p, variables, order="degrevlex"):
        if isinstance(variables, str):
            variables = [v.strip() for v in variables.split(",") if v.strip()]
        variables = tuple(variables)
        if isinstance(order, OrderSpec):
            order = order.monomial
        self.field = FieldSpec(p)
        self.p = p
        self.variables = variables
        self.nvars = len(variables)
        self.order = OrderSpec(order)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        for v in variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", v):
                raise ValueError(f"bad variable name {v!r}")
        self.rank_key = rank_key_function(order, self.nvars)
        self.zero_exps = (0,) * self.nvars
        self._index = {v: i for i, v in enumerate(variables)}

    def __eq__(self, other):
        return (isinstance(other, PolynomialRing) and self.p == other.p
                and self.variables == other.variables and self.order == other.order)

    def __hash__(self):
        return hash((self.p, self.variables, self.order.monomial))

    def __repr__(self):
        return (f"PolynomialRing(p={self.p}, vars={','.join(self.variables)}, "
                f"order={self.order.monomial})")

    # constructors

    def normalize(self, raw_terms):
        """Build a polynomial from ``(exponents, integer)`` pairs.

        Coefficients are reduced mod p, equal monomials merged, zeros dropped.
        """
        p = self.p
        d = {}
        for exps, c in raw_terms:
            exps = tuple(exps)
            if len(exps) != self.nvars:
                raise ShapeError(f"monomial {exps} has wrong length for {self!r}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            d[exps] = (d.get(exps, 0) + c) % p
        return Polynomial(self, {m: c for m, c in d.items() if c})

    def parse(self, text, line=None):
        return self.normalize(parse_raw(text, self.variables, line))

    def constant(self, c):
        c %= self.p
        return Polynomial(self, {self.zero_exps: c} if c else {})

    def monomial(self, exps, coeff=1):
        return self.normalize([(exps, coeff)])

    def from_dict(self, d):
        """Trusted constructor: ``d`` must already be reduced with no zeros."""
        return Polynomial(self, d)

    def __call__(self, x):
        if isinstance(x, Polynomial):
            if x.ring != self:
                raise ValueError("polynomial from a different ring")
            return x
        if isinstance(x, int):
            return self.constant(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    @property
    def zero(self):
        return Polynomial(self, {})

    @property
    def one(self):
        return self.constant(1)

    @property
    def gens(self):
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(Polynomial(self, {tuple(e): 1}))
        return out

    def gen(self, name):
        return self.gens[self._index[name]]

    def monomials_up_to(self, degree):
        return monomials_up_to(self.nvars, degree)

    def extend(self, name):
        """A ring with one extra variable appended (same order type)."""
        if name in self._index:
            raise ValueError(f"variable {name!r} already present")
        return PolynomialRing(self.p, self.variables + (name,), self.order.monomial)

    def with_prime(self, p):
        return PolynomialRing(p, self.variables, self.order.monomial)


class Polynomial:
    """Immutable polynomial; build via :class:`PolynomialRing`."""

    __slots__ = ("ring", "_d", "_sorted", "_hash")

    def __init__(self, ring, d):
        self.ring = ring
        self._d = d
        self._sorted = None
        self._hash = None

    # basic queries

    def terms(self):
        """Tuple of ``(monomial, coefficient)``, decreasing in the monomial order."""
        if self._sorted is None:
            key = self.ring.rank_key
            self._sorted = tuple(sorted(self._d.items(), key=lambda t: key(t[0])))
        return self._sorted

    def as_dict(self):
        return dict(self._d)

    def coefficient(self, mono):
        return self._d.get(tuple(mono), 0)

    def monomials(self):
        return [m for m, _ in self.terms()]

    def __len__(self):
        return len(self._d)

    def __bool__(self):
        return bool(self._d)

    def is_zero(self):
        return not self._d

    def is_constant(self):
        return not self._d or (len(self._d) == 1 and self.ring.zero_exps in self._d)

    def constant_value(self):
        return self._d.get(self.ring.zero_exps, 0)

    def is_unit(self):
        return len(self._d) == 1 and self.ring.zero_exps in self._d

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._d), default=-1)

    def lead_term(self):
        return self.terms()[0]

    def lead_monomial(self):
        return self.terms()[0][0]

    def lead_coefficient(self):
        return self.terms()[0][1]

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        d = dict(self._d)
        for m, c in other._d.items():
            v = (d.get(m, 0) + c) % p
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Polynomial(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {m: p - c for m, c in self._d.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c):
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, {m: v * c % p for m, v in self._d.items()})

    def shift(self, mono, coeff=1):
        """Multiply by ``coeff * x^mono``."""
        p = self.ring.p
        coeff %= p
        if not coeff:
            return self.ring.zero
        return Polynomial(self.ring, {tuple(map(add, m, mono)): c * coeff % p
                                      for m, c in self._d.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._d, other._d
        if len(a) < len(b):
            a, b = b, a
        if not b:
            return self.ring.zero
        p = self.ring.p
        d = {}
        get = d.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = tuple(map(add, m1, m2))
                d[m] = get(m, 0) + c1 * c2
        return Polynomial(self.ring, {m: c % p for m, c in d.items() if c % p})

    __rmul__ = __mul__

    def frobenius(self, q):
        """``f**q`` for ``q`` a power of p: exponents times q, coefficients fixed."""
        return Polynomial(self.ring, {tuple(e * q for e in m): c for m, c in self._d.items()})

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        p = self.ring.p
        result = self.ring.one
        q = 1
        base = self
        # base-p digits: f^(sum d_i p^i) = prod (f^(p^i))^(d_i)
        while k:
            k, digit = divmod(k, p)
            if digit:
                fq = base.frobenius(q) if q > 1 else base
                for _ in range(digit):
                    result = result * fq
            q *= p
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._d == other._d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def monic(self):
        if not self._d:
            return self
        return self.scale(pow(self.lead_coefficient(), -1, self.ring.p))

    def evaluate(self, point, field=None):
        return evaluate(self, point, field)

    def __str__(self):
        if not self._d:
            return "0"
        v = self.ring.variables
        return " + ".join(format_term(m, c, v) for m, c in self.terms())

    def __repr__(self):
        return f"Polynomial({self})"


def normalize(ring, raw_terms):
    return ring.normalize(raw_terms)


# -- evaluation ---------------------------------------------------------------


class ExtensionField:
    """F_{p^s} as F_p[t]/(m(t)) for the smallest monic irreducible m of degree s.

    Elements are integers ``0..q-1`` whose base-p digits are the coefficients
    of the residue, lowest degree first.  Used for pointwise checks of
    vanishing sets.
    """

    def __init__(self, p, s):
        self.spec = FieldSpec(p, s)
        self.p, self.s, self.q = p, s, p ** s
        self.modulus = _smallest_irreducible(p, s)
        self._mul = {}

    def elements(self):
        return range(self.q)

    def digits(self, a):
        out = []
        for _ in range(self.s):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def from_digits(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def embed(self, c):
        return c % self.p

    def add(self, a, b):
        p = self.p
        return self.from_digits([(x + y) % p for x, y in zip(self.digits(a), self.digits(b))])

    def mul(self, a, b):
        key = (a, b) if a <= b else (b, a)
        r = self._mul.get(key)
        if r is None:
            p, s = self.p, self.s
            x, y = self.digits(a), self.digits(b)
            prod = [0] * (2 * s - 1)
            for i, u in enumerate(x):
                if u:
                    for j, v in enumerate(y):
                        prod[i + j] = (prod[i + j] + u * v) % p
            m = self.modulus
            for k in range(len(prod) - 1, s - 1, -1):
                c = prod[k]
                if c:
                    for i in range(s + 1):
                        prod[k - s + i] = (prod[k - s + i] - c * m[i]) % p
            r = self.from_digits(prod[:s])
            self._mul[key] = r
        return r

    def pow(self, a, k):
        r = 1
        while k:
            if k & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            k >>= 1
        return r


def _smallest_irreducible(p, s):
    """Coefficient list (low to high, monic) of an irreducible of degree ``s``."""
    if s == 1:
        return [0, 1]

    def polymod(a, m):
        a = a[:]
        dm = len(m) - 1
        inv = pow(m[-1], -1, p)
        for k in range(len(a) - 1, dm - 1, -1):
            c = a[k] * inv % p
            if c:
                for i in range(dm + 1):
                    a[k - dm + i] = (a[k - dm + i] - c * m[i]) % p
        return a[:dm]

    for tail in product(range(p), repeat=s):
        cand = list(tail[::-1]) + [1]
        if cand[0] == 0:
            continue
        ok = True
        for d in range(1, s // 2 + 1):
            for t in product(range(p), repeat=d):
                fac = list(t[::-1]) + [1]
                if not any(polymod(cand, fac)):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return cand
    raise AssertionError("no irreducible polynomial found")


def evaluate(f, point, field=None):
    """Evaluate ``f`` at ``point``.

    Without ``field`` the point has integer coordinates read mod p; with an
    :class:`ExtensionField` the coordinates are field elements.
    """
    ring = f.ring
    if len(point) != ring.nvars:
        raise ShapeError(f"point has {len(point)} coordinates, ring has {ring.nvars}")
    if field is None:
        p = ring.p
        pt = [a % p for a in point]
        total = 0
        for m, c in f._d.items():
            t = c
            for a, e in zip(pt, m):
                if e:
                    t = t * pow(a, e, p) % p
            total += t
        return total % p
    if field.p != ring.p:
        raise ValueError("evaluation field has the wrong characteristic")
    total = 0
    for m, c in f._d.items():
        t = field.embed(c)
        for a, e in zip(point, m):
            if e:
                t = field.mul(t, field.pow(a, e))
        total = field.add(total, t)
    return total
