"""Dense integer polynomials in the deformation parameter q.

A polynomial a_0 + a_1 q + ... + a_d q^d is the tuple (a_0, ..., a_d) with
a_d != 0; the zero polynomial is the empty tuple.  These are the raw
coefficients behind the formal-q domain (fractions of integer polynomials)
and the cyclotomic domains.
"""

from __future__ import annotations

import math
from fractions import Fraction

ZERO = ()
ONE = (1,)
Q = (0, 1)


def trim(coeffs) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def const(k: int) -> tuple:
    return (k,) if k else ()


def degree(a) -> int:
    """Degree, with deg 0 = -1."""
    return len(a) - 1


def lc(a) -> int:
    return a[-1] if a else 0


def add(a, b) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def neg(a) -> tuple:
    return tuple(-x for x in a)


def sub(a, b) -> tuple:
    return add(a, neg(b))


def mul(a, b) -> tuple:
    if not a or not b:
        return ZERO
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def scale(a, k: int) -> tuple:
    if k == 0:
        return ZERO
    return tuple(x * k for x in a)


def qpow(k: int) -> tuple:
    """q**k for k >= 0."""
    return (0,) * k + (1,)


def divexact(a, b) -> tuple:
    """Exact division in Z[q]; raises ArithmeticError if b does not divide a."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    if not a:
        return ZERO
    r = list(a)
    db, lb = degree(b), lc(b)
    out = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        if r[i] == 0:
            continue
        c, rem = divmod(r[i], lb)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        out[i - db] = c
        for j, y in enumerate(b):
            r[i - db + j] -= c * y
    if any(r[:db]):
        raise ArithmeticError("inexact polynomial division")
    return trim(out)


def content(a) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
    return g


def primitive(a) -> tuple:
    """Content-free form with positive leading coefficient; zero stays zero."""
    if not a:
        return ZERO
    g = content(a)
    if lc(a) < 0:
        g = -g
    return tuple(x // g for x in a)


def pseudo_rem(a, b) -> tuple:
    """lc(b)^(deg a - deg b + 1) * a mod b, all over Z."""
    da, db = degree(a), degree(b)
    if da < db:
        return a
    r = list(a)
    lb = lc(b)
    for i in range(da, db - 1, -1):
        top = r[i]
        r = [x * lb for x in r]
        if top:
            for j, y in enumerate(b):
                r[i - db + j] -= top * y
        r[i] = 0
    return trim(r)


def gcd(a, b) -> tuple:
    """Polynomial gcd over Z[q], primitive up to its integer content part."""
    if not a:
        return primitive(b) if b else ZERO
    if not b:
        return primitive(a)
    ca, cb = abs(content(a)), abs(content(b))
    pa, pb = primitive(a), primitive(b)
    while pb:
        pa, pb = pb, primitive(pseudo_rem(pa, pb))
    return scale(pa, math.gcd(ca, cb))


def lcm(a, b) -> tuple:
    if not a or not b:
        return ZERO
    return primitive(divexact(mul(a, b), gcd(a, b)))


def to_fracs(a) -> list[Fraction]:
    return [Fraction(x) for x in a]


def from_fracs(coeffs) -> tuple[tuple, int]:
    """Clear denominators of a Fraction list: returns (integer poly, common denominator)."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return trim(int(c * den) for c in coeffs), den


_CYCLOTOMIC: dict[int, tuple] = {1: (-1, 1)}


def cyclotomic(n: int) -> tuple:
    """n-th cyclotomic polynomial as an integer tuple."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    got = _CYCLOTOMIC.get(n)
    if got is not None:
        return got
    num = tuple([-1] + [0] * (n - 1) + [1])  # q^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = divexact(num, cyclotomic(d))
    _CYCLOTOMIC[n] = num
    return num


class QFrac:
    """Reduced fraction num/den of integer polynomials in q.

    Invariants: num and den are content-free with gcd(num, den) constant,
    den has positive leading coefficient, and 0 is represented as 0/1.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE, _normalized=False):
        if _normalized:
            self.num, self.den = num, den
            return
        if isinstance(num, int):
            num = const(num)
        if isinstance(den, int):
            den = const(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = ZERO, ONE
            return
        g = gcd(num, den)
        if degree(g) > 0 or abs(g[0] if g else 1) > 1:
            num = divexact(num, g)
            den = divexact(den, g)
        if lc(den) < 0:
            num, den = neg(num), neg(den)
        self.num, self.den = num, den

    @property
    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other):
        return QFrac(add(mul(self.num, other.den), mul(other.num, self.den)),
                     mul(self.den, other.den))

    def __sub__(self, other):
        return QFrac(sub(mul(self.num, other.den), mul(other.num, self.den)),
                     mul(self.den, other.den))

    def __neg__(self):
        return QFrac(neg(self.num), self.den, _normalized=True)

    def __mul__(self, other):
        return QFrac(mul(self.num, other.num), mul(self.den, other.den))

    def __truediv__(self, other):
        if other.is_zero:
            raise ZeroDivisionError("division by zero q-fraction")
        return QFrac(mul(self.num, other.den), mul(self.den, other.num))

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero q-fraction")
        return QFrac(self.den, self.num)

    def __eq__(self, other):
        return isinstance(other, QFrac) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den == ONE:
            return f"QFrac({list(self.num)})"
        return f"QFrac({list(self.num)}, {list(self.den)})"


QF_ZERO = QFrac(ZERO, ONE, _normalized=True)
QF_ONE = QFrac(ONE, ONE, _normalized=True)
