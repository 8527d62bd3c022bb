"""Exact coefficient domains with canonical representatives.

Four domains are supported: the rationals, prime fields F_p, cyclotomic
fields Q[q]/(Phi_p) for an integer p >= 2, and the formal field Q(q)
realized as reduced fractions of integer polynomials.  Every element is an
immutable value in canonical form, so equality is plain payload equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import qpoly
from .errors import DenominatorVanishes, InvalidDomain
from .intfactor import is_prime

RATIONAL = "rational"
PRIME_FIELD = "prime_field"
CYCLOTOMIC = "cyclotomic"
FORMAL_Q = "formal_q"


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind in (RATIONAL, FORMAL_Q):
            if self.p is not None:
                raise InvalidDomain(f"{self.kind} takes no parameter")
        elif self.kind == PRIME_FIELD:
            if self.p is None or not is_prime(self.p):
                raise InvalidDomain(f"prime field needs a prime modulus, got {self.p}")
        elif self.kind == CYCLOTOMIC:
            if self.p is None or self.p < 2:
                raise InvalidDomain(f"cyclotomic order must be an integer >= 2, got {self.p}")
        else:
            raise InvalidDomain(f"unknown domain kind {self.kind!r}")

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == PRIME_FIELD else 0

    def to_json(self):
        if self.p is None:
            return {"kind": self.kind}
        return {"kind": self.kind, "p": self.p}

    @staticmethod
    def from_json(obj) -> "DomainSpec":
        return DomainSpec(obj["kind"], obj.get("p"))


class RationalDomain:
    """Q with fractions.Fraction payloads."""

    def __init__(self):
        self.spec = DomainSpec(RATIONAL)
        self.characteristic = 0
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def from_int(self, k):
        return Fraction(k)

    def from_fraction(self, fr):
        return Fraction(fr)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return a == 0

    def format_scalar(self, a):
        return str(a)

    def scalar_to_json(self, a):
        return str(a)


class PrimeFieldDomain:
    """F_p with residues in range(p)."""

    def __init__(self, p: int):
        self.spec = DomainSpec(PRIME_FIELD, p)
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, k):
        return k % self.p

    def from_fraction(self, fr):
        return fr.numerator * pow(fr.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero residue")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def format_scalar(self, a):
        return str(a)

    def scalar_to_json(self, a):
        return str(a)


class CyclotomicDomain:
    """Q(zeta_p) = Q[q]/(Phi_p); elements are Fraction tuples of length deg Phi_p."""

    def __init__(self, p: int):
        self.spec = DomainSpec(CYCLOTOMIC, p)
        self.p = p
        self.characteristic = 0
        self.phi = qpoly.cyclotomic(p)
        self.deg = qpoly.degree(self.phi)
        self.zero = (Fraction(0),) * self.deg
        # q^k mod Phi_p for k up to 2*deg-2, enough to reduce products
        self._qpow = self._power_table()
        self.one = self._embed([Fraction(1)])
        self.q = self._embed([Fraction(0), Fraction(1)])

    def _power_table(self):
        table = []
        cur = [Fraction(0)] * self.deg
        cur[0] = Fraction(1)
        for _ in range(max(2 * self.deg - 1, 2)):
            table.append(tuple(cur))
            cur = [Fraction(0)] + cur
            top = cur.pop()
            if top:
                for i in range(self.deg):
                    cur[i] -= top * self.phi[i]
        return table

    def _embed(self, coeffs):
        out = [Fraction(0)] * self.deg
        for k, c in enumerate(coeffs):
            if c == 0:
                continue
            pw = self.q_power(k)
            for i in range(self.deg):
                out[i] += c * pw[i]
        return tuple(out)

    def q_power(self, k: int):
        """q^k as a residue; k may be negative (q has order p)."""
        k %= self.p
        if k < len(self._qpow):
            return self._qpow[k]
        return self._embed_monomial(k)

    def _embed_monomial(self, k):
        out = self.one
        base = self.q
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def from_int(self, k):
        out = [Fraction(0)] * self.deg
        out[0] = Fraction(k)
        return tuple(out)

    def from_fraction(self, fr):
        out = [Fraction(0)] * self.deg
        out[0] = Fraction(fr)
        return tuple(out)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        prod = [Fraction(0)] * (2 * self.deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = [Fraction(0)] * self.deg
        for k, c in enumerate(prod):
            if c:
                pw = self._qpow[k]
                for i in range(self.deg):
                    out[i] += c * pw[i]
        return tuple(out)

    def inv(self, a):
        # extended Euclid in Q[q] against Phi_p
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero cyclotomic element")
        r0 = [Fraction(c) for c in self.phi]
        r1 = list(a)
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while True:
            while r1 and r1[-1] == 0:
                r1.pop()
            if len(r1) == 1:
                c = r1[0]
                return self._embed([x / c for x in s1])
            q, r = _frac_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _frac_sub(s0, _frac_mul(q, s1))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def format_scalar(self, a):
        parts = []
        for k, c in enumerate(a):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*q" if c != 1 else "q")
            else:
                parts.append(f"{c}*q^{k}" if c != 1 else f"q^{k}")
        return "(" + " + ".join(parts) + ")" if parts else "0"

    def scalar_to_json(self, a):
        return [str(x) for x in a]


def _frac_divmod(a, b):
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [Fraction(0)] * max(len(a) - db, 1)
    for i in range(len(a) - 1, db - 1, -1):
        if a[i] == 0:
            continue
        c = a[i] / lead
        q[i - db] = c
        for j, y in enumerate(b):
            a[i - db + j] -= c * y
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return q, a


def _frac_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _frac_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return out


class FormalQDomain:
    """Q(q) as reduced fractions of content-free integer polynomials."""

    def __init__(self):
        self.spec = DomainSpec(FORMAL_Q)
        self.characteristic = 0
        self.zero = qpoly.QF_ZERO
        self.one = qpoly.QF_ONE
        self.q = qpoly.QFrac(qpoly.Q)

    def q_power(self, k: int):
        if k >= 0:
            return qpoly.QFrac(qpoly.qpow(k))
        return qpoly.QFrac(qpoly.ONE, qpoly.qpow(-k))

    def from_int(self, k):
        return qpoly.QFrac(k)

    def from_fraction(self, fr):
        return qpoly.QFrac(fr.numerator, fr.denominator)

    def from_qpoly(self, coeffs):
        return qpoly.QFrac(tuple(coeffs))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return a.is_zero

    def format_scalar(self, a):
        def fmt(poly):
            parts = []
            for k, c in enumerate(poly):
                if c == 0:
                    continue
                if k == 0:
                    parts.append(str(c))
                else:
                    var = "q" if k == 1 else f"q^{k}"
                    parts.append(var if c == 1 else f"{c}*{var}")
            return " + ".join(parts) if parts else "0"

        if a.den == qpoly.ONE:
            return f"({fmt(a.num)})"
        return f"(({fmt(a.num)})/({fmt(a.den)}))"

    def scalar_to_json(self, a):
        return {"num": list(a.num), "den": list(a.den)}


@lru_cache(maxsize=None)
def make_domain(spec: DomainSpec):
    """Domain handle for a validated spec; handles are cached singletons."""
    if spec.kind == RATIONAL:
        return RationalDomain()
    if spec.kind == PRIME_FIELD:
        return PrimeFieldDomain(spec.p)
    if spec.kind == CYCLOTOMIC:
        return CyclotomicDomain(spec.p)
    return FormalQDomain()


def rational() -> RationalDomain:
    return make_domain(DomainSpec(RATIONAL))


def prime_field(p: int) -> PrimeFieldDomain:
    return make_domain(DomainSpec(PRIME_FIELD, p))


def cyclotomic_field(p: int) -> CyclotomicDomain:
    return make_domain(DomainSpec(CYCLOTOMIC, p))


def formal_q() -> FormalQDomain:
    return make_domain(DomainSpec(FORMAL_Q))


def specialize_q(x: qpoly.QFrac, target: DomainSpec):
    """Image of a formal-q scalar under q -> zeta_p in the target cyclotomic field.

    Raises DenominatorVanishes when the (reduced) denominator lies in (Phi_p).
    """
    if target.kind != CYCLOTOMIC:
        raise InvalidDomain("specialization target must be a cyclotomic domain")
    dom = make_domain(target)
    den = dom._embed(qpoly.to_fracs(x.den))
    if dom.is_zero(den):
        raise DenominatorVanishes(
            f"denominator of formal-q scalar vanishes at a primitive {target.p}-th root of unity")
    num = dom._embed(qpoly.to_fracs(x.num))
    return dom.div(num, den)
