"""Sparse multivariate polynomials with the permutation action of S_n.

Variables x1..xn are indices 0..n-1.  Terms are kept in a dict mapping
exponent tuples to nonzero domain scalars; the canonical term order is
graded lexicographic with x1 > x2 > ... > xn.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial, inf

from .coeffs import make_domain
from .errors import BadCharacteristic

TRIV = "triv"
SIGN = "sign"
STD = "std"


def grlex_key(exps):
    # sort() with this key puts graded-lex larger monomials first
    return (-sum(exps),) + tuple(-e for e in exps)


def monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree d, graded-lex descending."""
    if n == 1:
        return [(d,)]
    out = []
    for e in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - e):
            out.append((e,) + rest)
    return out


class Poly:
    __slots__ = ("domain", "n", "terms")

    def __init__(self, domain, n: int, terms=None):
        self.domain = domain
        self.n = n
        clean = {}
        if terms:
            for exps, c in terms.items():
                if not domain.is_zero(c):
                    clean[tuple(exps)] = c
        self.terms = clean

    @classmethod
    def zero(cls, domain, n):
        return cls(domain, n)

    @classmethod
    def constant(cls, domain, n, c):
        return cls(domain, n, {(0,) * n: c})

    @classmethod
    def one(cls, domain, n):
        return cls.constant(domain, n, domain.one)

    @classmethod
    def variable(cls, domain, n, i):
        exps = [0] * n
        exps[i] = 1
        return cls(domain, n, {tuple(exps): domain.one})

    @classmethod
    def from_int_terms(cls, domain, n, int_terms):
        return cls(domain, n, {e: domain.from_int(c) for e, c in int_terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_degree(self) -> int:
        """Common degree of all terms; raises if the polynomial is not homogeneous."""
        degs = {sum(e) for e in self.terms}
        if len(degs) != 1:
            raise ValueError("polynomial is not homogeneous")
        return degs.pop()

    def var_degree(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def leading_term(self):
        return min(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.domain.zero)

    def __add__(self, other):
        dom = self.domain
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = dom.add(out[e], c)
                if dom.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return Poly._raw(dom, self.n, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        dom = self.domain
        return Poly._raw(dom, self.n, {e: dom.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other):
        dom = self.domain
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = dom.mul(c1, c2)
                if e in out:
                    s = dom.add(out[e], p)
                    if dom.is_zero(s):
                        del out[e]
                    else:
                        out[e] = s
                elif not dom.is_zero(p):
                    out[e] = p
        return Poly._raw(dom, self.n, out)

    def scale(self, c):
        dom = self.domain
        if dom.is_zero(c):
            return Poly.zero(dom, self.n)
        return Poly._raw(dom, self.n, {e: dom.mul(c, v) for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Poly.one(self.domain, self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.n == other.n
                and self.domain.spec == other.domain.spec and self.terms == other.terms)

    def __hash__(self):
        return hash((self.domain.spec, self.n, tuple(self.sorted_terms())))

    def derivative(self, i: int):
        dom = self.domain
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            v = dom.mul(c, dom.from_int(e[i]))
            if not dom.is_zero(v):
                out[tuple(ne)] = v
        return Poly._raw(dom, self.n, out)

    def evaluate(self, point):
        """Value at a tuple of domain scalars."""
        dom = self.domain
        total = dom.zero
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                for _ in range(k):
                    v = dom.mul(v, point[i])
            total = dom.add(total, v)
        return total

    def map_domain(self, domain, convert):
        return Poly(domain, self.n, {e: convert(c) for e, c in self.terms.items()})

    @classmethod
    def _raw(cls, domain, n, terms):
        p = cls.__new__(cls)
        p.domain, p.n, p.terms = domain, n, terms
        return p

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = [f"x{i + 1}" + (f"^{k}" if k > 1 else "")
                       for i, k in enumerate(e) if k > 0]
            mono = " ".join(factors)
            cs = self.domain.format_scalar(c)
            parts.append(f"{cs} * {mono}" if mono else cs)
        return " + ".join(parts)

    __repr__ = __str__

    def to_json(self):
        return {
            "domain": self.domain.spec.to_json(),
            "n": self.n,
            "terms": [[list(e), self.domain.scalar_to_json(c)] for e, c in self.sorted_terms()],
        }


def permute(sigma, P: Poly) -> Poly:
    """Action of a permutation on variables: x_i -> x_sigma[i]."""
    dom = P.domain
    out = {}
    for e, c in P.terms.items():
        ne = [0] * P.n
        for i, k in enumerate(e):
            ne[sigma[i]] = k
        out[tuple(ne)] = c
    return Poly._raw(dom, P.n, out)


def transposition(n: int, i: int, j: int) -> tuple[int, ...]:
    sigma = list(range(n))
    sigma[i], sigma[j] = j, i
    return tuple(sigma)


def transposition_pairs(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def perm_sign(sigma) -> int:
    sign = 1
    seen = [False] * len(sigma)
    for i in range(len(sigma)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def divisibility_order(P: Poly, i: int, j: int):
    """Largest k with (x_i - x_j)^k | P, via the substitution x_i <- x_j + u.

    Returns math.inf for the zero polynomial.
    """
    if P.is_zero():
        return inf
    dom = P.domain
    # bucket[k] collects the coefficient of u^k as a map on reduced monomials
    buckets: dict[int, dict] = {}
    for e, c in P.terms.items():
        a = e[i]
        rest = tuple(e[t] for t in range(P.n) if t != i)
        for k in range(a + 1):
            coef = dom.mul(c, dom.from_int(comb(a, k)))
            if dom.is_zero(coef):
                continue
            key = list(rest)
            key[j if j < i else j - 1] += a - k
            key = tuple(key)
            bucket = buckets.setdefault(k, {})
            if key in bucket:
                s = dom.add(bucket[key], coef)
                if dom.is_zero(s):
                    del bucket[key]
                else:
                    bucket[key] = s
            else:
                bucket[key] = coef
    return min(k for k, b in buckets.items() if b)


def reduce_eliminating(P: Poly, D: Poly, var: int) -> Poly:
    """Remainder of P under division by D, eliminating the given variable.

    D must have an invertible scalar coefficient on its top power of the
    variable, which holds for all divisors used here.
    """
    dom = P.domain
    L = D.var_degree(var)
    lead = None
    lower = []
    for e, c in D.terms.items():
        if e[var] == L:
            if any(k for t, k in enumerate(e) if t != var):
                raise ValueError("divisor is not scalar-led in the eliminated variable")
            lead = c
        else:
            lower.append((e, c))
    lcinv = dom.inv(lead)
    slices: dict[int, dict] = {}
    for e, c in P.terms.items():
        rest = e[:var] + (0,) + e[var + 1 :]
        slices.setdefault(e[var], {})[rest] = c
    top = max(slices, default=-1)
    for deg in range(top, L - 1, -1):
        cur = slices.get(deg)
        if not cur:
            continue
        for rest, c in cur.items():
            qc = dom.mul(c, lcinv)
            for de, dc in lower:
                tgt_deg = deg - L + de[var]
                tgt_rest = tuple(r + (dk if t != var else 0)
                                 for t, (r, dk) in enumerate(zip(rest, de)))
                sl = slices.setdefault(tgt_deg, {})
                v = dom.mul(qc, dc)
                if tgt_rest in sl:
                    s = dom.sub(sl[tgt_rest], v)
                    if dom.is_zero(s):
                        del sl[tgt_rest]
                    else:
                        sl[tgt_rest] = s
                else:
                    sl[tgt_rest] = dom.neg(v)
        del slices[deg]
    out = {}
    for deg, cur in slices.items():
        for rest, c in cur.items():
            if dom.is_zero(c):
                continue
            e = list(rest)
            e[var] = deg
            out[tuple(e)] = c
    return Poly._raw(dom, P.n, out)


def exact_div(P: Poly, D: Poly) -> Poly | None:
    """Exact multivariate quotient P / D, or None when D does not divide P."""
    dom = P.domain
    if P.is_zero():
        return P
    rem = {e: c for e, c in P.terms.items()}
    d_lead_e, d_lead_c = D.leading_term()
    inv = dom.inv(d_lead_c)
    quot = {}
    while rem:
        e, c = min(rem.items(), key=lambda t: grlex_key(t[0]))
        qe = tuple(a - b for a, b in zip(e, d_lead_e))
        if any(a < 0 for a in qe):
            return None
        qc = dom.mul(c, inv)
        quot[qe] = qc
        for de, dc in D.terms.items():
            te = tuple(a + b for a, b in zip(qe, de))
            v = dom.mul(qc, dc)
            if te in rem:
                s = dom.sub(rem[te], v)
                if dom.is_zero(s):
                    del rem[te]
                else:
                    rem[te] = s
            else:
                rem[te] = dom.neg(v)
    return Poly._raw(dom, P.n, quot)


def q_divisor(domain, n: int, i: int, j: int, m: int) -> Poly:
    """prod_{k=-m}^{m} (x_i - q^k x_j) in a q-carrying domain.

    Over the formal-q domain negative powers are cleared by the unit q^k
    factor on each k < 0 term, keeping integer polynomial coefficients; over
    a cyclotomic domain q^{-k} is exact, so no clearing happens.
    """
    xi = Poly.variable(domain, n, i)
    xj = Poly.variable(domain, n, j)
    out = Poly.one(domain, n)
    for k in range(-m, m + 1):
        if k < 0 and domain.spec.kind == "formal_q":
            # q^{-k}(x_i - q^k x_j) = q^{|k|} x_i - x_j
            factor = xi.scale(domain.q_power(-k)) - xj
        else:
            factor = xi - xj.scale(domain.q_power(k))
        out = out * factor
    return out


def q_divisibility_test(P: Poly, i: int, j: int, m: int) -> bool:
    """True iff prod_{k=-m}^m (x_i - q^k x_j) divides P."""
    if P.is_zero():
        return True
    D = q_divisor(P.domain, P.n, i, j, m)
    return reduce_eliminating(P, D, i).is_zero()


def isotypic_project(P: Poly, label: str) -> Poly:
    """Group-averaging projector onto an isotypic component.

    triv and sign work for any n with char not dividing n!; std is the
    complement projector and is defined for n = 3 only.
    """
    n = P.n
    dom = P.domain
    if dom.characteristic and dom.characteristic <= n:
        raise BadCharacteristic(
            f"isotypic projection needs {n}! invertible; characteristic {dom.characteristic} is modular")
    if label == STD and n != 3:
        raise ValueError("the 2-dimensional standard component is specific to n = 3")
    perms = list(itertools.permutations(range(n)))
    inv_order = dom.from_fraction(Fraction(1, factorial(n)))
    triv = Poly.zero(dom, n)
    sign = Poly.zero(dom, n)
    for sigma in perms:
        img = permute(sigma, P)
        triv = triv + img
        sign = (sign + img) if perm_sign(sigma) == 1 else (sign - img)
    triv = triv.scale(inv_order)
    sign = sign.scale(inv_order)
    if label == TRIV:
        return triv
    if label == SIGN:
        return sign
    return P - triv - sign


def elementary_invariants(domain) -> tuple[Poly, Poly]:
    """The degree 2 and 3 symmetric generators living in the x_i - x_j subring (n = 3)."""
    x1, x2, x3 = (Poly.variable(domain, 3, i) for i in range(3))
    p2 = (x1 - x2) ** 2 + (x2 - x3) ** 2 + (x3 - x1) ** 2
    p3 = (x1 + x2 - x3.scale(domain.from_int(2))) \
        * (x2 + x3 - x1.scale(domain.from_int(2))) \
        * (x3 + x1 - x2.scale(domain.from_int(2)))
    return p2, p3


def translation_split(P: Poly) -> tuple[Poly, Poly]:
    """Split P = P' + P'' with e1 = x1+x2+x3 dividing P' and P'' in the
    subring generated by x1-x3 and x2-x3.  Needs 3 invertible."""
    if P.n != 3:
        raise ValueError("translation split is specific to n = 3")
    dom = P.domain
    if dom.characteristic == 3:
        raise BadCharacteristic("coordinate change needs 3 invertible")
    third = dom.from_fraction(Fraction(1, 3))
    # coordinates (e, u, v) with x1 = (e + 2u - v)/3, x2 = (e - u + 2v)/3, x3 = (e - u - v)/3
    e = Poly.variable(dom, 3, 0)
    u = Poly.variable(dom, 3, 1)
    v = Poly.variable(dom, 3, 2)
    two = dom.from_int(2)
    subs = [
        (e + u.scale(two) - v).scale(third),
        (e - u + v.scale(two)).scale(third),
        (e - u - v).scale(third),
    ]
    in_euv = Poly.zero(dom, 3)
    for exps, c in P.terms.items():
        t = Poly.constant(dom, 3, c)
        for i, k in enumerate(exps):
            if k:
                t = t * subs[i] ** k
        in_euv = in_euv + t
    x1, x2, x3 = (Poly.variable(dom, 3, i) for i in range(3))
    back = [x1 + x2 + x3, x1 - x3, x2 - x3]
    p_div = Poly.zero(dom, 3)
    p_sub = Poly.zero(dom, 3)
    for exps, c in in_euv.terms.items():
        t = Poly.constant(dom, 3, c)
        for i, k in enumerate(exps):
            if k:
                t = t * back[i] ** k
        if exps[0] > 0:
            p_div = p_div + t
        else:
            p_sub = p_sub + t
    return p_div, p_sub


def poly_from_json(obj) -> Poly:
    from .coeffs import DomainSpec
    from .qpoly import QFrac

    spec = DomainSpec.from_json(obj["domain"])
    dom = make_domain(spec)
    terms = {}
    for exps, cj in obj["terms"]:
        if spec.kind == "rational":
            c = Fraction(cj)
        elif spec.kind == "prime_field":
            c = int(cj) % spec.p
        elif spec.kind == "cyclotomic":
            c = tuple(Fraction(x) for x in cj)
        else:
            c = QFrac(tuple(cj["num"]), tuple(cj["den"]))
        terms[tuple(exps)] = c
    return Poly(dom, obj["n"], terms)
