"""Recursive construction of the two standard-component generators for n = 3.

Everything happens inside the rank-2 subring generated by y1 = x1 - x3 and
y2 = x2 - x3: the generators factor as A = (x1-x2)^(2m+1) K and
B = (x1-x2)^(2m+1) L with K, L symmetric in (y1, y2), deg K = m,
deg L = m + 1.  One level up, K' is the combination of P3*K and P2*L whose
image mod (y1-y2)^2 cancels, divided by (y1-y2)^2; L' likewise from P2^2*K
and P3*L.  The cancellation scalar of a symmetric polynomial mod (y1-y2)^2
is just its value on the diagonal y1 = y2, which keeps every level cheap.

Bivariate polynomials are plain {(a, b): int} dicts throughout; they are
expanded to trivariate Poly values only at the interface.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .coeffs import rational
from .errors import DegenerateLift, MembershipFailure, NotProportional, NormalizationFailure
from .intfactor import primes_up_to, trial_division
from .poly import Poly, exact_div, permute, transposition
from .quasi import is_quasi_invariant

# ---------------------------------------------------------------------------
# bivariate helpers ({(a, b): int}, homogeneous)

BIV_P2 = {(2, 0): 2, (1, 1): -2, (0, 2): 2}
# (y1+y2)(y2-2y1)(y1-2y2)
BIV_P3 = {(3, 0): -2, (2, 1): 3, (1, 2): 3, (0, 3): -2}
BIV_ZSQ = {(2, 0): 1, (1, 1): -2, (0, 2): 1}  # (y1-y2)^2


def biv_mul(f: dict, g: dict) -> dict:
    out = {}
    for (a1, b1), c1 in f.items():
        for (a2, b2), c2 in g.items():
            key = (a1 + a2, b1 + b2)
            v = out.get(key, 0) + c1 * c2
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return out


def biv_add(f: dict, g: dict) -> dict:
    out = dict(f)
    for key, c in g.items():
        v = out.get(key, 0) + c
        if v:
            out[key] = v
        elif key in out:
            del out[key]
    return out


def biv_scale(f: dict, k: int) -> dict:
    return {key: c * k for key, c in f.items()} if k else {}


def biv_diag(f: dict) -> int:
    """Coefficient of y^deg in f(y, y)."""
    return sum(f.values())


def biv_is_symmetric(f: dict) -> bool:
    return all(f.get((b, a), 0) == c for (a, b), c in f.items())


def biv_swap(f: dict) -> dict:
    return {(b, a): c for (a, b), c in f.items()}


def biv_s23(f: dict) -> dict:
    """Reflection swapping x2 and x3 in y-coordinates: y1 -> y1 - y2, y2 -> -y2."""
    out = {}
    for (a, b), c in f.items():
        for k in range(a + 1):
            key = (k, a - k + b)
            sign = -1 if (a - k + b) % 2 else 1
            v = out.get(key, 0) + sign * c * comb(a, k)
            if v:
                out[key] = v
            elif key in out:
                del out[key]
    return out


def biv_divexact_zsq(f: dict) -> dict:
    """Exact quotient f / (y1-y2)^2 for homogeneous f; raises if inexact."""
    if not f:
        return {}
    deg = next(a + b for a, b in f)
    coeff = [0] * (deg + 1)
    for (a, b), c in f.items():
        coeff[a] = c
    out = [0] * (deg - 1)
    # divide by y1^2 - 2 y1 y2 + y2^2 viewed through y1-exponents
    for a in range(deg, 1, -1):
        q = coeff[a]
        out[a - 2] = q
        coeff[a] = 0
        coeff[a - 1] += 2 * q
        coeff[a - 2] -= q
    if coeff[0] or coeff[1]:
        raise ArithmeticError("not divisible by (y1-y2)^2")
    return {(a, deg - 2 - a): c for a, c in enumerate(out) if c}


def biv_content_normalize(f: dict) -> dict:
    """Coprime integer coefficients, leading (lex max) coefficient positive."""
    if not f:
        raise NormalizationFailure("cannot normalize the zero cofactor")
    g = 0
    for c in f.values():
        g = gcd(g, c)
    if f[max(f)] < 0:
        g = -g
    return {key: c // g for key, c in f.items()}


def biv_divides(f: dict, divisor: dict) -> bool:
    """Exact divisibility test for bivariate integer polynomials (over Q)."""
    if not f:
        return True
    rem = {k: Fraction(c) for k, c in f.items()}
    dkey = max(divisor)
    dc = divisor[dkey]
    while rem:
        key = max(rem)
        qa, qb = key[0] - dkey[0], key[1] - dkey[1]
        if qa < 0 or qb < 0:
            return False
        q = rem[key] / dc
        for (a, b), c in divisor.items():
            tgt = (a + qa, b + qb)
            v = rem.get(tgt, Fraction(0)) - q * c
            if v:
                rem[tgt] = v
            elif tgt in rem:
                del rem[tgt]
    return True


def biv_to_poly(f: dict, domain=None, n=3) -> Poly:
    """Expand a y-polynomial to the trivariate x-polynomial (y_i = x_i - x3)."""
    domain = domain or rational()
    y1 = Poly.variable(domain, n, 0) - Poly.variable(domain, n, 2)
    y2 = Poly.variable(domain, n, 1) - Poly.variable(domain, n, 2)
    out = Poly.zero(domain, n)
    for (a, b), c in sorted(f.items()):
        out = out + (y1**a * y2**b).scale(domain.from_int(c))
    return out


# ---------------------------------------------------------------------------
# the chain


@dataclass
class GeneratorChain:
    """Level-m pair of cofactors (K, L) with deg K = m, deg L = m + 1."""

    m: int
    K: dict
    L: dict

    def A(self, domain=None) -> Poly:
        """Degree 3m+1 generator (x1-x2)^(2m+1) K."""
        domain = domain or rational()
        z = Poly.variable(domain, 3, 0) - Poly.variable(domain, 3, 1)
        return z ** (2 * self.m + 1) * biv_to_poly(self.K, domain)

    def B(self, domain=None) -> Poly:
        """Degree 3m+2 generator (x1-x2)^(2m+1) L."""
        domain = domain or rational()
        z = Poly.variable(domain, 3, 0) - Poly.variable(domain, 3, 1)
        return z ** (2 * self.m + 1) * biv_to_poly(self.L, domain)

    def to_json(self):
        return {
            "schema": 1,
            "m": self.m,
            "K": [[a, b, str(c)] for (a, b), c in sorted(self.K.items())],
            "L": [[a, b, str(c)] for (a, b), c in sorted(self.L.items())],
        }

    @staticmethod
    def from_json(obj) -> "GeneratorChain":
        return GeneratorChain(
            obj["m"],
            {(a, b): int(c) for a, b, c in obj["K"]},
            {(a, b): int(c) for a, b, c in obj["L"]},
        )


def initial_chain() -> GeneratorChain:
    """Level 0: A = x1 - x2, B = (x1 - x2)(x1 + x2 - 2 x3)."""
    return GeneratorChain(0, {(0, 0): 1}, {(1, 0): 1, (0, 1): 1})


def _cancel_pair(u: dict, v: dict) -> dict:
    """Combination of u and v vanishing mod (y1-y2)^2, divided out.

    For symmetric homogeneous inputs the class mod (y1-y2)^2 is determined by
    the diagonal value, so a single 2x2 cancellation suffices.
    """
    alpha = biv_diag(u)
    beta = biv_diag(v)
    if alpha == 0 and beta == 0:
        raise DegenerateLift("both candidate products already vanish mod (y1-y2)^2")
    combo = biv_add(biv_scale(u, beta), biv_scale(v, -alpha))
    return biv_divexact_zsq(combo)


def lift_chain(chain: GeneratorChain, verify: bool | None = None) -> GeneratorChain:
    """One level up: cofactors at m + 1 from the level-m chain."""
    k_next = _cancel_pair(biv_mul(BIV_P3, chain.K), biv_mul(BIV_P2, chain.L))
    l_next = _cancel_pair(biv_mul(biv_mul(BIV_P2, BIV_P2), chain.K),
                          biv_mul(BIV_P3, chain.L))
    nxt = GeneratorChain(chain.m + 1, biv_content_normalize(k_next),
                         biv_content_normalize(l_next))
    if not (biv_is_symmetric(nxt.K) and biv_is_symmetric(nxt.L)):
        raise NormalizationFailure("lifted cofactors lost the s12 symmetry")
    if verify is None:
        verify = nxt.m <= 8
    if verify:
        if not is_quasi_invariant(nxt.A(), nxt.m) or not is_quasi_invariant(nxt.B(), nxt.m):
            raise MembershipFailure(f"lifted generators fail the order-{2 * nxt.m + 1} test")
    return nxt


def chain_to(m: int, verify: bool | None = None) -> list[GeneratorChain]:
    chains = [initial_chain()]
    for _ in range(m):
        chains.append(lift_chain(chains[-1], verify=verify))
    return chains


def chain_wedge_scalar(chain: GeneratorChain) -> int:
    """c with K s23(L) - L s23(K) = c * y2^(2m+1); fast bivariate route."""
    w = biv_add(biv_mul(chain.K, biv_s23(chain.L)),
                biv_scale(biv_mul(chain.L, biv_s23(chain.K)), -1))
    expect = (0, 2 * chain.m + 1)
    if not w or set(w) != {expect}:
        if not w:
            raise NotProportional("wedge vanished identically over the rationals")
        raise NotProportional("wedge is not a scalar multiple of the sign generator")
    return w[expect]


def wedge_scalar(A: Poly, B: Poly, m: int):
    """Scalar c with A s23(B) - B s23(A) = c * prod_{i<j} (x_i - x_j)^(2m+1)."""
    dom = A.domain
    s23 = transposition(3, 1, 2)
    w = A * permute(s23, B) - B * permute(s23, A)
    x1, x2, x3 = (Poly.variable(dom, 3, i) for i in range(3))
    sign_gen = ((x1 - x2) * (x1 - x3) * (x2 - x3)) ** (2 * m + 1)
    if w.is_zero():
        raise NotProportional("wedge vanished identically")
    quotient = exact_div(w, sign_gen)
    if quotient is None or set(quotient.terms) != {(0, 0, 0)}:
        raise NotProportional("wedge is not a scalar multiple of the sign generator")
    return quotient.terms[(0, 0, 0)]


# ---------------------------------------------------------------------------
# divergence window for the characteristic-p Hilbert series


@dataclass
class DivergenceWitness:
    n: int
    m: int
    p: int
    satisfied: bool
    witnesses: list[tuple[int, int]]


def divergence_condition(n: int, m: int, p: int) -> DivergenceWitness:
    """Existence of integers a >= 1, k >= 0 with

        (m n (n-2) + C(n,2)) / (n (n-2) k + C(n,2) - 1) <= p^a <= m n / (n k + 1),

    evaluated purely in cross-multiplied integer arithmetic.
    """
    c2 = comb(n, 2)
    witnesses = []
    pa = p
    a = 1
    while pa <= m * n:
        k = 0
        while pa * (n * k + 1) <= m * n:
            lo_num = m * n * (n - 2) + c2
            lo_den = n * (n - 2) * k + c2 - 1
            if lo_num <= pa * lo_den:
                witnesses.append((a, k))
            k += 1
        a += 1
        pa *= p
    return DivergenceWitness(n, m, p, bool(witnesses), witnesses)


def predicted_charp_numerator(m: int, p: int) -> list[tuple[int, int]]:
    """Conjectured numerator of the characteristic-p Hilbert series (n = 3).

    Picks the witness with a as large as possible; when no witness exists the
    characteristic-0 numerator is returned.
    """
    wit = divergence_condition(3, m, p)
    if not wit.satisfied:
        if m == 0:
            return [(0, 1), (1, 2), (2, 2), (3, 1)]
        return [(0, 1), (3 * m + 1, 2), (3 * m + 2, 2), (6 * m + 3, 1)]
    a, k = max(wit.witnesses)
    pa = p**a
    d1 = pa * (3 * k + 1) if pa * (2 * k + 1) >= 2 * m + 1 else pa * (3 * k + 2)
    terms = {0: 1, 6 * m + 3: 1}
    terms[d1] = terms.get(d1, 0) + 2
    terms[6 * m + 3 - d1] = terms.get(6 * m + 3 - d1, 0) + 2
    return sorted(terms.items())


def differing_primes(chain: GeneratorChain, prime_bound: int) -> set[int]:
    """Primes 3 < p <= prime_bound dividing the wedge scalar at this level."""
    c = chain_wedge_scalar(chain)
    out = set()
    for p in primes_up_to(prime_bound):
        if p > 3 and c % p == 0:
            out.add(p)
    return out


def sweep_record(chain: GeneratorChain, prime_bound: int) -> dict:
    """One JSON-ready record of the wedge scalar / divergence-window comparison."""
    m = chain.m
    c = chain_wedge_scalar(chain)
    bound = max(prime_bound, 3 * m, 5)
    factors_gt3 = sorted(p for p in primes_up_to(bound) if p > 3 and c % p == 0)
    predicted = sorted(p for p in primes_up_to(bound)
                       if p > 3 and divergence_condition(3, m, p).satisfied)
    # strip 2, 3 and everything found, then report whatever survives
    rest = abs(c)
    for p in [2, 3] + factors_gt3:
        while rest % p == 0:
            rest //= p
    unfactored = {}
    if rest > 1:
        small, cof = trial_division(rest, 10_000)
        unfactored = {"factors": {str(k): v for k, v in small.items()},
                      "cofactor": str(cof)}
    record = {
        "schema": 1,
        "m": m,
        "c": str(c),
        "prime_factors_gt3": factors_gt3,
        "predicted_primes": predicted,
        "agree": factors_gt3 == predicted and rest == 1,
    }
    if unfactored:
        record["beyond_bound"] = unfactored
    return record
