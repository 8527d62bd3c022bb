"""The degree-preserving shift operator on three-variable quasi-invariants.

The operator is hard-coded in its explicit differential form; an independent
oracle builds it from the defining Dunkl-operator composition, which is only
valid on symmetric inputs and is used to cross-check the explicit form.
The rational-function terms are summed over the common denominator
(x1-x2)(x1-x3)(x2-x3) and the numerator must divide exactly; a residue means
the input was not quasi-invariant at the previous level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeffs import rational
from .errors import DenominatorResidue, NotProportional, ZeroInput
from .generators import GeneratorChain
from .poly import Poly, elementary_invariants, exact_div, permute, transposition
from .quasi import is_quasi_invariant

_CYCLES = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]


def _variables(dom):
    return [Poly.variable(dom, 3, i) for i in range(3)]


def opdam_apply(m: int, P: Poly, check: bool = True) -> Poly:
    """Apply the level-m shift operator to a quasi-invariant of level m-1.

    check=True re-verifies the membership precondition first; the rational
    part raises DenominatorResidue either way if the cancellation fails,
    which doubles as a quasi-invariance refutation.
    """
    dom = P.domain
    if check and not is_quasi_invariant(P, m - 1):
        raise DenominatorResidue(f"input is not quasi-invariant at level {m - 1}")
    x = _variables(dom)
    delta = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2])

    def ddiff(Q, i, j):
        return Q.derivative(i) - Q.derivative(j)

    out = delta * ddiff(ddiff(ddiff(P, 0, 1), 0, 2), 1, 2)
    const = 6 * (1 - 2 * m) * (1 - 3 * m) * (2 - 3 * m)
    out = out + P.scale(dom.from_int(const))

    num = Poly.zero(dom, 3)
    for i, j, k in _CYCLES:
        gij = ddiff(P, i, j)
        g2 = ddiff(gij, i, j)
        quad = ((x[i] - x[k]) * (x[j] - x[k])).scale(dom.from_int(3 * m - 2)) \
            + ((x[i] - x[j]) ** 2).scale(dom.from_int(1 - 2 * m))
        out = out + quad * g2
        out = out + ((x[i] - x[j]) * gij).scale(dom.from_int(6 - 22 * m + 20 * m * m))
        # [ (x_j-x_k)^2/(x_k-x_i) - (x_i-x_k)^2/(x_k-x_j) ] over the common
        # denominator (x_k-x_i)(x_k-x_j) has numerator (x_i-x_k)^3 - (x_j-x_k)^3
        bracket = (x[i] - x[k]) ** 3 - (x[j] - x[k]) ** 3
        lift = exact_div(delta, (x[k] - x[i]) * (x[k] - x[j]))
        num = num + (bracket * lift * gij).scale(dom.from_int(4 * m * (m - 1)))
    rational_part = exact_div(num, delta)
    if rational_part is None:
        raise DenominatorResidue(
            "rational terms of the shift operator leave a nonzero residue")
    return out + rational_part


def dunkl_apply(i: int, kparam: int, P: Poly) -> Poly:
    """Dunkl operator: d/dx_i minus kparam times the divided-difference terms."""
    dom = P.domain
    x = _variables(dom)
    out = P.derivative(i)
    for j in range(3):
        if j == i:
            continue
        divided = exact_div(P - permute(transposition(3, i, j), P), x[i] - x[j])
        out = out - divided.scale(dom.from_int(kparam))
    return out


def opdam_via_dunkl(m: int, P: Poly) -> Poly:
    """Defining composition: multiply by the Vandermonde, then apply all
    Dunkl-operator differences.  Agrees with opdam_apply on symmetric P."""
    dom = P.domain
    x = _variables(dom)
    out = (x[0] - x[1]) * (x[0] - x[2]) * (x[1] - x[2]) * P
    for i, j in [(1, 2), (0, 2), (0, 1)]:
        out = dunkl_apply(i, m, out) - dunkl_apply(j, m, out)
    return out


# ---------------------------------------------------------------------------
# scalar chains a_m, b_m, d_m, e_m


@dataclass
class ScalarChainEntry:
    m: int
    a: Fraction  # shift(P3 A_m) / A_{m+1}
    b: Fraction  # shift(P3 B_m) / B_{m+1}
    d: Fraction  # shift(P2 B_m) / A_{m+1}
    e: Fraction  # shift(P2^2 A_m) / B_{m+1}


def proportionality_ratio(image: Poly, target: Poly) -> Fraction:
    """image = c * target exactly; zero image gives c = 0."""
    if image.is_zero():
        return Fraction(0)
    ie, ic = image.leading_term()
    te, tc = target.leading_term()
    if ie != te:
        raise NotProportional("leading monomials disagree")
    c = ic / tc
    if image != target.scale(c):
        raise NotProportional("image is not a scalar multiple of the target")
    return c


def scalar_chain_entry(chain_m: GeneratorChain, chain_m1: GeneratorChain) -> ScalarChainEntry:
    dom = rational()
    p2, p3 = elementary_invariants(dom)
    a_m, b_m = chain_m.A(dom), chain_m.B(dom)
    a_m1, b_m1 = chain_m1.A(dom), chain_m1.B(dom)
    lvl = chain_m.m + 1
    a = proportionality_ratio(opdam_apply(lvl, p3 * a_m, check=False), a_m1)
    b = proportionality_ratio(opdam_apply(lvl, p3 * b_m, check=False), b_m1)
    d = proportionality_ratio(opdam_apply(lvl, p2 * b_m, check=False), a_m1)
    e = proportionality_ratio(opdam_apply(lvl, p2 * p2 * a_m, check=False), b_m1)
    return ScalarChainEntry(chain_m.m, a, b, d, e)


def valuation_profile(x, p: int) -> int:
    """Exact p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("valuation of zero")
    v = 0
    num, den = abs(x.numerator), x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def congruence_predicate(m: int, p: int, which: str):
    """Predicted p-adic valuation of one chain scalar from the residue rules.

    Returns None when the prediction is infinite (the scalar vanishes):
    m = 1 for the 'a' rule and m = 2 for the 'b' rule match every power p^k.
    Finite matches force p^k <= 3m+3, so the enumeration stops there.
    """
    if which == "a" and m == 1:
        return None
    if which == "b" and m == 2:
        return None
    count = 0
    pk = p
    while pk <= 3 * m + 3:
        if which == "a":
            hit = m % pk in (1 % pk, 2 * (pk // 3) % pk)
        elif which == "b":
            hit = m % pk in (2 % pk, (2 * (pk // 3) - 1) % pk)
        elif which == "d":
            hit = pk % 6 == 5 and m % pk in ((2 * pk - 4) // 3, (2 * pk - 1) // 3)
        elif which == "e":
            hit = pk % 6 == 1 and m % pk in ((2 * pk - 5) // 3, (2 * pk - 2) // 3)
        else:
            raise ValueError(f"unknown scalar label {which!r}")
        if hit:
            count += 1
        pk *= p
    return count


def strip_23(x) -> Fraction:
    """Remove all factors of 2 and 3 plus the sign."""
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    num, den = abs(x.numerator), x.denominator
    for f in (2, 3):
        while num % f == 0:
            num //= f
        while den % f == 0:
            den //= f
    return Fraction(num, den)


def relation_check(entry: ScalarChainEntry, c_m: int, c_m1: int) -> dict:
    """The two product relations tying the scalars to consecutive wedge
    scalars, compared after 2,3-stripping:

        a b c'  ~  (m-1)(m-2)(3m+1)(3m+2) c
        d e c'  ~  (3m+1)(3m+2) c
    """
    m = entry.m
    lhs1 = entry.a * entry.b * c_m1
    rhs1 = Fraction((m - 1) * (m - 2) * (3 * m + 1) * (3 * m + 2) * c_m)
    lhs2 = entry.d * entry.e * c_m1
    rhs2 = Fraction((3 * m + 1) * (3 * m + 2) * c_m)
    return {
        "m": m,
        "ab_relation": strip_23(lhs1) == strip_23(rhs1),
        "de_relation": strip_23(lhs2) == strip_23(rhs2),
        "ab_sides": [str(lhs1), str(rhs1)],
        "de_sides": [str(lhs2), str(rhs2)],
    }


def shift_verify_report(m_max: int, primes: list[int], chains=None) -> list[dict]:
    """Per-m report of scalar values, observed vs predicted valuations, and
    the product relations; mismatches are recorded as findings, not raised."""
    from .generators import chain_to, chain_wedge_scalar

    if chains is None:
        chains = chain_to(m_max + 1, verify=False)
    records = []
    for m in range(m_max + 1):
        entry = scalar_chain_entry(chains[m], chains[m + 1])
        c_m = chain_wedge_scalar(chains[m])
        c_m1 = chain_wedge_scalar(chains[m + 1])
        valuations = {}
        findings = []
        for p in primes:
            per_scalar = {}
            for label, value in (("a", entry.a), ("b", entry.b),
                                 ("d", entry.d), ("e", entry.e)):
                predicted = congruence_predicate(m, p, label)
                if value == 0:
                    observed = None
                else:
                    observed = valuation_profile(value, p)
                per_scalar[label] = {"observed": observed, "predicted": predicted}
                if observed != predicted:
                    findings.append({"m": m, "p": p, "scalar": label,
                                     "observed": observed, "predicted": predicted})
            valuations[str(p)] = per_scalar
        relations = relation_check(entry, c_m, c_m1)
        if not relations["ab_relation"]:
            findings.append({"m": m, "relation": "ab"})
        if not relations["de_relation"]:
            findings.append({"m": m, "relation": "de"})
        records.append({
            "schema": 1,
            "m": m,
            "scalars": {"a": str(entry.a), "b": str(entry.b),
                        "d": str(entry.d), "e": str(entry.e)},
            "c": str(c_m),
            "valuations": valuations,
            "relations": {"ab": relations["ab_relation"], "de": relations["de_relation"]},
            "findings": findings,
        })
    return records
