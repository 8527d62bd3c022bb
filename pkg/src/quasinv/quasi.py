"""Graded components of quasi-invariant spaces as exact nullspaces.

A degree-d component is cut out of the full space of degree-d polynomials by
linear conditions: for every transposition swapping x_i and x_j, the
antisymmetrized polynomial must vanish to order 2m+1 along x_i = x_j (or be
divisible by the q-deformed product in a q-carrying domain).  The conditions
are assembled into one matrix per degree and the kernel is computed exactly;
the basis is the one derived from the reduced row echelon form, so it is
identical across runs, thread counts, and elimination backends.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, gcd

from . import linalg, qpoly
from .coeffs import CYCLOTOMIC, FORMAL_Q, PRIME_FIELD, RATIONAL, DomainSpec, make_domain
from .errors import BadCharacteristic, TheoremViolation
from .poly import (Poly, SIGN, STD, TRIV, divisibility_order, isotypic_project,
                   monomials_of_degree, permute, q_divisibility_test, q_divisor,
                   reduce_eliminating, transposition, transposition_pairs)


def check_nonmodular(n: int, domain) -> None:
    p = domain.characteristic
    if p and p <= n:
        raise BadCharacteristic(
            f"characteristic {p} divides {n}!; quasi-invariant theory here needs p > {n}")


def ordinary_constraint_rows(n: int, m: int, d: int):
    """Integer constraint matrix for the undeformed space.

    The antisymmetrized polynomial (1 - s_ij)P is odd under s_ij, so its
    expansion in u = x_i - x_j has even coefficients forced by the odd ones
    (char != 2); only odd vanishing orders below 2m+1 contribute rows.
    """
    monos = monomials_of_degree(n, d)
    rows: dict[tuple, dict[int, int]] = {}
    for i, j in transposition_pairs(n):
        for col, mo in enumerate(monos):
            a, b = mo[i], mo[j]
            if a == b:
                continue
            rest = tuple(mo[t] for t in range(n) if t != i and t != j)
            for k in range(1, 2 * m, 2):
                coef = comb(a, k) - comb(b, k)
                if coef == 0:
                    continue
                key = (i, j, k, a + b - k, rest)
                rows.setdefault(key, {})[col] = coef
    dense = set()
    for row in rows.values():
        dense.add(tuple(row.get(c, 0) for c in range(len(monos))))
    return sorted(dense, reverse=True), monos


def q_constraint_rows(n: int, m: int, d: int, domain):
    """Constraint matrix for the q-deformed space over a q-carrying domain.

    Rows are the coefficients of the remainder of (1 - s_ij)P under division
    by prod_k (x_i - q^k x_j), eliminating x_i.
    """
    monos = monomials_of_degree(n, d)
    rows: dict[tuple, dict[int, object]] = {}
    for i, j in transposition_pairs(n):
        divisor = q_divisor(domain, n, i, j, m)
        sigma = transposition(n, i, j)
        for col, mo in enumerate(monos):
            if mo[i] == mo[j]:
                continue
            swapped = tuple(mo[sigma[t]] for t in range(n))
            t_poly = Poly(domain, n, {mo: domain.one, swapped: domain.neg(domain.one)})
            rem = reduce_eliminating(t_poly, divisor, i)
            for exps, c in rem.terms.items():
                key = (i, j, exps)
                row = rows.setdefault(key, {})
                row[col] = domain.add(row.get(col, domain.zero), c)
    out = []
    for key in sorted(rows):
        row = rows[key]
        vec = [row.get(c, domain.zero) for c in range(len(monos))]
        if any(not domain.is_zero(x) for x in vec):
            out.append(vec)
    return out, monos


def _clear_qfrac_row(vec):
    """Scale a QFrac row to a primitive integer-polynomial row."""
    den = qpoly.ONE
    for x in vec:
        den = qpoly.primitive(qpoly.divexact(qpoly.mul(den, x.den), qpoly.gcd(den, x.den)))
    cleared = [qpoly.mul(x.num, qpoly.divexact(den, x.den)) for x in vec]
    g = qpoly.ZERO
    for x in cleared:
        g = qpoly.gcd(g, x)
        if qpoly.degree(g) == 0 and abs(qpoly.lc(g)) == 1:
            return tuple(cleared)
    return tuple(qpoly.divexact(x, g) if x else qpoly.ZERO for x in cleared)


def quasi_basis(n: int, m: int, d: int, domain, q_deformed: bool = False) -> list[Poly]:
    """Deterministic echelon basis of the degree-d component."""
    check_nonmodular(n, domain)
    if d < 0:
        return []
    kind = domain.spec.kind
    if q_deformed and kind in (CYCLOTOMIC, FORMAL_Q):
        rows, monos = q_constraint_rows(n, m, d, domain)
        if kind == CYCLOTOMIC:
            vectors = linalg.nullspace_field(rows, len(monos), domain)
        else:
            int_rows = [_clear_qfrac_row(r) for r in rows]
            vectors = linalg.nullspace_ring(int_rows, len(monos), linalg.QPolyRing)
    else:
        rows, monos = ordinary_constraint_rows(n, m, d)
        if kind == PRIME_FIELD:
            vectors = linalg.nullspace_mod_p(rows, domain.p, len(monos))
        else:
            rational_vectors = linalg.nullspace_int(rows, len(monos))
            if kind == RATIONAL:
                vectors = rational_vectors
            else:
                vectors = [[domain.from_fraction(x) for x in v] for v in rational_vectors]
    basis = []
    for v in vectors:
        terms = {monos[c]: x for c, x in enumerate(v) if not domain.is_zero(x)}
        basis.append(Poly(domain, n, terms))
    return basis


def quasi_dimension(n: int, m: int, d: int, domain, q_deformed: bool = False) -> int:
    return len(quasi_basis(n, m, d, domain, q_deformed))


def is_quasi_invariant(P: Poly, m: int, q_deformed: bool = False) -> bool:
    """Direct membership test via the defining divisibility conditions."""
    for i, j in transposition_pairs(P.n):
        t = P - permute(transposition(P.n, i, j), P)
        if q_deformed:
            if not q_divisibility_test(t, i, j, m):
                return False
        else:
            if divisibility_order(t, i, j) < 2 * m + 1:
                return False
    return True


@dataclass
class HilbertData:
    """Graded dimensions with the numerator over prod_{d=1}^{n} (1 - t^d)."""

    n: int
    m: int
    spec: DomainSpec
    q_deformed: bool
    dims: list[int]
    numerator: list[tuple[int, int]]
    denominator_degrees: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.denominator_degrees:
            self.denominator_degrees = list(range(1, self.n + 1))

    @property
    def d_max(self) -> int:
        return len(self.dims) - 1

    @property
    def has_negative_numerator(self) -> bool:
        # surface for the free-module conjecture: reported, never asserted
        return any(c < 0 for _, c in self.numerator)

    def is_palindromic(self, top: int) -> bool:
        coeffs = dict(self.numerator)
        return all(coeffs.get(top - e, 0) == c for e, c in coeffs.items())

    def to_json(self):
        return {
            "schema": 1,
            "n": self.n,
            "m": self.m,
            "domain": self.spec.to_json(),
            "q_deformed": self.q_deformed,
            "dims": self.dims,
            "numerator": [[e, c] for e, c in self.numerator],
            "denominator_degrees": self.denominator_degrees,
        }


def denominator_poly(n: int, upto: int) -> list[int]:
    out = [1]
    for k in range(1, n + 1):
        nxt = out + [0] * min(k, upto + 1 - len(out))
        for idx in range(len(out)):
            if idx + k < len(nxt):
                nxt[idx + k] -= out[idx]
        out = nxt[: upto + 1]
    return out


def numerator_from_dims(dims: list[int], n: int) -> list[tuple[int, int]]:
    den = denominator_poly(n, len(dims) - 1)
    out = []
    for e in range(len(dims)):
        c = sum(den[k] * dims[e - k] for k in range(min(e, len(den) - 1) + 1))
        if c:
            out.append((e, c))
    return out


def dims_from_numerator(numerator, n: int, d_max: int) -> list[int]:
    """Series expansion of numerator / prod_{k=1}^{n} (1 - t^k), exactly."""
    a = [0] * (d_max + 1)
    for e, c in numerator:
        if e <= d_max:
            a[e] += c
    for k in range(1, n + 1):
        for d in range(k, d_max + 1):
            a[d] += a[d - k]
    return a


def default_dmax(n: int, m: int) -> int:
    # one past the expected top numerator exponent
    return comb(n, 2) * (2 * m + 1) + 1


def _dim_task(args) -> int:
    n, m, d, spec, q_deformed = args
    return quasi_dimension(n, m, d, make_domain(spec), q_deformed)


def worker_count(explicit=None) -> int:
    if explicit is not None:
        return max(1, int(explicit))
    env = os.environ.get("QUASINV_THREADS")
    return max(1, int(env)) if env else 1


def hilbert_data(n: int, m: int, domain, d_max: int | None = None,
                 q_deformed: bool = False, workers: int | None = None) -> HilbertData:
    """Dimensions of every graded component through d_max plus the numerator.

    Degrees are independent, so they may be computed by a worker pool; the
    reduction is keyed by degree and the result does not depend on the pool
    size.
    """
    check_nonmodular(n, domain)
    if d_max is None:
        d_max = default_dmax(n, m)
    nworkers = worker_count(workers)
    degrees = list(range(d_max + 1))
    if nworkers > 1 and len(degrees) > 1:
        tasks = [(n, m, d, domain.spec, q_deformed) for d in degrees]
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            dims = list(pool.map(_dim_task, tasks))
    else:
        dims = [quasi_dimension(n, m, d, domain, q_deformed) for d in degrees]
    return HilbertData(n, m, domain.spec, q_deformed, dims, numerator_from_dims(dims, n))


def isotypic_dimension(n: int, m: int, d: int, domain, label: str,
                       q_deformed: bool = False) -> int:
    """Dimension of one isotypic slice of the degree-d component."""
    if n > 3:
        raise ValueError("isotypic slices are provided for n <= 3 only")
    basis = quasi_basis(n, m, d, domain, q_deformed)
    if not basis:
        return 0
    projected = [isotypic_project(P, label) for P in basis]
    monos = monomials_of_degree(n, d)
    col = {mo: c for c, mo in enumerate(monos)}
    kind = domain.spec.kind
    rows = []
    for P in projected:
        if P.is_zero():
            continue
        vec = [domain.zero] * len(monos)
        for e, c in P.terms.items():
            vec[col[e]] = c
        rows.append(vec)
    if not rows:
        return 0
    if kind == PRIME_FIELD:
        _, pivots = linalg.rref_mod_p(rows, domain.p, len(monos))
        return len(pivots)
    if kind == CYCLOTOMIC:
        _, pivots = linalg.rref_field(rows, len(monos), domain)
        return len(pivots)
    if kind == FORMAL_Q:
        int_rows = [_clear_qfrac_row(r) for r in rows]
        _, pivots = linalg.bareiss_echelon(int_rows, linalg.QPolyRing)
        return len(pivots)
    int_rows = []
    for vec in rows:
        den = 1
        for x in vec:
            den = den * x.denominator // gcd(den, x.denominator)
        int_rows.append([int(x * den) for x in vec])
    return linalg.rank_int(int_rows, len(monos))


def sum_of_isotypic_dimensions(n: int, m: int, d: int, domain, q_deformed=False) -> int:
    labels = [TRIV, SIGN, STD] if n == 3 else [TRIV, SIGN]
    return sum(isotypic_dimension(n, m, d, domain, lab, q_deformed) for lab in labels)


def std_generator_degree(m: int, domain, q_deformed: bool = False) -> int:
    """Least degree carrying a 2-dimensional standard component (n = 3).

    The result provably lies in [2m+1, 3m+1]; leaving that window raises
    TheoremViolation since it can only mean an implementation bug.
    """
    check_nonmodular(3, domain)
    for e in range(1, 3 * m + 2):
        if isotypic_dimension(3, m, e, domain, STD, q_deformed) > 0:
            if e < 2 * m + 1:
                raise TheoremViolation(
                    f"standard component found in degree {e} < 2m+1 = {2 * m + 1}")
            return e
    raise TheoremViolation(
        f"no standard component through degree 3m+1 = {3 * m + 1}")


def sign_generator(n: int, m: int, domain, q_deformed: bool = False) -> Poly:
    """Free generator of the sign component: the product of all reflection
    hyperplane factors to the (2m+1)-st order (q-deformed when asked)."""
    if domain.characteristic == 2:
        raise BadCharacteristic("sign component needs characteristic != 2")
    out = Poly.one(domain, n)
    if q_deformed:
        if domain.spec.kind not in (CYCLOTOMIC, FORMAL_Q):
            raise BadCharacteristic("q-deformed generator needs a q-carrying domain")
        for i, j in transposition_pairs(n):
            out = out * q_divisor(domain, n, i, j, m)
        return out
    for i, j in transposition_pairs(n):
        diff = Poly.variable(domain, n, i) - Poly.variable(domain, n, j)
        out = out * diff ** (2 * m + 1)
    return out
