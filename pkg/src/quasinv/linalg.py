"""Exact nullspace kernels.

Three elimination backends cover the coefficient domains:

* vectorized row reduction mod p (numpy) for prime fields and as the modular
  engine behind the certified rational kernel,
* fraction-free Bareiss elimination over an integral domain (integers or
  integer polynomials in q) with field back-substitution,
* plain Gauss-Jordan over an arbitrary exact field (cyclotomic residues).

Every backend returns the kernel basis derived from the reduced row echelon
form, which is unique, so results are deterministic and independent of the
backend chosen.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from . import qpoly
from .intfactor import is_prime

# ---------------------------------------------------------------------------
# mod-p engine


def rref_mod_p(rows, p: int, ncols: int):
    """Reduced row echelon form mod p; returns (matrix, pivot column list).

    Entries of `rows` may be arbitrary Python ints; they are reduced mod p
    first.  p must stay below 2^25 so products fit comfortably in int64.
    """
    if p >= 1 << 25:
        raise ValueError("modulus too large for the int64 elimination engine")
    if not rows:
        return np.zeros((0, ncols), dtype=np.int64), []
    a = np.array([[x % p for x in row] for row in rows], dtype=np.int64)
    nrows = a.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def nullspace_mod_p(rows, p: int, ncols: int) -> list[list[int]]:
    r, pivots = rref_mod_p(rows, p, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-int(r[i, f])) % p
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# ring / field adapters for the generic backends


class IntRing:
    zero, one = 0, 1

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def divexact(a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("inexact integer division in elimination")
        return q

    @staticmethod
    def to_field(a):
        return Fraction(a)

    field_zero = Fraction(0)
    field_one = Fraction(1)

    @staticmethod
    def f_is_zero(a):
        return a == 0

    @staticmethod
    def f_sub(a, b):
        return a - b

    @staticmethod
    def f_mul(a, b):
        return a * b

    @staticmethod
    def f_div(a, b):
        return a / b


class QPolyRing:
    zero, one = qpoly.ZERO, qpoly.ONE

    @staticmethod
    def is_zero(a):
        return not a

    @staticmethod
    def mul(a, b):
        return qpoly.mul(a, b)

    @staticmethod
    def sub(a, b):
        return qpoly.sub(a, b)

    @staticmethod
    def divexact(a, b):
        return qpoly.divexact(a, b)

    @staticmethod
    def to_field(a):
        return qpoly.QFrac(a)

    field_zero = qpoly.QF_ZERO
    field_one = qpoly.QF_ONE

    @staticmethod
    def f_is_zero(a):
        return a.is_zero

    @staticmethod
    def f_sub(a, b):
        return a - b

    @staticmethod
    def f_mul(a, b):
        return a * b

    @staticmethod
    def f_div(a, b):
        return a / b


# ---------------------------------------------------------------------------
# fraction-free Bareiss elimination over an integral domain


def bareiss_echelon(rows, ring):
    """Fraction-free row echelon form; returns (echelon rows, pivot columns).

    All divisions are exact in the ring (one-step Bareiss), so entries stay
    minor-sized; works over Z and Z[q].
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    prev = ring.one
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if not ring.is_zero(m[i][c])), None)
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            row_i = m[i]
            row_r = m[r]
            if ring.is_zero(mic):
                # rows outside the pivot column still pick up the piv/prev scaling
                for j in range(c + 1, ncols):
                    if not ring.is_zero(row_i[j]):
                        row_i[j] = ring.divexact(ring.mul(piv, row_i[j]), prev)
            else:
                for j in range(c + 1, ncols):
                    v = ring.sub(ring.mul(piv, row_i[j]), ring.mul(mic, row_r[j]))
                    row_i[j] = ring.divexact(v, prev) if not ring.is_zero(v) else ring.zero
                row_i[c] = ring.zero
        prev = piv
        pivots.append(c)
        r += 1
    return m[: len(pivots)], pivots


def kernel_from_echelon(ech, pivots, ncols, ring):
    """Canonical kernel basis (free coordinate 1) via back substitution in the
    ring's fraction field."""
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = {f: ring.field_one}
        for i in range(len(pivots) - 1, -1, -1):
            c = pivots[i]
            row = ech[i]
            s = ring.field_zero
            for j, xv in x.items():
                if j > c and not ring.is_zero(row[j]):
                    s = ring.f_sub(s, ring.f_mul(ring.to_field(row[j]), xv))
            if not ring.f_is_zero(s):
                x[c] = ring.f_div(s, ring.to_field(row[c]))
        v = [ring.field_zero] * ncols
        for j, xv in x.items():
            v[j] = xv
        basis.append(v)
    return basis


def nullspace_ring(rows, ncols, ring) -> list[list]:
    if not rows:
        ident = []
        for f in range(ncols):
            v = [ring.field_zero] * ncols
            v[f] = ring.field_one
            ident.append(v)
        return ident
    ech, pivots = bareiss_echelon(rows, ring)
    return kernel_from_echelon(ech, pivots, ncols, ring)


# ---------------------------------------------------------------------------
# generic field Gauss-Jordan (FieldOps duck type: domain objects from coeffs)


def rref_field(rows, ncols, dom):
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if not dom.is_zero(m[i][c])), None)
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
        inv = dom.inv(m[r][c])
        m[r] = [dom.mul(inv, x) for x in m[r]]
        for i in range(nrows):
            if i == r or dom.is_zero(m[i][c]):
                continue
            f = m[i][c]
            m[i] = [dom.sub(x, dom.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[: len(pivots)], pivots


def nullspace_field(rows, ncols, dom) -> list[list]:
    if not rows:
        out = []
        for f in range(ncols):
            v = [dom.zero] * ncols
            v[f] = dom.one
            out.append(v)
        return out
    r, pivots = rref_field(rows, ncols, dom)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        v = [dom.zero] * ncols
        v[f] = dom.one
        for i, c in enumerate(pivots):
            v[c] = dom.neg(r[i][f])
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# certified rational kernel of an integer matrix
#
# Strategy: reduce mod a deterministic sequence of 24-bit primes, RREF with
# numpy, CRT-combine the echelon entries, rationally reconstruct, and verify
# M v = 0 in exact integer arithmetic.  rank_Q >= rank_{F_p} always, so the
# verified vectors together with the mod-p rank certify the kernel exactly.
# Bad primes (rank drop or pivot shift) fail verification and are discarded.


def _prime_stream():
    n = (1 << 24) - 1
    while n > 1 << 23:
        if is_prime(n):
            yield n
        n -= 2


def _rat_reconstruct(a: int, m: int):
    """Rational n/d = a mod m with |n|, d <= sqrt(m/2), or None."""
    a %= m
    if a == 0:
        return Fraction(0)
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r1 == 0 or abs(s1) > bound or gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def nullspace_int(rows, ncols: int) -> list[list[Fraction]]:
    """Canonical RREF kernel basis of an integer matrix over Q (exact)."""
    rows = [r for r in rows if any(r)]
    if not rows:
        out = []
        for f in range(ncols):
            v = [Fraction(0)] * ncols
            v[f] = Fraction(1)
            out.append(v)
        return out
    if ncols <= 48:
        return nullspace_ring(rows, ncols, IntRing)
    return _nullspace_int_modular(rows, ncols)


def _verify_kernel(rows, vectors) -> bool:
    for v in vectors:
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        iv = [int(x * den) for x in v]
        nz = [(j, x) for j, x in enumerate(iv) if x]
        for row in rows:
            if sum(row[j] * x for j, x in nz):
                return False
    return True


class _CrtPattern:
    """CRT accumulator for one observed (rank, pivot columns) echelon pattern."""

    def __init__(self, pivots, ncols):
        self.pivots = pivots
        self.free = [c for c in range(ncols) if c not in set(pivots)]
        self.residues = None
        self.modulus = 1
        self.used = 0
        self.next_try = 1

    def absorb(self, r, p):
        block = [[int(r[i, f]) for f in self.free] for i in range(len(self.pivots))]
        if self.residues is None:
            self.residues = block
            self.modulus = p
        else:
            inv = pow(self.modulus % p, -1, p)
            new_mod = self.modulus * p
            for row, bi in zip(self.residues, block):
                for k, x in enumerate(row):
                    delta = (bi[k] - x) % p
                    row[k] = (x + self.modulus * (delta * inv % p)) % new_mod
            self.modulus = new_mod
        self.used += 1

    def reconstruct(self, ncols):
        recon = []
        for row in self.residues:
            rr = []
            for x in row:
                f = _rat_reconstruct(x, self.modulus)
                if f is None:
                    return None
                rr.append(f)
            recon.append(rr)
        vectors = []
        for k, f in enumerate(self.free):
            v = [Fraction(0)] * ncols
            v[f] = Fraction(1)
            for i, c in enumerate(self.pivots):
                v[c] = -recon[i][k]
            vectors.append(v)
        return vectors


def _nullspace_int_modular(rows, ncols):
    # All but finitely many primes land on the true rational echelon pattern;
    # a bad prime (rank drop or pivot shift) accumulates in its own pattern
    # and can never pass exact verification, so it is eventually outvoted.
    best_rank = -1
    patterns: dict[tuple, _CrtPattern] = {}
    for p in _prime_stream():
        r, pivots = rref_mod_p(rows, p, ncols)
        rank = len(pivots)
        if rank < best_rank:
            continue
        if rank > best_rank:
            best_rank = rank
            patterns = {}
        key = tuple(pivots)
        pat = patterns.get(key)
        if pat is None:
            pat = patterns[key] = _CrtPattern(pivots, ncols)
        pat.absorb(r, p)
        if pat.used < pat.next_try:
            continue
        pat.next_try *= 2
        vectors = pat.reconstruct(ncols)
        if vectors is not None and _verify_kernel(rows, vectors):
            return vectors
    raise ArithmeticError("modular kernel did not converge")  # pragma: no cover


def rank_int(rows, ncols: int) -> int:
    """Certified rank of an integer matrix over Q."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return ncols - len(nullspace_int(rows, ncols))
