"""Generalized Laguerre polynomials, Casorati determinants, and the rational
solutions they generate for the scalar dP-II recurrence.

Everything is exact: Laguerre values are Fractions, determinants are done
fraction-free (Bareiss on the denominator-cleared integer matrix), and the
reduction onto P1(F_p) happens only at the very end of each computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NonIntegralParameterError, ZeroTauDenominatorError
from .padic import FpProj, check_odd_prime, reduce_proj, vp


def binom_int(m: int, j: int) -> int:
    """Binomial with arbitrary integer upper index via falling factorials.

    binom(m, j) = m (m-1) ... (m-j+1) / j!, zero for j < 0.  For negative m
    this is the standard total extension and keeps Laguerre values
    polynomial identities in the superscript.
    """
    if j < 0:
        return 0
    num = 1
    for i in range(j):
        num *= m - i
    return num // math.factorial(j)


@lru_cache(maxsize=None)
def laguerre(k: int, nu: int, lam: Fraction) -> Fraction:
    """L_k with superscript nu at lam: sum over r of
    (-1)**r * binom(k + nu, k - r) * lam**r / r!, and 0 for k < 0."""
    if k < 0:
        return Fraction(0)
    lam = Fraction(lam)
    total = Fraction(0)
    term_pow = Fraction(1)
    for r in range(k + 1):
        total += (-1) ** r * binom_int(k + nu, k - r) * term_pow / math.factorial(r)
        term_pow *= lam
    return total


def _bareiss_int(mat: list) -> int:
    """Fraction-free determinant of a square integer matrix."""
    n = len(mat)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if mat[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if mat[i][k]), None)
            if pivot is None:
                return 0
            mat[k], mat[pivot] = mat[pivot], mat[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
            mat[i][k] = 0
        prev = mat[k][k]
    return sign * mat[n - 1][n - 1]


def det_fraction_free(rows: list) -> Fraction:
    """Exact determinant of a matrix of Fractions.

    Each row is scaled by the lcm of its denominators so Bareiss runs on
    integers; the determinant is divided back out at the end.
    """
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = 1
    mat = []
    for row in rows:
        row = [Fraction(x) for x in row]
        m = math.lcm(*(x.denominator for x in row))
        scale *= m
        mat.append([int(x * m) for x in row])
    return Fraction(_bareiss_int(mat), scale)


@lru_cache(maxsize=None)
def tau_det(N: int, n: int, lam: Fraction) -> Fraction:
    """The N x N Casorati determinant with (i, j) entry L_{N-2i+j} at
    superscript n (0-indexed rows and columns)."""
    if N < 1:
        raise ValueError("N must be a positive integer")
    lam = Fraction(lam)
    rows = [[laguerre(N - 2 * i + j, n, lam) for j in range(N)]
            for i in range(N)]
    return det_fraction_free(rows)


@dataclass(frozen=True)
class TauParams:
    """Solution family index N >= 1 and nonzero rational lambda.

    The induced recurrence parameters are a = -2(N+1)/lambda and
    delta = z0 = 2/lambda.
    """

    N: int
    lam: Fraction

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        object.__setattr__(self, "lam", Fraction(self.lam))
        if self.lam == 0:
            raise ValueError("lambda must be nonzero")

    @property
    def a(self) -> Fraction:
        return Fraction(-2 * (self.N + 1)) / self.lam

    @property
    def delta(self) -> Fraction:
        return Fraction(2) / self.lam

    @property
    def z0(self) -> Fraction:
        return Fraction(2) / self.lam


def rational_u(n: int, params: TauParams) -> Fraction:
    """The explicit solution value

        u_n = tau_{N+1}^{n+1} tau_N^{n-1} / (tau_{N+1}^n tau_N^n) - 1

    over Q.  An exact zero in the denominator product is an error; it is a
    different phenomenon from a denominator that merely reduces to zero."""
    N, lam = params.N, params.lam
    den = tau_det(N + 1, n, lam) * tau_det(N, n, lam)
    if den == 0:
        raise ZeroTauDenominatorError(
            f"tau_{N + 1}^{n} * tau_{N}^{n} = 0 over Q; u_{n} undefined")
    num = tau_det(N + 1, n + 1, lam) * tau_det(N, n - 1, lam)
    return num / den - 1


@dataclass(frozen=True)
class TauCondition:
    """Diagnostics for the two reduction conditions.

    ``product_diag`` reduces tau_{N+1}^{-N-1} tau_N^{-N-3} and must be
    nonzero; ``ratio_diag`` reduces the shifted ratio and must differ
    from 2.  Superscripts are taken modulo p before evaluating."""

    product_nonzero: bool
    ratio_not_two: bool
    product_diag: FpProj
    ratio_diag: FpProj

    @property
    def satisfied(self) -> bool:
        return self.product_nonzero and self.ratio_not_two


def taucond(params: TauParams, p: int) -> TauCondition:
    check_odd_prime(p)
    N, lam = params.N, params.lam
    s1 = (-N - 1) % p
    s2 = (-N - 3) % p
    product = tau_det(N + 1, s1, lam) * tau_det(N, s2, lam)
    product_diag = reduce_proj(product, p)

    den = tau_det(N + 1, N % p, lam) * tau_det(N, N % p, lam)
    if den == 0:
        raise ZeroTauDenominatorError("condition ratio undefined over Q")
    ratio = tau_det(N + 1, (N + 1) % p, lam) * tau_det(N, (N - 1) % p, lam) / den
    ratio_diag = reduce_proj(ratio, p)

    product_nonzero = product_diag.is_infinity or product_diag.residue != 0
    ratio_not_two = ratio_diag.is_infinity or ratio_diag.residue != 2 % p
    return TauCondition(product_nonzero=product_nonzero,
                        ratio_not_two=ratio_not_two,
                        product_diag=product_diag,
                        ratio_diag=ratio_diag)


def reduced_solution(params: TauParams, p: int, count: int) -> list:
    """Projective reductions of u_1 .. u_count."""
    check_odd_prime(p)
    if vp(params.lam, p) != 0:
        raise NonIntegralParameterError(
            f"lambda = {params.lam} must be a unit at p = {p} for reduction")
    if count < 1:
        return []
    return [reduce_proj(rational_u(n, params), p) for n in range(1, count + 1)]
