"""Sums of the quadratic character over F_p.

Each closed form has a brute-force twin. With ``verify=True`` (the
default) the two are compared and a :class:`VerificationError` is raised
on disagreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .curves import represent
from .errors import (
    BadParameters,
    DegenerateLinear,
    DegenerateQuadratic,
    DuplicateShifts,
    VerificationError,
    ZeroPolynomial,
)
from .field import PrimeField, legendre

MAX_WEIL_DEGREE = 16


# ---------------------------------------------------------------------------
# linear, quadratic and cubic sums


def linear_sum_brute(a: int, b: int, F: PrimeField) -> int:
    xs = np.arange(F.p, dtype=np.int64)
    return int(F.chi[(a % F.p * xs + b) % F.p].sum(dtype=np.int64))


def linear_sum(a: int, b: int, F: PrimeField, verify: bool = True) -> int:
    """Sum of (ax+b / p) over x in F_p, which is always 0."""
    if a % F.p == 0:
        raise DegenerateLinear(f"p={F.p} divides a={a}")
    total = linear_sum_brute(a, b, F)
    if verify and total != 0:
        raise VerificationError(f"linear sum ({a}, {b}) mod {F.p} = {total}, expected 0")
    return total


def quadratic_sum_closed(a: int, b: int, c: int, F: PrimeField) -> int:
    if a % F.p == 0:
        raise DegenerateQuadratic(f"p={F.p} divides a={a}")
    if (b * b - 4 * a * c) % F.p == 0:
        return (F.p - 1) * legendre(a, F)
    return -legendre(a, F)


def quadratic_sum_brute(a: int, b: int, c: int, F: PrimeField) -> int:
    return kernels.poly_char_sum(F.square_bits, F.p, [c, b, a])


def quadratic_sum(a: int, b: int, c: int, F: PrimeField, verify: bool = True) -> int:
    """Sum of (ax^2+bx+c / p) over x in F_p, in closed form."""
    closed = quadratic_sum_closed(a, b, c, F)
    if verify:
        brute = quadratic_sum_brute(a, b, c, F)
        if brute != closed:
            raise VerificationError(
                f"quadratic sum ({a}, {b}, {c}) mod {F.p}: brute {brute} != closed {closed}"
            )
    return closed


def cubic_sum_brute(F: PrimeField) -> int:
    """Sum of (c^3+1 / p) over nonzero c."""
    return kernels.poly_char_sum(F.square_bits, F.p, [1, 0, 0, 1]) - 1


def cubic_sum_closed(F: PrimeField) -> int:
    if F.p % 3 == 2:
        return -1
    return 2 * represent(F).a - 1


def cubic_sum(F: PrimeField, verify: bool = True) -> int:
    if F.p < 5:
        raise BadParameters("cubic_sum needs p >= 5")
    brute = cubic_sum_brute(F)
    if verify:
        closed = cubic_sum_closed(F)
        if brute != closed:
            raise VerificationError(f"cubic sum mod {F.p}: brute {brute} != closed {closed}")
    return brute


# ---------------------------------------------------------------------------
# sign-pattern counts N(e_1, ..., e_k)


@dataclass(frozen=True)
class PatternSpec:
    shifts: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.shifts) != len(self.signs) or not self.shifts:
            raise BadParameters("shifts and signs must have equal length k >= 1")
        if any(s not in (-1, 1) for s in self.signs):
            raise BadParameters("signs must be +1 or -1")
        if len(set(self.shifts)) != len(self.shifts):
            raise DuplicateShifts(f"shifts {self.shifts} are not distinct")

    @property
    def k(self) -> int:
        return len(self.shifts)


@dataclass(frozen=True)
class DefectReport:
    n_exact: int
    n_main: Fraction
    defect: Fraction


def _shifted_chi(spec: PatternSpec, F: PrimeField) -> np.ndarray:
    shifts = np.array([s % F.p for s in spec.shifts], dtype=np.int64)
    if len(set(shifts.tolist())) != len(shifts):
        raise DuplicateShifts(f"shifts {spec.shifts} collide mod {F.p}")
    c = np.arange(F.p, dtype=np.int64)
    return F.chi[(c[None, :] + shifts[:, None]) % F.p].astype(np.int64)


def pattern_count(spec: PatternSpec, F: PrimeField) -> DefectReport:
    """Count c with chi(c + a_j) == e_j for all j, next to the product-expansion value.

    A value of 0 never matches a sign, so c = -a_j is never counted.
    """
    rows = _shifted_chi(spec, F)
    signs = np.array(spec.signs, dtype=np.int64)[:, None]
    n_exact = int(np.all(rows == signs, axis=0).sum())
    expansion = int(np.prod(1 + signs * rows, axis=0).sum())
    n_main = Fraction(expansion, 2**spec.k)
    return DefectReport(n_exact, n_main, n_main - n_exact)


def pattern_bound_check(spec: PatternSpec, F: PrimeField) -> bool:
    """|N - p/2^k| <= ((k-2)/2 + 1/2^k) sqrt(p) + k/2, decided exactly."""
    k = spec.k
    n = pattern_count(spec, F).n_exact
    slack = Fraction(abs(n * 2**k - F.p), 2**k) - Fraction(k, 2)
    if slack <= 0:
        return True
    coef = Fraction((k - 2) * 2 ** (k - 1) + 1, 2**k)
    if coef <= 0:
        return False
    return slack * slack <= coef * coef * F.p


# ---------------------------------------------------------------------------
# Weil bound for the quadratic character


@dataclass(frozen=True)
class Polynomial:
    """Coefficients mod p, lowest degree first."""

    coeffs: tuple[int, ...]

    @classmethod
    def over(cls, coeffs: Sequence[int], F: PrimeField) -> "Polynomial":
        c = [int(x) % F.p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        return max(len(self.coeffs) - 1, 0)

    def is_zero(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class WeilReport:
    sum: int
    degree: int
    bound: float
    applicable: bool
    holds: bool


def _poly_sqrt_monic(coeffs: Sequence[int], p: int) -> list[int] | None:
    """Monic g with g^2 == f for monic f, or None."""
    deg = len(coeffs) - 1
    if deg % 2:
        return None
    n = deg // 2
    g = [0] * (n + 1)
    g[n] = 1
    half = pow(2, -1, p)
    for i in range(n - 1, -1, -1):
        # coefficient of x^(n+i) in g^2 is 2 g_i + sum of g_j g_l, i < j, l < n
        known = sum(g[j] * g[n + i - j] for j in range(i + 1, n))
        g[i] = (coeffs[n + i] - known) * half % p
    square = [0] * (deg + 1)
    for i, gi in enumerate(g):
        for j, gj in enumerate(g):
            square[i + j] = (square[i + j] + gi * gj) % p
    return g if square == [c % p for c in coeffs] else None


def is_constant_times_square(f: Polynomial, F: PrimeField) -> bool:
    if f.is_zero():
        return True
    inv_lead = pow(f.coeffs[-1], -1, F.p)
    monic = [c * inv_lead % F.p for c in f.coeffs]
    return _poly_sqrt_monic(monic, F.p) is not None


def weil_check(f: Polynomial, F: PrimeField) -> WeilReport:
    if f.is_zero():
        raise ZeroPolynomial("f is identically zero")
    d = f.degree
    if d < 1:
        raise BadParameters("weil_check needs degree >= 1")
    if d > MAX_WEIL_DEGREE:
        raise BadParameters(f"degree {d} exceeds {MAX_WEIL_DEGREE}")
    total = kernels.poly_char_sum(F.square_bits, F.p, f.coeffs)
    applicable = not is_constant_times_square(f, F)
    holds = total * total <= (d - 1) ** 2 * F.p
    return WeilReport(total, d, (d - 1) * math.sqrt(F.p), applicable, holds)
