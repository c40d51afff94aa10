"""Point counts of y^2 = x^3 + D over F_p and Gauss's branch formula."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import GaussMismatch, NoRepresentation, WrongResidueClassOfP, ZeroD
from .field import PrimeField, legendre


@dataclass(frozen=True)
class QuadRep:
    """p = a^2 + 3 b^2 with a = 2 (mod 3) and b > 0."""

    a: int
    b: int


class ResidueClass(enum.Enum):
    SEXTIC = "sextic"
    CUBIC_NOT_QUADRATIC = "cubic-not-quadratic"
    QUADRATIC_NOT_CUBIC = "quadratic-not-cubic"
    NEITHER = "neither"


@dataclass(frozen=True)
class CurveCount:
    D: int
    p: int
    exact: int
    candidates: frozenset[int]


def represent(F: PrimeField) -> QuadRep:
    """Trial search over b for p = a^2 + 3b^2, normalised to a = 2 (mod 3)."""
    p = F.p
    if p % 3 != 1:
        raise NoRepresentation(f"p={p} is not 1 mod 3")
    for b in range(1, math.isqrt(p // 3) + 1):
        rest = p - 3 * b * b
        a = math.isqrt(rest)
        if a * a == rest:
            return QuadRep(a if a % 3 == 2 else -a, b)
    raise NoRepresentation(f"no representation found for p={p}")  # pragma: no cover


def classify(D: int, F: PrimeField) -> ResidueClass:
    p = F.p
    if p % 3 != 1:
        raise WrongResidueClassOfP(f"p={p} is not 1 mod 3")
    D %= p
    if D == 0:
        raise ZeroD("D must be nonzero mod p")
    quadratic = legendre(D, F) == 1
    cubic = pow(D, (p - 1) // 3, p) == 1
    if quadratic and cubic:
        return ResidueClass.SEXTIC
    if cubic:
        return ResidueClass.CUBIC_NOT_QUADRATIC
    if quadratic:
        return ResidueClass.QUADRATIC_NOT_CUBIC
    return ResidueClass.NEITHER


def gauss_candidates(D: int, F: PrimeField) -> frozenset[int]:
    """Point counts allowed by Gauss's formula; the +-3b branches give two."""
    p = F.p
    if D % p == 0:
        raise ZeroD("D must be nonzero mod p")
    if p % 3 != 1:
        # cubing permutes F_p, so every D gives p + 1 points (p = 3 included)
        return frozenset({p + 1})
    rep = represent(F)
    a, b = rep.a, rep.b
    cls = classify(D, F)
    if cls is ResidueClass.SEXTIC:
        return frozenset({p + 1 + 2 * a})
    if cls is ResidueClass.CUBIC_NOT_QUADRATIC:
        return frozenset({p + 1 - 2 * a})
    if cls is ResidueClass.QUADRATIC_NOT_CUBIC:
        return frozenset({p + 1 - a + 3 * b, p + 1 - a - 3 * b})
    return frozenset({p + 1 + a + 3 * b, p + 1 + a - 3 * b})


def brute_point_count(D: int, F: PrimeField) -> int:
    """Affine solutions of y^2 = x^3 + D plus the point at infinity."""
    return int(kernels.point_counts(F.square_bits, F.p, np.array([D % F.p]))[0])


def all_point_counts(F: PrimeField) -> np.ndarray:
    """``out[D]`` is the point count for D = 0..p-1."""
    return kernels.point_counts(F.square_bits, F.p, np.arange(F.p))


def verify_gauss(D: int, F: PrimeField, exact: int | None = None) -> CurveCount:
    candidates = gauss_candidates(D, F)
    if exact is None:
        exact = brute_point_count(D, F)
    if exact not in candidates:
        raise GaussMismatch(f"D={D}, p={F.p}: {exact} not in {sorted(candidates)}")
    return CurveCount(D % F.p, F.p, exact, candidates)
