"""Prime-field arithmetic and the quadratic character."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal

import numpy as np
from sympy import isprime

from . import kernels
from .errors import ModulusTooLarge, NotOddPrime, OutOfRange, ZeroInverse

CharValue = Literal[-1, 0, 1]

# p**2 must fit in a signed 64-bit product inside the kernels.
MAX_MODULUS = 2**31 - 1


@dataclass(frozen=True)
class PrimeField:
    """An odd prime modulus together with its packed table of squares.

    Zero is marked as a square. Instances are immutable and safe to share
    between threads; build them with :func:`make_field`.
    """

    p: int
    square_bits: np.ndarray = field(repr=False, compare=False)

    @cached_property
    def chi(self) -> np.ndarray:
        """Quadratic character as an int8 table indexed by residue."""
        table = kernels.chi_table(self.square_bits, self.p)
        table.setflags(write=False)
        return table

    @cached_property
    def square_mask(self) -> np.ndarray:
        mask = kernels.lookup(self.square_bits, np.arange(self.p, dtype=np.int64))
        mask.setflags(write=False)
        return mask

    @property
    def class_mod3(self) -> int:
        return self.p % 3


def make_field(p: int) -> PrimeField:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise NotOddPrime(p)
    p = int(p)
    if p < 3 or p % 2 == 0 or not isprime(p):
        raise NotOddPrime(p)
    if p > MAX_MODULUS:
        raise ModulusTooLarge(f"p={p} exceeds the supported bound {MAX_MODULUS}")
    bits = kernels.square_bits(p)
    bits.setflags(write=False)
    return PrimeField(p, bits)


def addmod(a: int, b: int, F: PrimeField) -> int:
    return (a + b) % F.p


def mulmod(a: int, b: int, F: PrimeField) -> int:
    return a * b % F.p


def powmod(a: int, e: int, F: PrimeField) -> int:
    return pow(a, e, F.p)


def legendre(a: int, F: PrimeField) -> CharValue:
    """Legendre symbol (a/p) by Euler's criterion."""
    a %= F.p
    if a == 0:
        return 0
    return 1 if pow(a, (F.p - 1) // 2, F.p) == 1 else -1


def inverse(a: int, F: PrimeField) -> int:
    a %= F.p
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {F.p}")
    return pow(a, -1, F.p)


def is_square(r: int, F: PrimeField) -> bool:
    """Table lookup; 0 counts as a square."""
    if not 0 <= r < F.p:
        raise OutOfRange(f"residue {r} outside 0..{F.p - 1}")
    return bool((F.square_bits[r >> 3] >> (r & 7)) & 1)


def is_square_mod(v: int, F: PrimeField) -> bool:
    """:func:`is_square` for an unreduced integer."""
    r = v % F.p
    return bool((F.square_bits[r >> 3] >> (r & 7)) & 1)
