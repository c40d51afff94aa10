import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import nextprime

from kdiophantine import (
    ModulusTooLarge,
    NotOddPrime,
    OutOfRange,
    ZeroInverse,
    addmod,
    inverse,
    is_square,
    legendre,
    make_field,
    mulmod,
    powmod,
)
from kdiophantine.field import MAX_MODULUS

import oracles

PRIMES_500 = oracles.odd_primes(3, 499)
PRIMES_200 = oracles.odd_primes(3, 199)


def marked(F):
    return {r for r in range(F.p) if is_square(r, F)}


def test_square_table_mod_7():
    assert marked(make_field(7)) == {0, 1, 2, 4}


def test_square_table_mod_3():
    assert marked(make_field(3)) == {0, 1}


@pytest.mark.parametrize("bad", [9, 4, 2, 1, 0, -7, 15, 561])
def test_rejects_non_odd_primes(bad):
    with pytest.raises(NotOddPrime, match="not an odd prime"):
        make_field(bad)


def test_rejects_oversized_modulus():
    with pytest.raises(ModulusTooLarge):
        make_field(2**61 - 1)
    with pytest.raises(ModulusTooLarge):
        make_field(int(nextprime(MAX_MODULUS)))


def test_table_is_read_only():
    F = make_field(11)
    with pytest.raises(ValueError):
        F.square_bits[0] = 0
    with pytest.raises(ValueError):
        F.chi[1] = 0


def test_legendre_examples():
    assert legendre(1, make_field(101)) == 1
    assert legendre(14, make_field(7)) == 0
    assert legendre(3, make_field(7)) == -1


def test_inverse_examples():
    F = make_field(7)
    assert inverse(1, F) == 1
    assert inverse(2, F) == 4
    with pytest.raises(ZeroInverse):
        inverse(0, F)
    with pytest.raises(ZeroDivisionError):
        inverse(14, F)


def test_is_square_examples():
    assert is_square(0, make_field(23))
    assert is_square(9, make_field(23))
    assert not is_square(5, make_field(7))
    with pytest.raises(OutOfRange):
        is_square(7, make_field(7))


def test_modular_helpers():
    assert mulmod(6, 4, make_field(23)) == 1
    assert powmod(3, 0, make_field(7)) == 1
    assert powmod(3, 3, make_field(13)) == 1
    assert addmod(5, 4, make_field(7)) == 2


@pytest.mark.parametrize("p", PRIMES_500)
def test_euler_agrees_with_table(p):
    F = make_field(p)
    sq = oracles.squares(p)
    for a in range(p):
        expected = 0 if a == 0 else (1 if a in sq else -1)
        assert legendre(a, F) == expected
        assert is_square(a, F) == (a in sq)
    assert int(F.chi.astype(np.int64).sum()) == 0


@pytest.mark.parametrize("p", PRIMES_500)
def test_square_count(p):
    F = make_field(p)
    assert sum(legendre(r, F) == 1 for r in range(1, p)) == (p - 1) // 2
    assert int(F.square_mask.sum()) == (p + 1) // 2


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(PRIMES_200), st.integers(1, 10**6), st.integers(1, 10**6))
def test_legendre_is_multiplicative(p, a, b):
    F = make_field(p)
    if a % p and b % p:
        assert legendre(a * b, F) == legendre(a, F) * legendre(b, F)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(PRIMES_500), st.integers(1, 10**9))
def test_inverse_is_an_involution(p, a):
    F = make_field(p)
    if a % p:
        x = inverse(a, F)
        assert 1 <= x < p and a * x % p == 1
        assert inverse(x, F) == a % p


@pytest.mark.parametrize("p", PRIMES_200)
def test_multiplicativity_exhaustive(p):
    chi = make_field(p).chi.astype(np.int64)
    a = np.arange(1, p)
    prod = chi[(a[:, None] * a[None, :]) % p]
    assert np.array_equal(prod, chi[a][:, None] * chi[a][None, :])
