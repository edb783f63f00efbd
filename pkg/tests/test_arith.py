from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadorder.arith import (
    INF,
    ArgumentError,
    count_roots_gl,
    count_valuation_exact,
    euler_phi_ppow,
    factorize,
    is_prime,
    is_square_mod_ppow,
    is_squarefree,
    kronecker,
    mod_inverse,
    rem,
    sqrt_roots_mod_ppow,
    vp,
)

PRIMES = [2, 3, 5, 7, 11]


def sieve(n: int) -> set[int]:
    flags = [True] * (n + 1)
    flags[0] = flags[1] = False
    for i in range(2, int(n**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = [False] * len(flags[i * i :: i])
    return {i for i, f in enumerate(flags) if f}


def test_is_prime_matches_sieve():
    primes = sieve(5000)
    assert all(is_prime(n) == (n in primes) for n in range(-5, 5001))


def test_is_prime_large():
    assert is_prime(2**61 - 1)
    assert not is_prime((2**31 - 1) * (2**61 - 1))
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@given(st.integers(min_value=-(10**9), max_value=10**9).filter(lambda n: n not in (-1, 0, 1)))
def test_factorize_roundtrip(n):
    prod = 1
    for p, e in factorize(n):
        assert is_prime(p) and e >= 1
        prod *= p**e
    assert prod == abs(n)


def test_squarefree():
    assert [n for n in range(-12, 13) if is_squarefree(n)] == [
        -11, -10, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 11,
    ]


def test_vp_and_infinity():
    assert vp(48, 2) == 4
    assert vp(-75, 5) == 2
    assert vp(7, 3) == 0
    assert vp(0, 7) is INF
    with pytest.raises(ArgumentError):
        vp(8, 4)


def test_infinity_arithmetic():
    assert INF > 10**100
    assert min(3, INF) == 3
    assert INF + 5 is INF
    assert INF - 5 is INF
    assert not INF < INF
    with pytest.raises((ArithmeticError, ValueError, TypeError)):
        INF - INF


@given(st.integers(), st.integers(min_value=1, max_value=10**6))
def test_rem_is_canonical(x, y):
    r = rem(x, y)
    assert 0 <= r < y and (x - r) % y == 0


def test_rem_rejects_nonpositive_modulus():
    with pytest.raises(ArgumentError):
        rem(3, 0)


@given(st.integers(min_value=-(10**6), max_value=10**6), st.integers(min_value=1, max_value=10**4))
def test_mod_inverse(t, m):
    u = mod_inverse(t, m)
    if m == 1:
        assert u == 0
    elif u is None:
        assert any(t % q == 0 for q, _ in factorize(m))
    else:
        assert 0 <= u < m and (t * u) % m == 1


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_kronecker_odd_is_legendre(p):
    squares = {x * x % p for x in range(1, p)}
    for a in range(-50, 51):
        expected = 0 if a % p == 0 else (1 if a % p in squares else -1)
        assert kronecker(a, p) == expected


def test_kronecker_at_two():
    assert [kronecker(a, 2) for a in range(8)] == [0, 1, 0, -1, 0, -1, 0, 1]
    assert kronecker(-7, 2) == 1
    assert kronecker(-3, 2) == -1


def test_euler_phi_ppow():
    assert [euler_phi_ppow(3, n) for n in range(4)] == [1, 2, 6, 18]


@pytest.mark.parametrize("p", PRIMES)
def test_is_square_mod_ppow_brute(p):
    for n in range(0, 6):
        mod = p**n
        if mod > 4000:
            break
        squares = {x * x % mod for x in range(mod)} if mod > 1 else {0}
        for a in range(-60, 61):
            assert is_square_mod_ppow(a, p, n) == (a % mod in squares), (a, p, n)


@pytest.mark.parametrize("p", PRIMES)
def test_count_and_lift_square_roots_brute(p):
    for ell in range(1, 7):
        mod = p**ell
        if mod > 5000:
            break
        for c in range(1, 3 * p + 20):
            if c % p == 0:
                continue
            brute = [y for y in range(mod) if (y * y - c) % mod == 0]
            assert sqrt_roots_mod_ppow(c, p, ell) == brute
            assert count_roots_gl(c, p, ell) == len(brute)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_count_valuation_exact_brute(p):
    for m in range(1, 9):
        mod = p**m
        if mod > 3000:
            break
        for a in list(range(-120, 0)) + list(range(1, 121)):
            brute = sum(1 for x in range(mod) if vp(x * x - a, p) == m)
            assert count_valuation_exact(a, p, m) == brute, (a, p, m)


def test_count_valuation_exact_unit_case_depends_on_representative():
    # x = 1 and x = 2 both square to 1 mod 3, but only x = 1 solves mod 9.
    assert count_valuation_exact(1, 3, 1) == 1
    assert count_valuation_exact(4, 3, 1) == 1


def test_count_valuation_exact_rejects_zero():
    with pytest.raises(ArgumentError):
        count_valuation_exact(0, 3, 2)
