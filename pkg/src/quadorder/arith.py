"""Exact integer primitives: valuations, residues, Kronecker symbols, squares mod p^n."""

from __future__ import annotations

from functools import lru_cache, total_ordering
from math import gcd
from typing import Union

__all__ = [
    "INF",
    "Infinity",
    "Valuation",
    "ArgumentError",
    "is_prime",
    "factorize",
    "is_squarefree",
    "vp",
    "rem",
    "mod_inverse",
    "kronecker",
    "euler_phi_ppow",
    "is_square_mod_ppow",
    "count_roots_gl",
    "sqrt_roots_mod_ppow",
    "count_valuation_exact",
]


class ArgumentError(ValueError):
    """Raised for inputs outside an operation's domain."""


@total_ordering
class Infinity:
    """The valuation of zero. Compares above every integer and absorbs addition."""

    _instance: Infinity | None = None

    def __new__(cls) -> Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        if other is self or isinstance(other, int):
            return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash("quadorder.inf")

    def __add__(self, other: int | Infinity) -> Infinity:
        return self

    __radd__ = __add__

    def __sub__(self, other: int) -> Infinity:
        if other is self:
            raise ArithmeticError("inf - inf is undefined")
        return self

    def __repr__(self) -> str:
        return "INF"


INF = Infinity()
Valuation = Union[int, Infinity]

# Deterministic for n < 3.3 * 10**24, which covers every 64-bit input.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization of |n| as ascending (prime, exponent) pairs."""
    n = abs(n)
    if n == 0:
        raise ArgumentError("cannot factor 0")
    out: list[tuple[int, int]] = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out.append((q, e))
        q += 1 if q == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for _, e in factorize(n))


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ArgumentError(f"{p} is not prime")


def vp(x: int, p: int) -> Valuation:
    """Largest k with p^k | x; INF for x == 0."""
    _require_prime(p)
    if x == 0:
        return INF
    k = 0
    while x % p == 0:
        x //= p
        k += 1
    return k


def rem(x: int, y: int) -> int:
    if y < 1:
        raise ArgumentError(f"modulus must be positive, got {y}")
    return x % y


def mod_inverse(t: int, m: int) -> int | None:
    """u in [0, m-1] with t*u = 1 mod m, or None when gcd(t, m) > 1. m == 1 gives 0."""
    if m < 1:
        raise ArgumentError(f"modulus must be positive, got {m}")
    if m == 1:
        return 0
    if gcd(t, m) != 1:
        return None
    return pow(t, -1, m)


def kronecker(a: int, p: int) -> int:
    """Kronecker symbol (a/p) for a prime p."""
    _require_prime(p)
    if p == 2:
        if a % 2 == 0:
            return 0
        return 1 if a % 8 in (1, 7) else -1
    r = a % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def euler_phi_ppow(p: int, n: int) -> int:
    """phi(p^n)."""
    if n == 0:
        return 1
    return p ** (n - 1) * (p - 1)


def _split_unit(a: int, p: int) -> tuple[int, int]:
    k = 0
    while a % p == 0:
        a //= p
        k += 1
    return k, a


def is_square_mod_ppow(a: int, p: int, n: int) -> bool:
    """Whether a is congruent to a square modulo p^n, by the valuation/unit-part case split."""
    _require_prime(p)
    if n < 0:
        raise ArgumentError("exponent must be non-negative")
    if n == 0 or a % p**n == 0:
        return True
    k, c = _split_unit(a, p)
    if k >= n:
        return True
    if k % 2:
        return False
    if p != 2:
        return kronecker(c, p) == 1
    if n == k + 1:
        return True
    if n == k + 2:
        return c % 4 == 1
    return c % 8 == 1


def count_roots_gl(c: int, p: int, ell: int) -> int:
    """Number of y in [0, p^ell - 1] with y^2 = c mod p^ell, for c prime to p."""
    _require_prime(p)
    if ell < 1:
        raise ArgumentError("ell must be positive")
    if c % p == 0:
        raise ArgumentError(f"{c} is not prime to {p}")
    if p == 2:
        if ell == 1:
            return 1
        if ell == 2:
            return 2 if c % 4 == 1 else 0
        return 4 if c % 8 == 1 else 0
    return 2 if kronecker(c, p) == 1 else 0


def sqrt_roots_mod_ppow(c: int, p: int, ell: int) -> list[int]:
    """All y in [0, p^ell - 1] with y^2 = c mod p^ell, for c prime to p (Hensel lifting)."""
    _require_prime(p)
    if c % p == 0:
        raise ArgumentError(f"{c} is not prime to {p}")
    # Lift from a modulus where the root set is known by brute force, one power at a time.
    base = 3 if p == 2 else 1
    start = min(ell, base)
    mod = p**start
    roots = {y for y in range(mod) if (y * y - c) % mod == 0}
    for e in range(start, ell):
        nxt = mod * p
        lifted = set()
        for y in roots:
            for j in range(p):
                cand = y + j * mod
                if (cand * cand - c) % nxt == 0:
                    lifted.add(cand)
        roots, mod = lifted, nxt
    return sorted(roots)


def count_valuation_exact(a: int, p: int, m: int) -> int:
    """|{x in [0, p^m - 1] : vp(x^2 - a) == m}| for nonzero a."""
    _require_prime(p)
    if a == 0:
        raise ArgumentError("a must be nonzero")
    if m < 1:
        raise ArgumentError("m must be positive")
    v, c = _split_unit(a, p)
    if m < v:
        return euler_phi_ppow(p, m // 2) if m % 2 == 0 else 0
    if m == v:
        if is_square_mod_ppow(a, p, m + 1):
            return p ** (m // 2 - 1) * (p - 2) if p != 2 else 2 ** (m // 2 - 1)
        return p ** (m // 2)
    if not is_square_mod_ppow(a, p, m):
        return 0
    k = m - v
    if v >= 2:
        return p ** (v // 2 - 1) * (p * count_roots_gl(c, p, k) - count_roots_gl(c, p, k + 1))
    # v == 0: whether a root mod p^m also solves mod p^(m+1) depends on the literal
    # representative in [0, p^m - 1], so count those representatives directly.
    mod = p ** (m + 1)
    return sum(1 for y in sqrt_roots_mod_ppow(c, p, m) if (y * y - a) % mod != 0)
