"""Orders O_f = Z + tau*Z in quadratic fields and their conductor data."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from quadorder.arith import ArgumentError, factorize, is_prime, is_squarefree, kronecker

__all__ = [
    "DataError",
    "OrderContext",
    "SplittingType",
    "make_order",
    "norm_form",
    "splitting",
    "picard_number",
    "PicData",
    "read_pic_data",
]


class DataError(ValueError):
    """Externally supplied data is inconsistent."""


class SplittingType(enum.Enum):
    INERT = "inert"
    SPLIT = "split"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class OrderContext:
    """The order of conductor f in Q(sqrt(d)).

    Elements are written a + b*tau with tau = (eps + f*sqrt(d_K))/2, which satisfies
    tau^2 = eps*tau - eta.
    """

    d: int
    f: int
    d_K: int
    eps: int
    eta: int
    conductor_primes: tuple[tuple[int, int], ...] = field(default=())

    def norm(self, r: int) -> int:
        return r * r + self.eps * r + self.eta

    def mul(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        """Product of a0 + a1*tau and b0 + b1*tau in coordinates (1, tau)."""
        a0, a1 = a
        b0, b1 = b
        t = a1 * b1
        return a0 * b0 - t * self.eta, a0 * b1 + a1 * b0 + t * self.eps

    def element_norm(self, a: int, b: int) -> int:
        """N(a + b*tau) = a^2 + eps*a*b + eta*b^2."""
        return a * a + self.eps * a * b + self.eta * b * b

    def vf(self, p: int) -> int:
        for q, e in self.conductor_primes:
            if q == p:
                return e
        return 0

    def splitting(self, p: int) -> SplittingType:
        return splitting(self.d_K, p)


def make_order(d: int, f: int) -> OrderContext:
    if d in (0, 1) or not is_squarefree(d):
        raise ArgumentError(f"d={d} must be squarefree and not in {{0, 1}}")
    if f < 1:
        raise ArgumentError(f"conductor must be positive, got {f}")
    d_K = d if d % 4 == 1 else 4 * d
    eps = (f * d_K) % 2
    eta, r = divmod(eps - f * f * d_K, 4)
    assert r == 0
    primes = tuple(factorize(f)) if f > 1 else ()
    return OrderContext(d=d, f=f, d_K=d_K, eps=eps, eta=eta, conductor_primes=primes)


def norm_form(ctx: OrderContext, r: int) -> int:
    return ctx.norm(r)


def splitting(d_K: int, p: int) -> SplittingType:
    if not is_prime(p):
        raise ArgumentError(f"{p} is not prime")
    if p == 2:
        if d_K % 2 == 0:
            return SplittingType.RAMIFIED
        return SplittingType.INERT if d_K % 8 == 5 else SplittingType.SPLIT
    k = kronecker(d_K, p)
    return {-1: SplittingType.INERT, 1: SplittingType.SPLIT, 0: SplittingType.RAMIFIED}[k]


def picard_number(ctx: OrderContext, h_K: int, unit_index: int) -> int:
    """|Pic(O_f)| from the class number of O_K and the unit index (O_K^x : O_f^x)."""
    if h_K < 1 or unit_index < 1:
        raise ArgumentError("h_K and unit_index must be positive")
    value = Fraction(h_K * ctx.f, unit_index)
    for p, _ in ctx.conductor_primes:
        value *= 1 - Fraction(kronecker(ctx.d_K, p), p)
    if value.denominator != 1 or value < 1:
        raise DataError(f"inconsistent Picard data for d={ctx.d}, f={ctx.f}: got {value}")
    return int(value)


@dataclass(frozen=True)
class PicData:
    h_K: int
    unit_index: int


def read_pic_data(path: str | Path) -> dict[tuple[int, int], PicData]:
    """Parse lines of `d f h_K unit_index`; `#` starts a comment."""
    out: dict[tuple[int, int], PicData] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise DataError(f"{path}:{lineno}: expected 4 fields, got {len(parts)}")
        try:
            d, f, h, k = (int(s) for s in parts)
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
        out[(d, f)] = PicData(h, k)
    return out
