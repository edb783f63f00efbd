"""The monoid of p-primary ideals of O_f as triples (x, y, z).

The triple (x, y, z) stands for the ideal p^x (p^y Z + (z + tau) Z). Valid triples satisfy
z < p^y and p^y | N(z + tau).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from quadorder.arith import INF, ArgumentError, Valuation, euler_phi_ppow, is_squarefree, mod_inverse
from quadorder.order import OrderContext, SplittingType, make_order

__all__ = [
    "Triple",
    "IDENTITY",
    "P_O",
    "ResourceLimitError",
    "OracleMismatch",
    "LocalMonoid",
    "max_modulus",
    "hnf2",
    "ideal_hnf",
    "principal_hnf",
    "in_lattice",
    "star",
    "norm_exponent",
    "is_invertible",
    "is_atom",
    "conjugate",
    "enumerate_atoms",
    "atom_count_closed_form",
    "normal_form",
    "reduce_conductor",
    "lattice_oracle_mul",
    "atom_census",
]

MAX_MODULUS_ENV = "QUADORDER_MAX_MODULUS"
DEFAULT_MAX_MODULUS = 2**24


class ResourceLimitError(RuntimeError):
    """A request would exceed the configured enumeration ceiling."""


class OracleMismatch(AssertionError):
    """Two independent computations of the same quantity disagree."""


def max_modulus() -> int:
    raw = os.environ.get(MAX_MODULUS_ENV)
    return int(raw) if raw else DEFAULT_MAX_MODULUS


class Triple(NamedTuple):
    x: int
    y: int
    z: int

    def __str__(self) -> str:
        return f"({self.x},{self.y},{self.z})"


IDENTITY = Triple(0, 0, 0)
P_O = Triple(1, 0, 0)


def norm_exponent(t: Triple) -> int:
    return 2 * t.x + t.y


def is_atom(t: Triple) -> bool:
    if t == IDENTITY:
        raise ArgumentError("the identity is neither an atom nor a non-atom")
    return t == P_O or (t.x == 0 and t.y >= 1)


def normal_form(t: Triple) -> tuple[int, Triple]:
    """(n, v) with t = (pO)^n * v and v an atom, or v the identity when t is."""
    x, y, z = t
    if y >= 1:
        return x, Triple(0, y, z)
    if x == 0:
        return 0, IDENTITY
    return x - 1, P_O


def _v(n: int, p: int) -> Valuation:
    if n == 0:
        return INF
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# Rank-2 lattices in the basis (1, tau)


def hnf2(rows: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """Reduce generators (a, b) of a full-rank sublattice of Z^2 to (A, B, C).

    The lattice is then A Z + (B + C tau) Z with A, C > 0 and 0 <= B < A.
    """
    vecs = [(a, b) for a, b in rows if a or b]
    # Euclid on the tau-coordinate until a single row carries it.
    pivot: tuple[int, int] | None = None
    flat: list[int] = []
    for a, b in vecs:
        if b == 0:
            flat.append(a)
            continue
        if pivot is None:
            pivot = (a, b)
            continue
        pa, pb = pivot
        while b:
            q = pb // b
            pa, pb, a, b = a, b, pa - q * a, pb - q * b
        pivot = (pa, pb)
        flat.append(a)
    if pivot is None:
        raise ArgumentError("lattice is not of full rank")
    A = 0
    for a in flat:
        A = _gcd(A, a)
    if A == 0:
        raise ArgumentError("lattice is not of full rank")
    B, C = pivot
    if C < 0:
        B, C = -B, -C
    return A, B % A, C


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def ideal_hnf(t: Triple, p: int) -> tuple[int, int, int]:
    x, y, z = t
    px = p**x
    return px * p**y, px * z, px


def principal_hnf(ctx: OrderContext, a: int, b: int) -> tuple[int, int, int]:
    """HNF of the principal ideal (a + b tau) O."""
    alpha = (a, b)
    return hnf2([alpha, ctx.mul(alpha, (0, 1))])


def in_lattice(hnf: tuple[int, int, int], a: int, b: int) -> bool:
    A, B, C = hnf
    if b % C:
        return False
    return (a - (b // C) * B) % A == 0


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalMonoid:
    """M_{f,p} for a fixed order and conductor prime p."""

    ctx: OrderContext
    p: int

    def __post_init__(self) -> None:
        if self.ctx.f % self.p != 0:
            raise ArgumentError(f"{self.p} does not divide the conductor {self.ctx.f}")

    @classmethod
    def of(cls, d: int, f: int, p: int) -> LocalMonoid:
        return cls(make_order(d, f), p)

    @cached_property
    def v(self) -> int:
        return self.ctx.vf(self.p)

    @cached_property
    def kind(self) -> SplittingType:
        return self.ctx.splitting(self.p)

    def __str__(self) -> str:
        return f"M(d={self.ctx.d}, f={self.ctx.f}, p={self.p})"

    # -- membership ---------------------------------------------------------

    def nv(self, z: int) -> Valuation:
        """vp(N(z + tau))."""
        return _v(self.ctx.norm(z), self.p)

    def contains(self, t: Triple) -> bool:
        x, y, z = t
        if min(x, y, z) < 0 or z >= self.p**y:
            return False
        return self.nv(z) >= y

    def check(self, t: Triple) -> Triple:
        t = Triple(*t)
        if not self.contains(t):
            raise ArgumentError(f"{t} is not in {self}")
        return t

    def is_invertible(self, t: Triple) -> bool:
        return t.y == 0 or self.nv(t.z) == t.y

    # -- product ------------------------------------------------------------

    def mul(self, s: Triple, t: Triple, lift: int = 0) -> Triple:
        """Closed-form product. `lift` shifts the auxiliary inverse t by lift * modulus."""
        u, v, w = s
        x, y, z = t
        if v == 0:
            return Triple(u + x, y, z)
        if y == 0:
            return Triple(u + x, v, w)
        p, eps, eta = self.p, self.ctx.eps, self.ctx.eta
        sw = w + z + eps
        g = min(v, y, _v(sw, p))
        nw = w * w + eps * w + eta
        nz = z * z + eps * z + eta
        e = min(g, _v(w - z, p), _v(nw, p) - v, _v(nz, p) - y)
        a = u + x + g
        b = v + y + e - 2 * g
        h, nh = (z, nz) if y >= v else (w, nw)
        pg = p**g
        modulus = p ** (min(v, y) - g)
        inv = mod_inverse(sw // pg, modulus)
        if inv is None:
            raise OracleMismatch(f"no inverse while multiplying {s} and {t} in {self}")
        inv += lift * modulus
        return Triple(a, b, (h - inv * (nh // pg)) % p**b)

    def conjugate(self, t: Triple) -> Triple:
        x, y, z = t
        return Triple(x, y, (-z - self.ctx.eps) % self.p**y)

    def power(self, t: Triple, n: int) -> Triple:
        out = IDENTITY
        for _ in range(n):
            out = self.mul(out, t)
        return out

    def product(self, ts: Iterable[Triple]) -> Triple:
        out = IDENTITY
        for t in ts:
            out = self.mul(out, t)
        return out

    # -- independent lattice arithmetic ---------------------------------------

    def from_hnf(self, hnf: tuple[int, int, int]) -> Triple:
        """Read (x, y, z) off the HNF of a p-primary ideal."""
        A, B, C = hnf
        p = self.p
        x = _v(C, p)
        px = p**x
        if C != px or A % C or B % C:
            raise OracleMismatch(f"HNF {hnf} is not of primary standard form for p={p}")
        y = _v(A // C, p)
        if A != px * p**y:
            raise OracleMismatch(f"HNF {hnf} is not of primary standard form for p={p}")
        t = Triple(x, y, B // C)
        if not self.contains(t):
            raise OracleMismatch(f"HNF {hnf} reads back as invalid triple {t}")
        return t

    def lattice_mul(self, s: Triple, t: Triple) -> Triple:
        """Product of the two ideals via generator products and Hermite reduction."""
        p, mul = self.p, self.ctx.mul
        gens_s = _generators(s, p)
        gens_t = _generators(t, p)
        rows = [mul(a, b) for a in gens_s for b in gens_t]
        return self.from_hnf(hnf2(rows))

    # -- atoms and elements -------------------------------------------------

    def roots(self, m: int) -> list[int]:
        """All r in [0, p^m - 1] with p^m | N(r + tau), by exhaustive digit-by-digit lifting."""
        p = self.p
        if p**m > max_modulus():
            raise ResourceLimitError(f"{p}^{m} exceeds the enumeration ceiling {max_modulus()}")
        return self._roots(m)

    def _roots(self, m: int) -> list[int]:
        cache = self.__dict__.setdefault("_root_cache", {0: [0]})
        if m in cache:
            return cache[m]
        prev = self._roots(m - 1)
        p, norm = self.p, self.ctx.norm
        step = p ** (m - 1)
        mod = step * p
        out = sorted(r + j * step for r in prev for j in range(p) if norm(r + j * step) % mod == 0)
        cache[m] = out
        return out

    def atoms_of_norm(self, m: int, invertible_only: bool = False) -> list[Triple]:
        """Atoms (0, m, r) in ascending r. The atom pO is not included."""
        if m < 1:
            raise ArgumentError("m must be positive")
        out = [Triple(0, m, r) for r in self.roots(m)]
        if invertible_only:
            out = [t for t in out if self.nv(t.z) == m]
        return out

    def atoms(self, max_exponent: int, invertible_only: bool = False) -> list[Triple]:
        """All atoms of norm exponent <= max_exponent, sorted by (norm exponent, y, z)."""
        out = [P_O] if max_exponent >= 2 else []
        for m in range(1, max_exponent + 1):
            out.extend(self.atoms_of_norm(m, invertible_only))
        out.sort(key=atom_key)
        return out

    def atom_count_closed_form(self, m: int) -> int:
        """Number of invertible atoms (0, m, r), by the classification table."""
        p, v, kind = self.p, self.v, self.kind
        if m < 1:
            raise ArgumentError("m must be positive")
        if m % 2 == 0 and m < 2 * v:
            return euler_phi_ppow(p, m // 2)
        if m == 2 * v:
            if kind is SplittingType.INERT:
                return p**v
            if kind is SplittingType.RAMIFIED:
                return euler_phi_ppow(p, v)
            return p ** (v - 1) * (p - 2)
        if m == 2 * v + 1:
            if kind is SplittingType.INERT:
                return 0
            if kind is SplittingType.RAMIFIED:
                return p**v
            return 2 * euler_phi_ppow(p, v)
        if m > 2 * v + 1 and kind is SplittingType.SPLIT:
            return 2 * euler_phi_ppow(p, v)
        return 0

    def max_atom_exponent(self) -> int | None:
        """Largest norm exponent of an atom; None when unbounded (split p)."""
        if self.kind is SplittingType.SPLIT:
            return None
        return 2 * self.v + (1 if self.kind is SplittingType.RAMIFIED else 0)

    def elements(self, bound: int, invertible_only: bool = False) -> list[Triple]:
        """All triples with 2x + y <= bound, sorted."""
        out = []
        for y in range(bound + 1):
            for r in self.roots(y):
                if invertible_only and y and self.nv(r) != y:
                    continue
                for x in range((bound - y) // 2 + 1):
                    out.append(Triple(x, y, r))
        out.sort()
        return out


def atom_key(t: Triple) -> tuple[int, int, int]:
    return (2 * t.x + t.y, t.y, t.z)


def _generators(t: Triple, p: int) -> list[tuple[int, int]]:
    x, y, z = t
    px = p**x
    return [(px * p**y, 0), (px * z, px)]


# ---------------------------------------------------------------------------
# Function-style API


def star(u: Triple, v: Triple, mon: LocalMonoid) -> Triple:
    return mon.mul(mon.check(u), mon.check(v))


def lattice_oracle_mul(u: Triple, v: Triple, mon: LocalMonoid) -> Triple:
    return mon.lattice_mul(mon.check(u), mon.check(v))


def is_invertible(t: Triple, mon: LocalMonoid) -> bool:
    return mon.is_invertible(mon.check(t))


def conjugate(t: Triple, mon: LocalMonoid) -> Triple:
    return mon.conjugate(mon.check(t))


def enumerate_atoms(mon: LocalMonoid, m: int, invertible_only: bool = False) -> list[Triple]:
    return mon.atoms_of_norm(m, invertible_only)


def atom_count_closed_form(mon: LocalMonoid, m: int) -> int:
    return mon.atom_count_closed_form(m)


def reduce_conductor(t: Triple, src: LocalMonoid, dst: LocalMonoid) -> Triple:
    """Image of t under the isomorphism M_{f,p} -> M_{p^vp(f),p} given by localization at p.

    Uses tau_f = c * tau_{f'} + (eps - c * eps') / 2 with c = f / f', a unit at p.
    """
    p = src.p
    if dst.p != p or dst.ctx.d != src.ctx.d or dst.ctx.f != p**src.v:
        raise ArgumentError(f"{dst} is not the p-part reduction of {src}")
    x, y, z = src.check(t)
    if y == 0:
        return Triple(x, 0, 0)
    c = src.ctx.f // dst.ctx.f
    shift, odd = divmod(src.ctx.eps - c * dst.ctx.eps, 2)
    assert odd == 0
    mod = p**y
    inv = mod_inverse(c, mod)
    assert inv is not None
    return Triple(x, y, inv * (z + shift) % mod)


def atom_census(
    max_abs_d: int, max_f: int, max_mod: int
) -> tuple[list[tuple[int, int, int, int, int, int]], int]:
    """Compare closed-form and enumerated invertible atom counts over a grid.

    Covers squarefree d with |d| <= max_abs_d, 2 <= f <= max_f, p | f and p^m <= max_mod.
    Returns the mismatches as (d, f, p, m, closed, enumerated) and the number of cells checked.
    """
    mismatches = []
    checked = 0
    for d in range(-max_abs_d, max_abs_d + 1):
        if d in (0, 1) or not is_squarefree(d):
            continue
        for f in range(2, max_f + 1):
            ctx = make_order(d, f)
            for p, _ in ctx.conductor_primes:
                mon = LocalMonoid(ctx, p)
                m = 1
                while p**m <= max_mod:
                    closed = mon.atom_count_closed_form(m)
                    found = len(mon.atoms_of_norm(m, invertible_only=True))
                    checked += 1
                    if closed != found:
                        mismatches.append((d, f, p, m, closed, found))
                    m += 1
    return mismatches, checked
