"""Invariants of the full ideal monoid of O_f, assembled from its conductor-prime components."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Mapping

from quadorder.arith import ArgumentError, factorize, is_prime, kronecker
from quadorder.factor_engine import ALL_FROM_2, WindowReport, window_sweep
from quadorder.local_monoid import (
    IDENTITY,
    P_O,
    LocalMonoid,
    OracleMismatch,
    Triple,
    ideal_hnf,
    in_lattice,
    norm_exponent,
    principal_hnf,
)
from quadorder.order import OrderContext, SplittingType, make_order

__all__ = [
    "GlobalIdeal",
    "Case",
    "Classification",
    "classify",
    "aggregate",
    "verify_classification",
    "rho_k_closed_form",
    "MinDeltaVerdict",
    "min_delta_check",
    "principality_search_imaginary",
    "principality_search_real",
    "generator_identity_check",
    "tau_to_sqrt_d",
    "DEFAULT_SEARCH_BUDGET",
]

DEFAULT_SEARCH_BUDGET = 200_000


@dataclass(frozen=True)
class GlobalIdeal:
    """An ideal supported on the conductor primes, one triple per prime.

    Ideals coprime to f form a free monoid that does not affect any invariant computed here,
    so they are not represented.
    """

    ctx: OrderContext
    components: Mapping[int, Triple] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for p, t in self.components.items():
            LocalMonoid(self.ctx, p).check(t)

    def component(self, p: int) -> Triple:
        return self.components.get(p, IDENTITY)

    def __mul__(self, other: GlobalIdeal) -> GlobalIdeal:
        if other.ctx != self.ctx:
            raise ArgumentError("ideals of different orders")
        out = {}
        for p, _ in self.ctx.conductor_primes:
            t = LocalMonoid(self.ctx, p).mul(self.component(p), other.component(p))
            if t != IDENTITY:
                out[p] = t
        return GlobalIdeal(self.ctx, out)

    def norm(self) -> int:
        n = 1
        for p, t in self.components.items():
            n *= p ** norm_exponent(t)
        return n


class Case(enum.Enum):
    HF = "half-factorial"
    SQUAREFREE = "squarefree"
    NON_SQUAREFREE_I = "non-squarefree (i)"
    NON_SQUAREFREE_II = "non-squarefree (ii)"


@dataclass(frozen=True)
class Classification:
    case: Case
    delta: frozenset[int]
    ca_full: frozenset[int]
    ca_invertible: frozenset[int]
    catenary: int

    @property
    def half_factorial(self) -> bool:
        return self.case is Case.HF


def _interval(a: int, b: int) -> frozenset[int]:
    return frozenset(range(a, b + 1))


def classify(ctx: OrderContext) -> Classification:
    """Predicted Delta, Ca and c of the ideal monoids I(O) and I*(O)."""
    if ctx.f < 2:
        raise ArgumentError("classification needs a non-maximal order (f >= 2)")
    squarefree = all(e == 1 for _, e in ctx.conductor_primes)
    if squarefree and all(ctx.splitting(p) is SplittingType.INERT for p, _ in ctx.conductor_primes):
        # c = 2; 1 comes from P * P = pO * P in the full monoid.
        return Classification(Case.HF, frozenset(), frozenset({1, 2}), frozenset({2}), 2)
    if squarefree:
        return Classification(Case.SQUAREFREE, frozenset({1}), _interval(1, 3), _interval(2, 3), 3)
    if ctx.vf(2) in (2, 3) and ctx.d_K % 8 == 1:
        return Classification(
            Case.NON_SQUAREFREE_II, _interval(1, 3), _interval(1, 5), _interval(2, 5), 5
        )
    return Classification(Case.NON_SQUAREFREE_I, _interval(1, 2), _interval(1, 4), _interval(2, 4), 4)


def aggregate(ctx: OrderContext, reports: Mapping[int, WindowReport]) -> WindowReport:
    """Combine per-prime window reports: Delta and Ca are unions, c is the maximum."""
    primes = [p for p, _ in ctx.conductor_primes]
    missing = [p for p in primes if p not in reports]
    if missing:
        raise ArgumentError(f"missing window reports for primes {missing}")
    parts = [reports[p] for p in primes]
    bounds = {r.norm_bound for r in parts}
    if len(bounds) != 1 or len({r.invertible_only for r in parts}) != 1:
        raise ArgumentError("component reports must share bound and monoid type")
    out = WindowReport(
        label=f"I(O) d={ctx.d} f={ctx.f}",
        norm_bound=bounds.pop(),
        invertible_only=parts[0].invertible_only,
        element_count=sum(r.element_count for r in parts),
    )
    for r in parts:
        out.delta |= r.delta
        out.ca |= r.ca
    out.catenary = max((r.catenary for r in parts), default=0)
    return out


def verify_classification(
    ctx: OrderContext, bound: int, primes: list[int] | None = None
) -> dict[str, object]:
    """Run window sweeps for both monoids and compare against `classify`."""
    cls = classify(ctx)
    primes = primes or [p for p, _ in ctx.conductor_primes]
    out: dict[str, object] = {"case": cls.case.value, "bound": bound}
    for inv in (False, True):
        reports = {p: window_sweep(LocalMonoid(ctx, p), bound, inv) for p in primes}
        if len(primes) == len(ctx.conductor_primes):
            agg = aggregate(ctx, reports)
        else:
            agg = reports[primes[0]] if len(primes) == 1 else None
            if agg is None:
                raise ArgumentError("partial verification supports a single prime")
        key = "invertible" if inv else "full"
        predicted_ca = cls.ca_invertible if inv else cls.ca_full
        out[key] = {
            "delta": sorted(agg.delta),
            "ca": sorted(agg.ca),
            "catenary": agg.catenary,
            "delta_match": agg.delta == set(cls.delta),
            "ca_match": agg.ca == set(predicted_ca),
        }
    out["predicted"] = {
        "delta": sorted(cls.delta),
        "ca_full": sorted(cls.ca_full),
        "ca_invertible": sorted(cls.ca_invertible),
        "catenary": cls.catenary,
    }
    return out


def rho_k_closed_form(ctx: OrderContext, k: int) -> tuple[int, Fraction] | str:
    """(rho_k, rho) for I(O) and I*(O), or ALL_FROM_2 when a split prime divides f."""
    if k < 2:
        raise ArgumentError("k must be at least 2")
    if ctx.f < 2:
        raise ArgumentError("needs f >= 2")
    kinds = {p: ctx.splitting(p) for p, _ in ctx.conductor_primes}
    if any(kd is SplittingType.SPLIT for kd in kinds.values()):
        return ALL_FROM_2
    M = max(e for _, e in ctx.conductor_primes)
    if any(kinds[p] is SplittingType.RAMIFIED and e == M for p, e in ctx.conductor_primes):
        return k * M + k // 2, M + Fraction(1, 2)
    return k * M, Fraction(M)


# ---------------------------------------------------------------------------
# Principality


def _solve_for_a(ctx: OrderContext, b: int, n: int) -> list[int]:
    """Integers a with a^2 + eps*a*b + eta*b^2 == n."""
    disc = (ctx.eps * b) ** 2 - 4 * (ctx.eta * b * b - n)
    if disc < 0:
        return []
    s = isqrt(disc)
    if s * s != disc:
        return []
    out = []
    for num in {-ctx.eps * b + s, -ctx.eps * b - s}:
        if num % 2 == 0:
            out.append(num // 2)
    return sorted(out)


def _search_generator(
    mon: LocalMonoid, t: Triple, b_values
) -> tuple[int, int] | None:
    ctx, p = mon.ctx, mon.p
    hnf = ideal_hnf(t, p)
    target = p ** norm_exponent(t)
    C = hnf[2]
    for b in b_values:
        if b % C:
            continue
        for n in (target, -target):
            for a in _solve_for_a(ctx, b, n):
                if in_lattice(hnf, a, b) and principal_hnf(ctx, a, b) == hnf:
                    return a, b
    return None


def principality_search_imaginary(mon: LocalMonoid, t: Triple) -> tuple[int, int] | None:
    """A generator a + b*tau of the ideal t, or None when t is not principal (d < 0 only).

    Since 4 N(a + b tau) = (2a + eps b)^2 - f^2 d_K b^2 >= f^2 |d_K| b^2, the search over b is
    finite and exhaustive.
    """
    ctx = mon.ctx
    if ctx.d >= 0:
        raise ArgumentError("exhaustive principality search needs an imaginary quadratic field")
    t = mon.check(t)
    n = mon.p ** norm_exponent(t)
    b_max = isqrt(4 * n // (ctx.f * ctx.f * -ctx.d_K))
    return _search_generator(mon, t, range(-b_max, b_max + 1))


def principality_search_real(
    mon: LocalMonoid, t: Triple, budget: int = DEFAULT_SEARCH_BUDGET
) -> tuple[int, int] | None:
    """Search |b| <= budget for a generator a + b*tau. None means "not found", not a proof."""
    if mon.ctx.d <= 0:
        raise ArgumentError("real search needs d > 0")
    t = mon.check(t)

    def b_values():
        yield 0
        for b in range(1, budget + 1):
            yield b
            yield -b

    return _search_generator(mon, t, b_values())


def tau_to_sqrt_d(ctx: OrderContext, a: int, b: int) -> tuple[Fraction, Fraction]:
    """(u, v) with a + b*tau = u + v*sqrt(d)."""
    s = 1 if ctx.d_K == ctx.d else 2
    return a + Fraction(b * ctx.eps, 2), Fraction(b * ctx.f * s, 2)


def generator_identity_check(
    d: int,
    f: int,
    u: int,
    v: int,
    target_norm: int,
    triple: Triple | None = None,
    p: int | None = None,
) -> bool:
    """Whether alpha = u + v sqrt(d) has |N(alpha)| == target_norm and lies in O_f.

    With `triple` and `p`, also require alpha * O_f to equal that p-primary ideal.
    """
    if abs(u * u - v * v * d) != target_norm:
        return False
    ctx = make_order(d, f)
    s = 1 if ctx.d_K == d else 2  # sqrt(d_K) = s * sqrt(d)
    # sqrt(d) = (2 tau - eps) / (f s)
    b = Fraction(2 * v, f * s)
    a = u - Fraction(v * ctx.eps, f * s)
    if a.denominator != 1 or b.denominator != 1:
        return False
    a_i, b_i = int(a), int(b)
    if triple is None:
        return True
    if p is None:
        raise ArgumentError("p is required together with triple")
    mon = LocalMonoid(ctx, p)
    hnf = ideal_hnf(mon.check(triple), p)
    return in_lattice(hnf, a_i, b_i) and principal_hnf(ctx, a_i, b_i) == hnf


# ---------------------------------------------------------------------------
# min Delta(O)


@dataclass
class MinDeltaVerdict:
    value: int | str  # 1, 2 or "unknown"
    certificates: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    generators: dict[str, tuple[int, int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "certificates": list(self.certificates),
            "warnings": list(self.warnings),
            "generators": {k: list(v) for k, v in self.generators.items()},
        }


def ramified_nonprincipal_certificate(ctx: OrderContext, p: int) -> str | None:
    """Sufficient arithmetic condition for all norm-p^3 atoms at a ramified p to be non-principal."""
    d, f = ctx.d, ctx.f
    if d < 2 or ctx.splitting(p) is not SplittingType.RAMIFIED or ctx.vf(p) != 1:
        return None
    if p % 4 == 1 and d % p == 0 and kronecker(d // p, p) == -1:
        return f"p={p} = 1 mod 4 and ({d // p}/{p}) = -1"
    for q, _ in factorize(d * f):
        if q % 4 == 1 and kronecker(p, q) == -1:
            return f"q={q} = 1 mod 4 divides d*f and ({p}/{q}) = -1"
    return None


def _inert_part_ok(ctx: OrderContext) -> bool:
    g = 1
    for p, _ in ctx.conductor_primes:
        if ctx.splitting(p) is SplittingType.INERT:
            g *= p
    return g == 1 or is_prime(g) or (g % 2 == 0 and is_prime(g // 2) and g // 2 != 2)


def min_delta_check(
    ctx: OrderContext,
    pic: int | None,
    h_K: int | None = None,
    search_budget: int = DEFAULT_SEARCH_BUDGET,
) -> MinDeltaVerdict:
    """Decide min Delta(O) in {1, 2} where the available certificates allow it.

    Presumes O is not half-factorial; that property is not decided here.
    """
    if ctx.f < 2:
        raise ArgumentError("needs f >= 2")
    verdict = MinDeltaVerdict("unknown")
    verdict.warnings.append("assumes O is not half-factorial (not decided by this check)")
    if classify(ctx).half_factorial:
        verdict.warnings.append("I(O) is half-factorial, so O may be half-factorial")
    if pic is None:
        verdict.certificates.append("no Picard data supplied")
        return verdict
    kinds = {p: ctx.splitting(p) for p, _ in ctx.conductor_primes}
    if pic != 2:
        verdict.value = 1
        verdict.certificates.append(f"|Pic(O)| = {pic} != 2")
        return verdict
    if any(e > 1 for _, e in ctx.conductor_primes):
        verdict.value = 1
        verdict.certificates.append(f"f = {ctx.f} is not squarefree")
        return verdict
    split = [p for p, k in kinds.items() if k is SplittingType.SPLIT]
    if split:
        verdict.value = 1
        verdict.certificates.append(f"split conductor primes {split}")
        return verdict
    ramified = [p for p, k in kinds.items() if k is SplittingType.RAMIFIED]
    if not ramified:
        verdict.value = 1
        verdict.certificates.append("no ramified conductor prime")
        return verdict
    verdict.certificates.append("structure: |Pic(O)| = 2, f squarefree, ramified and inert primes only")

    all_certified = True
    for p, kind in kinds.items():
        mon = LocalMonoid(ctx, p)
        atoms = [a for a in mon.atoms(mon.max_atom_exponent(), invertible_only=True) if a != P_O]
        if ctx.d < 0:
            for a in atoms:
                gen = principality_search_imaginary(mon, a)
                principal = gen is not None
                if gen is not None:
                    verdict.generators[f"p={p} {a}"] = gen
                verdict.certificates.append(
                    f"p={p}: atom {a} of norm {p}^{norm_exponent(a)} is "
                    + ("principal" if principal else "not principal")
                )
                if principal != (norm_exponent(a) == 2):
                    verdict.value = 1
            continue
        if kind is SplittingType.RAMIFIED:
            hit = ramified_nonprincipal_certificate(ctx, p)
            if hit:
                verdict.certificates.append(
                    f"p={p}: norm-p^3 atoms not principal ({hit}); norm-p^2 atoms then principal"
                )
                continue
            for a in atoms:
                if norm_exponent(a) != 3:
                    continue
                gen = principality_search_real(mon, a, search_budget)
                if gen is not None:
                    u, v = tau_to_sqrt_d(ctx, *gen)
                    text = f"p={p}: atom {a} of norm {p}^3 is generated by {gen[0]} + {gen[1]}*tau"
                    if u.denominator == 1 and v.denominator == 1:
                        if not generator_identity_check(ctx.d, ctx.f, int(u), int(v), p**3, a, p):
                            raise OracleMismatch(f"generator {gen} of {a} fails the identity check")
                        text += f" = {u} + {v}*sqrt({ctx.d}), confirmed by the identity check"
                    verdict.value = 1
                    verdict.generators[f"p={p} {a}"] = gen
                    verdict.certificates.append(text)
                    return verdict
            all_certified = False
            verdict.certificates.append(f"p={p}: no criterion and no generator within budget")
        else:
            if h_K == 2:
                verdict.certificates.append(
                    f"p={p} inert: |Pic(O)| = |Pic(O_K)| = 2, so all its atoms are principal"
                )
            else:
                all_certified = False
                verdict.certificates.append(f"p={p} inert: needs |Pic(O_K)| = 2 to certify")
    if verdict.value == 1:
        return verdict
    if all_certified:
        verdict.value = 2
        if ctx.d < 0:
            verdict.warnings.append("value 2 for an imaginary field contradicts the theory")
        if not _inert_part_ok(ctx):
            verdict.warnings.append("inert part of f is outside {1} u P u 2P")
    return verdict
