"""Factorizations into atoms and the invariants derived from them.

Two independent enumerators are provided. `enumerate_factorizations` searches one target
depth-first. `FactorizationTable` builds every factorization set in a norm window bottom-up
from the atom-times-element products; window sweeps use it.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from quadorder.arith import ArgumentError
from quadorder.local_monoid import (
    IDENTITY,
    LocalMonoid,
    ResourceLimitError,
    Triple,
    atom_key,
    norm_exponent,
    normal_form,
)

__all__ = [
    "Factorization",
    "FactorizationSet",
    "FactorizationTable",
    "WindowReport",
    "enumerate_elements",
    "enumerate_factorizations",
    "length_set",
    "delta_of",
    "distance",
    "catenary_degree",
    "catenary_degree_prim",
    "window_sweep",
    "unions_closed_form",
    "length_bound",
    "ALL_FROM_2",
]

Factorization = tuple[Triple, ...]
"""A multiset of atoms, stored sorted by (norm exponent, y, z)."""

MAX_FACTORIZATIONS = 200_000


def canonical(atoms: Iterable[Triple]) -> Factorization:
    return tuple(sorted(atoms, key=atom_key))


@dataclass(frozen=True)
class FactorizationSet:
    target: Triple
    factorizations: tuple[Factorization, ...]
    restricted_to_invertible: bool = False

    def __len__(self) -> int:
        return len(self.factorizations)

    def __iter__(self):
        return iter(self.factorizations)


def enumerate_elements(mon: LocalMonoid, bound: int, invertible_only: bool = False) -> list[Triple]:
    return mon.elements(bound, invertible_only)


def enumerate_factorizations(
    target: Triple, mon: LocalMonoid, invertible_only: bool = False
) -> FactorizationSet:
    """All multisets of atoms whose product is `target`.

    Depth-first over atoms in canonical order with non-decreasing choice. A branch is cut when
    the summed atom norm exponents exceed that of the target (norms multiply at least), when
    the p-power part of the partial product exceeds the target's, or when the length exceeds
    n + 1 for the normal form (pO)^n * v of the target.
    """
    target = mon.check(target)
    if target == IDENTITY:
        raise ArgumentError("the identity has only the empty factorization")
    if invertible_only and not mon.is_invertible(target):
        raise ArgumentError(f"{target} is not invertible")
    ne = norm_exponent(target)
    n, _ = normal_form(target)
    max_len = n + 1
    atoms = mon.atoms(ne, invertible_only)
    weights = [norm_exponent(a) for a in atoms]
    found: list[Factorization] = []
    chosen: list[Triple] = []

    def dfs(start: int, partial: Triple, used: int) -> None:
        if partial == target:
            found.append(tuple(chosen))
            if len(found) > MAX_FACTORIZATIONS:
                raise ResourceLimitError(f"more than {MAX_FACTORIZATIONS} factorizations")
            return
        if len(chosen) == max_len:
            return
        for i in range(start, len(atoms)):
            w = used + weights[i]
            if w > ne:
                break
            nxt = mon.mul(partial, atoms[i])
            if norm_exponent(nxt) > ne or nxt.x > target.x:
                continue
            chosen.append(atoms[i])
            dfs(i, nxt, w)
            chosen.pop()

    dfs(0, IDENTITY, 0)
    return FactorizationSet(target, tuple(sorted(found)), invertible_only)


def length_set(fs: FactorizationSet | Iterable[Factorization]) -> list[int]:
    return sorted({len(z) for z in fs})


def delta_of(lengths: Sequence[int]) -> set[int]:
    ls = sorted(set(lengths))
    return {b - a for a, b in zip(ls, ls[1:])}


def distance(z1: Factorization, z2: Factorization) -> int:
    """max(|z1 - gcd|, |z2 - gcd|) for multisets sorted canonically."""
    i = j = common = 0
    k1, k2 = [atom_key(a) for a in z1], [atom_key(a) for a in z2]
    while i < len(k1) and j < len(k2):
        if k1[i] == k2[j]:
            common += 1
            i += 1
            j += 1
        elif k1[i] < k2[j]:
            i += 1
        else:
            j += 1
    return max(len(z1), len(z2)) - common


class _DisjointSet:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.components = n

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb
            self.components -= 1


def catenary_degree(fs: FactorizationSet | Sequence[Factorization]) -> int:
    """Least N such that the graph joining factorizations at distance <= N is connected.

    Two factorizations are within distance N exactly when deleting at most N atoms from each
    leaves the same multiset, so edges are found by bucketing all such deletions.
    """
    zs = list(fs)
    if len(zs) <= 1:
        return 0
    dsu = _DisjointSet(len(zs))
    buckets: dict[Factorization, int] = {}
    longest = max(len(z) for z in zs)
    for N in range(1, longest + 1):
        for idx, z in enumerate(zs):
            if N > len(z):
                continue
            for drop in set(combinations(range(len(z)), N)):
                rest = tuple(a for i, a in enumerate(z) if i not in drop)
                prev = buckets.setdefault(rest, idx)
                if prev != idx:
                    dsu.union(prev, idx)
        if dsu.components == 1:
            return N
    raise AssertionError("factorizations of one element are always connected at their max length")


def catenary_degree_prim(fs: FactorizationSet | Sequence[Factorization]) -> int:
    """Bottleneck of a minimum spanning tree on the complete distance graph (quadratic)."""
    zs = list(fs)
    if len(zs) <= 1:
        return 0
    best = [distance(zs[0], z) for z in zs]
    in_tree = [False] * len(zs)
    in_tree[0] = True
    bottleneck = 0
    for _ in range(len(zs) - 1):
        i = min((k for k in range(len(zs)) if not in_tree[k]), key=best.__getitem__)
        in_tree[i] = True
        bottleneck = max(bottleneck, best[i])
        for k in range(len(zs)):
            if not in_tree[k]:
                best[k] = min(best[k], distance(zs[i], zs[k]))
    return bottleneck


class FactorizationTable:
    """Factorization sets of every element with norm exponent <= bound.

    Z(c) is the union over products c = a * b (a an atom) of a joined to each member of Z(b);
    since N(a) >= p, b lies strictly lower in the window, so one pass in norm order suffices.
    """

    def __init__(self, mon: LocalMonoid, bound: int, invertible_only: bool = False) -> None:
        self.mon = mon
        self.bound = bound
        self.invertible_only = invertible_only
        self.elements = mon.elements(bound, invertible_only)
        self.atoms = mon.atoms(bound, invertible_only)
        preds: dict[Triple, list[tuple[Triple, Triple]]] = defaultdict(list)
        for a in self.atoms:
            room = bound - norm_exponent(a)
            for b in self.elements:
                if norm_exponent(b) > room:
                    continue
                c = mon.mul(a, b)
                if norm_exponent(c) <= bound:
                    preds[c].append((a, b))
        table: dict[Triple, frozenset[Factorization]] = {IDENTITY: frozenset({()})}
        total = 0
        for c in sorted(self.elements, key=norm_exponent):
            if c == IDENTITY:
                continue
            zs: set[Factorization] = set()
            for a, b in preds[c]:
                for z in table[b]:
                    zs.add(canonical((a, *z)))
            total += len(zs)
            if total > 50 * MAX_FACTORIZATIONS:
                raise ResourceLimitError("window holds too many factorizations")
            table[c] = frozenset(zs)
        self._table = table

    def __getitem__(self, t: Triple) -> FactorizationSet:
        return FactorizationSet(t, tuple(sorted(self._table[t])), self.invertible_only)

    def items(self):
        for t in self.elements:
            if t != IDENTITY:
                yield t, self._table[t]


ALL_FROM_2 = "N>=2"


def length_bound(k: int, N: int | None) -> int | None:
    """Upper bound floor(kN/2) on lengths l of an element that is also a product of k atoms."""
    return None if N is None else k * N // 2


def unions_closed_form(mon: LocalMonoid, ell: int) -> tuple[int, int] | str:
    """U_ell restricted to [ell, inf): an interval (ell, floor(ell N / 2)), or all of N>=2."""
    if ell < 2:
        raise ArgumentError("ell must be at least 2")
    N = mon.max_atom_exponent()
    if N is None:
        return ALL_FROM_2
    return ell, ell * N // 2


@dataclass
class WindowReport:
    label: str
    norm_bound: int
    invertible_only: bool
    element_count: int
    delta: set[int] = field(default_factory=set)
    ca: set[int] = field(default_factory=set)
    catenary: int = 0
    unions: dict[int, set[int]] = field(default_factory=dict)
    rho: dict[int, int] = field(default_factory=dict)
    max_atom_exponent: int | None = None
    length_bound: dict[int, int | None] = field(default_factory=dict)
    window_complete: dict[int, bool] = field(default_factory=dict)
    witnesses: dict[str, list[Triple]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "norm_bound": self.norm_bound,
            "invertible_only": self.invertible_only,
            "element_count": self.element_count,
            "delta": sorted(self.delta),
            "ca": sorted(self.ca),
            "catenary": self.catenary,
            "unions": {k: sorted(v) for k, v in self.unions.items()},
            "rho": dict(self.rho),
            "max_atom_exponent": self.max_atom_exponent,
            "length_bound": dict(self.length_bound),
            "window_complete": dict(self.window_complete),
        }


def window_sweep(
    mon: LocalMonoid,
    bound: int,
    invertible_only: bool = False,
    ks: Iterable[int] = (),
    table: FactorizationTable | None = None,
) -> WindowReport:
    """Delta, Ca and U_k over every element of norm exponent <= bound.

    For each k, the report also records whether the window reaches the length bound
    floor(kN/2); when it does not, U_k in the window is only a lower estimate.
    """
    if table is None:
        table = FactorizationTable(mon, bound, invertible_only)
    ks = sorted(set(ks))
    N = mon.max_atom_exponent()
    report = WindowReport(
        label=str(mon),
        norm_bound=bound,
        invertible_only=invertible_only,
        element_count=len(table.elements),
        max_atom_exponent=N,
    )
    unions: dict[int, set[int]] = {k: set() for k in ks}
    by_delta: dict[int, list[Triple]] = {}
    by_ca: dict[int, list[Triple]] = {}
    for t, zs in table.items():
        lengths = sorted({len(z) for z in zs})
        for g in delta_of(lengths):
            report.delta.add(g)
            by_delta.setdefault(g, []).append(t)
        c = catenary_degree(list(zs))
        if c > 0:
            report.ca.add(c)
            by_ca.setdefault(c, []).append(t)
        for k in ks:
            if k in lengths:
                unions[k].update(lengths)
    report.catenary = max(report.ca, default=0)
    report.unions = unions
    for k in ks:
        report.rho[k] = max(unions[k], default=0)
        report.length_bound[k] = length_bound(k, N)
        bound_k = report.length_bound[k]
        report.window_complete[k] = bound_k is not None and report.rho[k] >= bound_k
    report.witnesses = {
        **{f"delta={g}": ts[:3] for g, ts in sorted(by_delta.items())},
        **{f"ca={c}": ts[:3] for c, ts in sorted(by_ca.items())},
    }
    return report
