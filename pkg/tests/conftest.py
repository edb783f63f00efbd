from __future__ import annotations

import math
from functools import lru_cache

import pytest
from hypothesis import settings

from quadorder.local_monoid import LocalMonoid, Triple

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")

# (d, f, p) spanning inert, split and ramified primes with vp(f) in {1, 2, 3}.
CONTEXTS: list[tuple[int, int, int]] = [
    (-1, 2, 2),
    (-1, 3, 3),
    (-1, 5, 5),
    (-2, 2, 2),
    (-2, 4, 2),
    (-2, 3, 3),
    (-3, 2, 2),
    (-3, 9, 3),
    (-5, 6, 3),
    (-7, 2, 2),
    (-7, 8, 2),
    (-11, 3, 3),
    (2, 2, 2),
    (2, 7, 7),
    (3, 6, 2),
    (3, 6, 3),
    (5, 2, 2),
    (5, 9, 3),
    (5, 25, 5),
    (6, 12, 3),
    (7, 4, 2),
    (10, 5, 5),
    (13, 3, 3),
    (17, 4, 2),
    (17, 2, 2),
    (-15, 8, 2),
]

SMALL_CONTEXTS = CONTEXTS[::3]


def context_id(c: tuple[int, int, int]) -> str:
    return "d{}_f{}_p{}".format(*c)


@lru_cache(maxsize=None)
def monoid(d: int, f: int, p: int) -> LocalMonoid:
    return LocalMonoid.of(d, f, p)


def window_bound(p: int, target: int = 20, max_mod: int = 2**16) -> int:
    """Largest norm exponent <= target whose enumeration modulus stays small."""
    return min(target, int(math.log(max_mod, p)))


@lru_cache(maxsize=None)
def pool(d: int, f: int, p: int, bound: int, invertible_only: bool = False) -> tuple[Triple, ...]:
    return tuple(monoid(d, f, p).elements(bound, invertible_only))


@pytest.fixture(params=CONTEXTS, ids=context_id)
def ctx_triple(request) -> tuple[int, int, int]:
    return request.param


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
