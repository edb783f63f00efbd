"""Primary ideals of quadratic orders as integer triples, and their factorization invariants."""

from quadorder.arith import INF, ArgumentError, kronecker, rem, vp
from quadorder.local_monoid import IDENTITY, P_O, LocalMonoid, Triple
from quadorder.order import OrderContext, SplittingType, make_order

__all__ = [
    "INF",
    "ArgumentError",
    "kronecker",
    "rem",
    "vp",
    "IDENTITY",
    "P_O",
    "LocalMonoid",
    "Triple",
    "OrderContext",
    "SplittingType",
    "make_order",
]

__version__ = "0.1.0"
