"""Exact-arithmetic quantum Weyl algebras, linear switches and link invariants."""

__version__ = "0.1.0"

from .rings import (
    QQ,
    BivariateRing,
    FractionField,
    LaurentRing,
    NonUnitError,
    PolynomialRing,
    PrimeField,
    RingError,
    RingMismatchError,
    frac_equal,
    laurent_canonicalize,
    poly_gcd,
    ring_arith,
)

__all__ = [
    "QQ",
    "BivariateRing",
    "FractionField",
    "LaurentRing",
    "NonUnitError",
    "PolynomialRing",
    "PrimeField",
    "RingError",
    "RingMismatchError",
    "frac_equal",
    "laurent_canonicalize",
    "poly_gcd",
    "ring_arith",
]
