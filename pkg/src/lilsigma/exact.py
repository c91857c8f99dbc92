"""Exact scalar layer: reduced rationals and the elementary number theory.

Every scalar used by the evaluator and the certifier is a
:class:`fractions.Fraction`, which is normalized to lowest terms after each
operation. Nothing in this module rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

from sympy.ntheory import n_order

Rational = Fraction

# Moduli below this are handled by factoring (via sympy); larger ones iterate.
FACTOR_LIMIT = 2**64
DEFAULT_ITERATION_CAP = 10**6


class OrderError(ValueError):
    """Raised when a multiplicative order does not exist or cannot be found."""


@dataclass(frozen=True)
class RatioPair:
    """Coprime integers ``p > q >= 1`` describing the ratio ``p/q``."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if not (isinstance(self.p, int) and isinstance(self.q, int)):
            raise TypeError("p and q must be integers")
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        if self.p <= self.q:
            raise ValueError(f"need p > q, got p={self.p}, q={self.q}")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} are not coprime")

    @property
    def product(self) -> int:
        return self.p * self.q

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"n/d"`` strings to :class:`Fraction`.

    Floats are refused: converting one silently would defeat the point of
    the exact layer.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot treat {type(x).__name__} as an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"`` or a plain integer string."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        num, den = int(num), int(den)
        if den == 0:
            raise ValueError("zero denominator")
        return Fraction(num, den)
    return Fraction(int(text))


def format_rational(x: Fraction) -> str:
    """Serialize as ``"num/den"`` (integers as plain strings)."""
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def frac(x) -> Fraction:
    """Fractional part ``x - floor(x)``, always in ``[0, 1)``."""
    x = as_rational(x)
    return Fraction(x.numerator % x.denominator, x.denominator)


def _check_unit(x: Fraction, name: str) -> None:
    if not 0 <= x < 1:
        raise ValueError(f"{name}={x} is outside [0, 1)")


def V(x, y) -> Fraction:
    """Covariance kernel ``min(x, y) - x*y`` on ``[0, 1)^2``."""
    x, y = as_rational(x), as_rational(y)
    _check_unit(x, "x")
    _check_unit(y, "y")
    return min(x, y) - x * y


def v(x) -> Fraction:
    """Diagonal kernel ``<x>(1 - <x>)`` for any rational ``x``."""
    f = frac(x)
    return f * (1 - f)


def mult_order(base: int, modulus: int, *, cap: int = DEFAULT_ITERATION_CAP) -> int:
    """Least ``n >= 1`` with ``base**n == 1 (mod modulus)``.

    Moduli below 2**64 go through factoring; larger ones are searched by
    iteration and give up after ``cap`` steps with :class:`OrderError`.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if math.gcd(base, modulus) != 1:
        raise OrderError(f"gcd({base}, {modulus}) != 1: no multiplicative order")
    base %= modulus
    if base == 1:
        return 1
    if modulus < FACTOR_LIMIT:
        return int(n_order(base, modulus))
    acc = base
    for n in range(1, cap + 1):
        if acc == 1:
            return n
        acc = acc * base % modulus
    raise OrderError(f"order of {base} mod {modulus} exceeds iteration cap {cap}")


def signed_order(q: int, m: int, *, cap: int = DEFAULT_ITERATION_CAP) -> int:
    """Least ``n >= 1`` with ``q**n == +1 or -1 (mod m)``."""
    order = mult_order(q, m, cap=cap)
    if order % 2 == 0 and pow(q, order // 2, m) == m - 1:
        return order // 2
    return order
