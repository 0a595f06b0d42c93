"""Exact rational helpers for formulas that mix logarithms with floors.

Ceiling/floor boundary cases must never flip because a float rounded the
wrong way, so every floor-of-log here is seeded with a float estimate and
then settled by exact rational power comparisons.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and fraction strings like '3/4' to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        # Floats are accepted for convenience but converted exactly, so a
        # value like 0.1 carries its binary representation with it.
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def log_float(x: Rational) -> float:
    """Natural log of a positive rational, safe for huge numerators."""
    f = as_fraction(x)
    if f <= 0:
        raise ValueError(f"log of non-positive value {f}")
    return math.log(f.numerator) - math.log(f.denominator)


def floor_log(x: Rational, base: Rational) -> int:
    """Exact floor(log_base(x)) for rational x > 0 and rational base > 1.

    A float gives the first candidate; exact comparisons against rational
    powers of the base settle it.
    """
    xf = as_fraction(x)
    bf = as_fraction(base)
    if xf <= 0:
        raise ValueError(f"floor_log of non-positive value {xf}")
    if bf <= 1:
        raise ValueError(f"floor_log base must exceed 1, got {bf}")
    k = int(log_float(xf) / log_float(bf))
    while bf ** k > xf:
        k -= 1
    while bf ** (k + 1) <= xf:
        k += 1
    return k


def ceil_log(x: Rational, base: Rational) -> int:
    """Exact ceil(log_base(x)), same contract as floor_log."""
    k = floor_log(x, base)
    if as_fraction(base) ** k == as_fraction(x):
        return k
    return k + 1


def floor_log_log(n: int, base: int) -> int:
    """Exact floor(log_base(log_base(n))) for integers n >= base >= 2.

    Settled without floats: k is the answer iff base^(base^k) <= n <
    base^(base^(k+1)), and those towers are exact integers.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if n < base:
        raise ValueError(f"need n >= base for a non-negative value, got n={n}")
    k = 0
    while base ** (base ** (k + 1)) <= n:
        k += 1
    return k


def pow_at_least(value: int, exponent: Fraction, base: int) -> bool:
    """Exact test  value >= base**exponent  for integer value >= 0.

    exponent is rational a/b, so the test is value**b >= base**a carried out
    in big integers (both sides stay integral after clearing denominators).
    """
    if value < 0:
        raise ValueError("value must be non-negative")
    e = as_fraction(exponent)
    a, b = e.numerator, e.denominator
    if value == 0:
        return False  # base**e > 0 always
    if a >= 0:
        return value ** b >= base ** a
    # base**e < 1: compare value**b * base**(-a) >= 1, trivially true.
    return True
