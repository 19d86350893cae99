"""Dimension of the span of Noether-Lefschetz divisors on the moduli of degree-l K3 surfaces."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

__all__ = ["gauss_sum", "fractional_part_sum", "integral_count", "bruinier_value", "bruinier_rank"]


def gauss_sum(a: int, b: int) -> complex:
    """G(a, b) = sum_{k=0}^{b-1} exp(-2 pi i a k^2 / b)."""
    if b < 1:
        raise ValueError("modulus must be positive")
    # reduce a k^2 mod b first so the phases stay small
    return sum(cmath.exp(-2j * cmath.pi * ((a * k * k) % b) / b) for k in range(b))


def fractional_part_sum(l: int) -> Fraction:
    return sum((Fraction(k * k, 2 * l) % 1 for k in range(l // 2 + 1)), Fraction(0))


def integral_count(l: int) -> int:
    return sum(1 for k in range(l // 2 + 1) if (k * k) % (2 * l) == 0)


def bruinier_value(l: int) -> float:
    if l < 2 or l % 2:
        raise ValueError("l must be even and at least 2")
    val = 1 + 31 / 24 + 31 * l / 48
    val -= gauss_sum(2, 2 * l).real / (8 * math.sqrt(l))
    phase = cmath.exp(-2j * cmath.pi * 19 / 24)
    val -= (phase * (gauss_sum(1, 2 * l) + gauss_sum(-3, 2 * l))).real / (6 * math.sqrt(3 * l))
    val -= float(fractional_part_sum(l))
    val -= integral_count(l)
    return val


def bruinier_rank(l: int, tol: float = 1e-6) -> int:
    """Rounded value of the closed formula; raises if it is not within ``tol`` of an integer."""
    val = bruinier_value(l)
    n = round(val)
    if abs(val - n) >= tol:
        raise ArithmeticError(f"formula value {val!r} for l={l} is not near an integer")
    return n
