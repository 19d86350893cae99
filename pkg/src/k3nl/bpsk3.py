"""Reduced K3 BPS counts r_{g,h} and the Gopakumar-Vafa multiple-cover transform."""
from __future__ import annotations

import logging
import warnings
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .qseries import euler_product

__all__ = [
    "RTable",
    "yau_zaslow",
    "genus1",
    "kkv_table",
    "kkv_y_coefficients",
    "laurent_to_z",
    "gv_coefficient",
    "gv_transform",
    "gv_invert",
    "NonIntegralBPSWarning",
]

log = logging.getLogger(__name__)

RTable = dict  # (g, h) -> int


class NonIntegralBPSWarning(UserWarning):
    pass


def yau_zaslow(hmax: int) -> list[int]:
    """r_{0,h} for h = 0..hmax from prod (1 - q^n)^(-24)."""
    s = euler_product(hmax + 1, -24)
    return [int(s.coeff(h)) for h in range(hmax + 1)]


def genus1(h: int) -> int:
    """r_{1,h} = -(h/12) r_{0,h}."""
    if h < 0:
        raise ValueError("h must be nonnegative")
    val = Fraction(-h, 12) * yau_zaslow(h)[h]
    if val.denominator != 1:
        raise ArithmeticError(f"r_(1,{h}) = {val} is not integral")
    return int(val)


def kkv_y_coefficients(hmax: int) -> list[dict[int, int]]:
    """q^h coefficients of prod 1/((1-q^n)^20 (1-yq^n)^2 (1-q^n/y)^2) as Laurent polynomials in y."""
    c: list[dict[int, int]] = [dict() for _ in range(hmax + 1)]
    c[0][0] = 1

    def divide(n: int, ypow: int, times: int) -> None:
        # multiply in place by 1/(1 - y^ypow q^n), `times` times
        for _ in range(times):
            for m in range(n, hmax + 1):
                src = c[m - n]
                if not src:
                    continue
                dst = c[m]
                for k, v in src.items():
                    dst[k + ypow] = dst.get(k + ypow, 0) + v

    for n in range(1, hmax + 1):
        divide(n, 0, 20)
        divide(n, 1, 2)
        divide(n, -1, 2)
    return [{k: v for k, v in p.items() if v} for p in c]


def laurent_to_z(poly: Mapping[int, int]) -> dict[int, int]:
    """Rewrite a symmetric Laurent polynomial in y as a polynomial in z = y - 2 + 1/y."""
    rest = {k: Fraction(v) for k, v in poly.items() if v}
    out: dict[int, int] = {}
    while rest:
        top = max(rest)
        if top < 0:
            raise ArithmeticError(f"Laurent polynomial is not symmetric: {dict(poly)}")
        c = rest[top]
        if rest.get(-top, 0) != c:
            raise ArithmeticError(f"Laurent polynomial is not symmetric: {dict(poly)}")
        if c.denominator != 1:
            raise ArithmeticError("non-integral coefficient during basis change")
        out[top] = int(c)
        # subtract c * z^top, z^m = sum_j (-1)^(m-j) C(2m, m-j) y^j  (|j| <= m)
        from math import comb

        for j in range(-top, top + 1):
            coef = (-1) ** (top - j) * comb(2 * top, top - j)
            v = rest.get(j, 0) - c * coef
            if v:
                rest[j] = v
            else:
                rest.pop(j, None)
    return out


def kkv_table(gmax: int, hmax: int) -> RTable:
    """r_{g,h} for g <= gmax, h <= hmax from the KKV product."""
    if gmax > hmax:
        raise ValueError("gmax must not exceed hmax")
    table: RTable = {}
    for h, poly in enumerate(kkv_y_coefficients(hmax)):
        zpoly = laurent_to_z(poly)
        for g in range(gmax + 1):
            table[(g, h)] = (-1) ** g * zpoly.get(g, 0)
    return table


# -- Gopakumar-Vafa transform -------------------------------------------------

@lru_cache(maxsize=None)
def _sinc_power(m: int, jmax: int) -> tuple[Fraction, ...]:
    """Coefficients of x^(2j), j <= jmax, in (sin x / x)^m for any integer m."""
    from math import factorial

    base = [Fraction((-1) ** j, factorial(2 * j + 1)) for j in range(jmax + 1)]

    def mult(a, b):
        out = [Fraction(0)] * (jmax + 1)
        for i, ai in enumerate(a):
            if ai:
                for j in range(jmax + 1 - i):
                    out[i + j] += ai * b[j]
        return out

    if m < 0:
        inv = [Fraction(0)] * (jmax + 1)
        inv[0] = Fraction(1)
        for n in range(1, jmax + 1):
            inv[n] = -sum(base[j] * inv[n - j] for j in range(1, n + 1))
        base, m = inv, -m
    result = [Fraction(1)] + [Fraction(0)] * jmax
    for _ in range(m):
        result = mult(result, base)
    return tuple(result)


def gv_coefficient(g_bps: int, g: int, k: int) -> Fraction:
    """lambda^(2g-2) coefficient of lambda^(2g'-2) (1/k) (sin(k lambda/2)/(lambda/2))^(2g'-2)."""
    if g < g_bps:
        return Fraction(0)
    j = g - g_bps
    s = _sinc_power(2 * g_bps - 2, j)[j]
    return Fraction(k) ** (2 * g_bps - 3) * Fraction(k, 2) ** (2 * j) * s


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def gv_transform(bps: Mapping[tuple[int, int], Fraction], gmax: int, dmax: int) -> dict:
    """Gromov-Witten invariants N_{g,d} from BPS counts n_{g,d}."""
    out = {}
    for d in range(1, dmax + 1):
        for g in range(gmax + 1):
            total = Fraction(0)
            for k in _divisors(d):
                for gp in range(g + 1):
                    n = bps.get((gp, d // k), 0)
                    if n:
                        total += gv_coefficient(gp, g, k) * n
            out[(g, d)] = total
    return out


def gv_invert(gw: Mapping[tuple[int, int], Fraction], gmax: int, dmax: int, strict: bool = False) -> dict:
    """BPS counts from Gromov-Witten invariants, by induction on d then g.

    Non-integral results raise a :class:`NonIntegralBPSWarning` (an error
    when ``strict``).
    """
    bps: dict = {}
    for d in range(1, dmax + 1):
        for g in range(gmax + 1):
            total = Fraction(gw.get((g, d), 0))
            for k in _divisors(d):
                for gp in range(g + 1):
                    if k == 1 and gp == g:
                        continue
                    n = bps.get((gp, d // k), 0)
                    if n:
                        total -= gv_coefficient(gp, g, k) * n
            bps[(g, d)] = total
            if total.denominator != 1:
                msg = f"n_({g},{d}) = {total} is not an integer"
                if strict:
                    raise ArithmeticError(msg)
                warnings.warn(msg, NonIntegralBPSWarning, stacklevel=2)
    return bps
