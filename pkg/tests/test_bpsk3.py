import random
import warnings
from fractions import Fraction

import pytest
import sympy as sp

from k3nl.bpsk3 import (
    NonIntegralBPSWarning,
    genus1,
    gv_coefficient,
    gv_invert,
    gv_transform,
    kkv_table,
    kkv_y_coefficients,
    laurent_to_z,
    yau_zaslow,
)
from k3nl.qseries import eta24, invert

PRINTED = {
    (0, 0): 1, (0, 1): 24, (0, 2): 324, (0, 3): 3200, (0, 4): 25650,
    (1, 1): -2, (1, 2): -54, (1, 3): -800, (1, 4): -8550,
    (2, 2): 3, (2, 3): 88, (2, 4): 1401,
    (3, 3): -4, (3, 4): -126,
    (4, 4): 5,
}


def test_yau_zaslow():
    assert yau_zaslow(4) == [1, 24, 324, 3200, 25650]
    s = invert(eta24(12)).shift(1)
    assert yau_zaslow(10) == [s.coeff(n) for n in range(11)]


def test_genus1():
    assert genus1(0) == 0
    assert [genus1(h) for h in (1, 4)] == [-2, -8550]


def test_printed_table():
    t = kkv_table(4, 4)
    for k, v in PRINTED.items():
        assert t[k] == v
    assert all(t[(g, h)] == 0 for g in range(5) for h in range(g))


def test_diagonal():
    t = kkv_table(8, 8)
    assert [t[(g, g)] for g in range(9)] == [(-1) ** g * (g + 1) for g in range(9)]
    assert [t[(0, h)] for h in range(9)] == yau_zaslow(8)
    assert [t[(1, h)] for h in range(9)] == [genus1(h) for h in range(9)]


def test_kkv_against_sympy_z_route():
    # substitute y = root of z = y - 2 + 1/y directly: expand each q^h
    # coefficient in powers of (y - 1)^2 / y and read the z^g part
    y, z = sp.symbols("y z")
    hmax = 4
    polys = kkv_y_coefficients(hmax)
    for h, poly in enumerate(polys):
        expr = sp.expand(sum(c * y**k for k, c in poly.items()) * y ** hmax)
        # z^g y^hmax = (y - 1)^(2g) y^(hmax - g); solve for coefficients by matching
        cs = sp.symbols(f"c0:{hmax + 1}")
        guess = sum(cs[g] * (y - 1) ** (2 * g) * y ** (hmax - g) for g in range(hmax + 1))
        sol = sp.solve(sp.Poly(sp.expand(guess - expr), y).all_coeffs(), cs)
        for g in range(hmax + 1):
            assert (-1) ** g * sol[cs[g]] == PRINTED.get((g, h), 0)


def test_laurent_to_z_rejects_asymmetric():
    with pytest.raises(ArithmeticError):
        laurent_to_z({1: 1})
    assert laurent_to_z({1: 1, 0: -2, -1: 1}) == {1: 1}


def test_gv_leading_coefficients():
    assert gv_coefficient(0, 0, 3) == Fraction(1, 27)
    assert gv_coefficient(2, 2, 1) == 1
    assert gv_coefficient(2, 1, 1) == 0
    # genus 0 multiple covers: N_{0,2} = n_{0,2} + n_{0,1} / 8
    gw = gv_transform({(0, 1): 640, (0, 2): 10032}, 0, 2)
    assert gw[(0, 2)] == 10032 + Fraction(640, 8)


def sympy_gw(bps, gmax, dmax):
    lam = sp.symbols("lam")
    out = {}
    for d in range(1, dmax + 1):
        expr = 0
        for k in range(1, d + 1):
            if d % k:
                continue
            for gp in range(gmax + 1):
                n = bps.get((gp, d // k), 0)
                if n:
                    expr += sp.Rational(n) / k * (2 * sp.sin(k * lam / 2)) ** (2 * gp - 2)
        ser = sp.series(expr * lam**2, lam, 0, 2 * gmax + 2).removeO()
        for g in range(gmax + 1):
            out[(g, d)] = Fraction(str(sp.nsimplify(ser.coeff(lam, 2 * g))))
    return out


def test_gv_transform_against_symbolic_expansion():
    rng = random.Random(3)
    bps = {(g, d): rng.randint(-50, 50) for g in range(4) for d in range(1, 7)}
    ours = gv_transform(bps, 3, 6)
    theirs = sympy_gw(bps, 3, 6)
    assert ours == theirs


def test_gv_round_trip():
    rng = random.Random(5)
    bps = {(g, d): Fraction(rng.randint(-10**6, 10**6)) for g in range(4) for d in range(1, 9)}
    assert gv_invert(gv_transform(bps, 3, 8), 3, 8, strict=True) == bps


def test_non_integral_warning():
    gw = {(0, 1): Fraction(1, 2)}
    with pytest.warns(NonIntegralBPSWarning):
        gv_invert(gw, 0, 1)
    with pytest.raises(ArithmeticError):
        gv_invert(gw, 0, 1, strict=True)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gv_invert({(0, 1): 640, (0, 2): Fraction(10112)}, 0, 2)
