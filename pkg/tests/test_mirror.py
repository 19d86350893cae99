from fractions import Fraction

import pytest
import sympy as sp

from k3nl import mirror
from k3nl.mirror import (
    BiSeries,
    LogCancellationError,
    LogSeries,
    compose,
    fiber_bps,
    fiber_gw,
    hyper_F,
    hyper_G,
    i_functions,
    invert_map,
    mirror_map,
    potential,
)

F = Fraction

N_0D = [640, 10032, 288384, 10979984, 495269504, 24945542832, 1357991852672,
        78313183960464, 4721475965186688, 294890295345814704]


def test_hypergeometric_coefficients():
    Fs = hyper_F(2, 2)
    assert (Fs[0, 0], Fs[1, 0], Fs[1, 1]) == (1, 24, 720)
    assert hyper_G(1, 0, 2, 2)[1, 0] == 24
    assert hyper_G(4, 2, 2, 2)[1, 0] == 50
    assert all(hyper_G(a, b, 2, 2)[0, 0] == 0 for a, b in ((1, 0), (0, 1), (4, 2)))


H1, H2 = sp.symbols("H1 H2")


def _truncate(expr):
    """Drop monomials outside H1^4 = H2^2 = 0."""
    poly = sp.Poly(sp.expand(expr), H1, H2)
    return sum(c * H1**i * H2**j for (i, j), c in poly.terms() if i <= 3 and j <= 1)


def sympy_hyper(d1, d2):
    """(d1, d2) summand expanded with sympy's own one-variable series."""
    acc = sp.Integer(1)
    for r in range(0, 4 * d1 + 2 * d2 + 1):
        acc = _truncate(acc * (4 * H1 + 2 * H2 + r))
    for r in range(1, d1 + 1):
        acc = _truncate(acc * sp.series((H1 + r) ** -4, H1, 0, 4).removeO())
    for r in range(1, d2 + 1):
        acc = _truncate(acc * sp.series((H2 + r) ** -2, H2, 0, 2).removeO())
    poly = sp.Poly(acc, H1, H2)
    return {ij: F(str(c)) for ij, c in poly.terms()}


def test_I_functions_against_expansion_oracle():
    I = i_functions(3, 2)
    for d1 in range(4):
        for d2 in range(3):
            want = sympy_hyper(d1, d2)
            for i in range(4):
                for j in range(2):
                    assert I[i, j].get(0, 0)[d1, d2] == want.get((i, j), 0), (i, j, d1, d2)


def test_I00_vanishes_and_I10_is_4F():
    I = i_functions(4, 2)
    assert all(s.is_zero() for s in I[0, 0].coeffs.values())
    assert set(I[1, 0].coeffs) == {(0, 0)}
    assert I[1, 0].get(0, 0) == hyper_F(4, 2).scale(4)
    # log-degree bound: the t1^a t2^b coefficient of I_{i,j} needs a <= i, b <= j
    for (i, j), ls in I.parts.items():
        assert all(a <= i and b <= j for a, b in ls.coeffs)


def test_mirror_map_leading_terms():
    mm = mirror_map(3, 1)
    assert mm.correction1[0, 0] == 0 and mm.correction2[0, 0] == 0
    assert mm.correction1[1, 0] == 104
    assert mm.Q1[1, 0] == 1 and mm.Q1[2, 0] == 104
    q1, _ = invert_map(mm.Q1, mm.Q2)
    assert q1[1, 0] == 1 and q1[2, 0] == -104


def test_identity_inverts_to_identity():
    x, y = BiSeries.var(4, 2, 1), BiSeries.var(4, 2, 2)
    q1, q2 = invert_map(x, y)
    assert q1 == x and q2 == y


@pytest.mark.parametrize("d1,d2", [(5, 2), (6, 0), (3, 3)])
def test_map_inversion_round_trip(d1, d2):
    mm = mirror_map(d1, d2)
    q1, q2 = invert_map(mm.Q1, mm.Q2)
    assert compose(mm.Q1, q1, q2) == BiSeries.var(d1, d2, 1)
    assert compose(mm.Q2, q1, q2) == BiSeries.var(d1, d2, 2)
    Q1, Q2 = mm.Q1, mm.Q2
    assert compose(q1, Q1, Q2) == BiSeries.var(d1, d2, 1)


def test_bi_series_ring():
    a = BiSeries(3, 2, {(0, 0): 2, (1, 0): F(1, 3), (1, 1): -5})
    b = BiSeries(3, 2, {(0, 0): -1, (2, 1): 7})
    assert a * b == b * a
    assert (a * a.inverse()) == BiSeries.const(3, 2)
    z = BiSeries(3, 2, {(1, 0): 1, (0, 1): 2})
    assert z.exp() * (-z).exp() == BiSeries.const(3, 2)


def test_log_cancellation():
    P = potential(4, 2)
    assert P.classical == {(3, 0): F(1, 3), (2, 1): F(2)}
    assert P.instanton[1, 0] == 640


def test_log_cancellation_detects_breakage(monkeypatch):
    real = mirror.mirror_map

    def skewed(d1, d2):
        mm = real(d1, d2)
        return mirror.MirrorMap(mm.correction1 + BiSeries(d1, d2, {(1, 0): 1}), mm.correction2, mm.Q1, mm.Q2)

    monkeypatch.setattr(mirror, "mirror_map", skewed)
    with pytest.raises(LogCancellationError):
        potential(3, 1)


def test_fiber_gw_and_bps():
    N = fiber_gw(3)
    assert N[1:] == [640, 10112, F(7787008, 27)]
    # genus 0 denominators divide lcm of k^3 over k | d
    assert (N[3] - 288384) == F(640, 27)
    bps = fiber_bps(10)
    assert [bps[d] for d in range(1, 11)] == N_0D
    assert all(v.denominator == 1 for v in bps.values())


def test_fiber_bps_independent_of_q2_depth():
    assert fiber_bps(6, 2) == fiber_bps(6, 0)


def test_log_series_substitution_identity():
    zero = BiSeries(2, 1)
    ls = LogSeries(2, 1, {(1, 0): BiSeries.const(2, 1), (0, 1): BiSeries.const(2, 1, 3)})
    assert ls.substitute_t(zero, zero).coeffs == ls.coeffs
