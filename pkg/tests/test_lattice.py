from fractions import Fraction
from math import gcd

import numpy as np
import pytest

from k3nl import lattice
from k3nl.lattice import (
    DegenerateLatticeError,
    LatticePair,
    castelnuovo_max_square,
    coset,
    disc,
    mu,
    mu_array,
    mu_refined,
    parse_gram,
    vanishing_constraints,
)


def brute_mu(l, h, d, gram, box=60):
    (a, b), (_, c) = gram
    n = 0
    for x in range(-box, box + 1):
        for y in range(-box, box + 1):
            if (x, y) == (0, 0):
                continue
            if a * x + b * y == d and a * x * x + 2 * b * x * y + c * y * y == 2 * h - 2:
                n += 1
    return n


def test_disc_values():
    assert disc(4, 1, 0) == 0
    assert disc(4, 2, 4) == 8
    with pytest.raises(ValueError):
        disc(3, 0, 1)


@pytest.mark.parametrize("h,d", [(0, 1), (1, 3), (2, 4), (-3, 7), (5, -2)])
def test_shift_preserves_disc_and_coset(h, d):
    p = LatticePair(4, h, d)
    for k in (-2, -1, 1, 3):
        q = p.shifted(k)
        assert q.disc == p.disc and q.coset == p.coset
    assert p.shifted(1).shifted(-1) == p


def test_coset_range():
    assert [coset(6, d) for d in range(-3, 8)] == [3, 2, 1, 0, 1, 2, 3, 2, 1, 0, 1]


def test_mu_isotropic_example():
    gram = ((4, 0), (0, -2))
    for d in (1, 2, 3, 5, 6):
        for h in range(-10, 5):
            assert mu(4, h, d, gram) == 0
    for n in (1, 2, 3):
        h = (4 - 2 * n * n + 2) // 2
        assert mu(4, h, 4, gram) == 2


def test_mu_single_solution():
    assert mu(6, 0, 1, ((6, 1), (1, -2))) == 1
    assert lattice.solutions(6, 0, 1, ((6, 1), (1, -2))) == [(0, 1)]


def test_mu_refined_examples():
    gram = ((4, 0), (0, -2))
    assert mu_refined(2, 4, -3, 4, gram) == 0
    # beta = 2 (v + e) has square 2 * 2 * (4 - 2) = 8 and degree 8
    assert mu_refined(2, 4, 5, 8, gram) == 2
    assert mu_refined(1, 4, 5, 8, gram) == 0
    with pytest.raises(ValueError):
        mu_refined(0, 4, 1, 1, gram)


def test_zero_vector_excluded():
    assert mu(4, 1, 0, ((4, 1), (1, 0))) == 0


def test_degenerate_raises():
    with pytest.raises(DegenerateLatticeError):
        mu(4, 1, 0, ((4, 2), (2, 1)))
    with pytest.raises(ValueError):
        mu(6, 0, 1, ((4, 0), (0, -2)))


@pytest.mark.parametrize("gram", [((2, 1), (1, -2)), ((4, 0), (0, -2)), ((6, 3), (3, 0)),
                                  ((8, 1), (1, -2)), ((6, 1), (1, 4))])
def test_mu_against_enumeration(gram):
    l = gram[0][0]
    for d in range(-8, 9):
        for h in range(-6, 8):
            assert mu(l, h, d, gram) == brute_mu(l, h, d, gram), (h, d)


def test_full_grid():
    h = np.arange(-30, 301)[:, None]
    d = np.arange(-60, 61)[None, :]
    checked = 0
    for l in (2, 4, 6, 8):
        for b in range(l):
            for c in range(-15, 16):
                gram = ((l, b), (b, c))
                if lattice.gram_disc(gram) == 0:
                    continue
                m = mu_array(l, h, d, gram)
                assert np.isin(m, (0, 1, 2)).all()
                checked += m.size
                for i, j in list(zip(*np.nonzero(m)))[:5] + [(0, 0), (40, 70)]:
                    hh, dd = int(h[i, 0]), int(d[0, j])
                    total = mu(l, hh, dd, gram)
                    assert total == m[i, j]
                    sols = lattice.solutions(l, hh, dd, gram)
                    ms = {gcd(x, y) for x, y in sols}
                    assert sum(mu_refined(k, l, hh, dd, gram) for k in ms) == total
    assert checked > 10**7


def test_castelnuovo():
    assert [castelnuovo_max_square(k) for k in (1, 2, 3, 4)] == [-2, -2, 0, 4]
    with pytest.raises(ValueError):
        castelnuovo_max_square(0)


def test_vanishing_constraints():
    F = Fraction
    assert vanishing_constraints(2) == []
    assert vanishing_constraints(4) == [(F(1, 8), 1), (F(1, 2), 2)]
    assert vanishing_constraints(6) == [(F(1, 12), 1), (F(1, 3), 2)]
    assert vanishing_constraints(8) == [(F(1, 16), 1), (F(1, 4), 2)]


def test_parse_gram():
    assert parse_gram("6,3,3,0") == ((6, 3), (3, 0))
    with pytest.raises(ValueError):
        parse_gram("1,2,3")
