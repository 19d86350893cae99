"""Rank-2 polarized lattices: discriminants, cosets and vector counts.

A rank-2 lattice with polarization ``v`` is given by its Gram matrix
``[[l, b], [b, c]]`` in a basis ``(v, e)``.  The K3 data ``(h, d)`` asks for
lattice vectors beta with ``<beta, beta> = 2h - 2`` and ``<beta, v> = d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, isqrt
from typing import Sequence

import numpy as np

__all__ = [
    "LatticePair",
    "DegenerateLatticeError",
    "disc",
    "coset",
    "gram_disc",
    "solutions",
    "mu",
    "mu_refined",
    "mu_array",
    "castelnuovo_max_square",
    "vanishing_constraints",
    "h_top",
]


class DegenerateLatticeError(ValueError):
    """The counting problem has infinitely many solutions."""


def disc(l: int, h: int, d: int) -> int:
    """Discriminant d^2 - 2lh + 2l of the Gram matrix [[l, d], [d, 2h-2]]."""
    _check_level(l)
    return d * d - 2 * l * h + 2 * l


def coset(l: int, d: int) -> int:
    """Representative of d in (Z/lZ)/+-, taken in 0..l/2."""
    r = d % l
    return min(r, l - r)


def h_top(l: int, d: int) -> int:
    """Largest h with nonnegative discriminant."""
    return (d * d) // (2 * l) + 1


def _check_level(l: int) -> None:
    if l <= 0 or l % 2:
        raise ValueError(f"polarization degree must be even and positive, got {l}")


@dataclass(frozen=True)
class LatticePair:
    l: int
    h: int
    d: int

    def __post_init__(self):
        _check_level(self.l)

    @property
    def gram(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.l, self.d), (self.d, 2 * self.h - 2))

    @property
    def disc(self) -> int:
        return disc(self.l, self.h, self.d)

    @property
    def coset(self) -> int:
        return coset(self.l, self.d)

    @property
    def exponent(self) -> Fraction:
        """Position of NL_{h,d} in the level-l generating form."""
        return Fraction(self.disc, 2 * self.l)

    def shifted(self, k: int = 1) -> "LatticePair":
        """Apply (h, d) -> (h + d + l/2, d + l) k times (k may be negative)."""
        h, d = self.h, self.d
        step = 1 if k >= 0 else -1
        for _ in range(abs(k)):
            if step > 0:
                h, d = h + d + self.l // 2, d + self.l
            else:
                h, d = h - d + self.l // 2, d - self.l
        return LatticePair(self.l, h, d)


def _parse_gram(gram) -> tuple[int, int, int]:
    (a, b), (b2, c) = gram
    if b != b2:
        raise ValueError("Gram matrix must be symmetric")
    return int(a), int(b), int(c)


def gram_disc(gram) -> int:
    """Minus the determinant of a 2x2 Gram matrix."""
    a, b, c = _parse_gram(gram)
    return b * b - a * c


def solutions(l: int, h: int, d: int, gram) -> list[tuple[int, int]]:
    """Nonzero vectors x*v + y*e with <beta,beta> = 2h-2 and <beta,v> = d.

    Eliminating x from the linear condition leaves
    ``y^2 * gram_disc = disc(l, h, d)``, solved exactly.
    """
    a, b, c = _parse_gram(gram)
    if a != l:
        raise ValueError(f"Gram matrix polarizes degree {a}, expected {l}")
    D = gram_disc(gram)
    target = disc(l, h, d)
    if D == 0:
        if target == 0:
            raise DegenerateLatticeError(
                f"isotropic lattice {gram}: (h, d) = ({h}, {d}) has infinitely many solutions"
            )
        return []
    if target % D:
        return []
    ysq = target // D
    if ysq < 0:
        return []
    y = isqrt(ysq)
    if y * y != ysq:
        return []
    out = []
    for yy in sorted({y, -y}):
        num = d - b * yy
        if num % l == 0:
            x = num // l
            if x or yy:
                out.append((x, yy))
    return out


def mu(l: int, h: int, d: int, gram) -> int:
    return len(solutions(l, h, d, gram))


def mu_refined(m: int, l: int, h: int, d: int, gram) -> int:
    """Count of solutions whose divisibility gcd(x, y) equals m."""
    if m < 1:
        raise ValueError("divisibility must be a positive integer")
    return sum(1 for x, y in solutions(l, h, d, gram) if gcd(x, y) == m)


def mu_array(l: int, h, d, gram) -> np.ndarray:
    """Vectorized :func:`mu` over broadcast integer arrays ``h`` and ``d``."""
    a, b, c = _parse_gram(gram)
    h = np.asarray(h, dtype=np.int64)
    d = np.asarray(d, dtype=np.int64)
    D = b * b - a * c
    target = d * d - 2 * l * h + 2 * l
    shape = np.broadcast(h, d).shape
    if D == 0:
        if np.any(target == 0):
            raise DegenerateLatticeError(f"isotropic lattice {gram} with zero discriminant target")
        return np.zeros(shape, dtype=np.int64)
    ok = target % D == 0
    ysq = np.where(ok, target // D, -1)
    ok &= ysq >= 0
    y = np.sqrt(np.where(ok, ysq, 0)).round().astype(np.int64)
    ok &= y * y == np.where(ok, ysq, 0)
    count = np.zeros(shape, dtype=np.int64)
    for sign in (1, -1):
        yy = sign * y
        hit = ok & ((d - b * yy) % l == 0)
        x = (d - b * yy) // l
        hit &= (x != 0) | (yy != 0)
        if sign == -1:
            hit &= y != 0  # y = 0 is a single solution
        count += hit
    return count


def castelnuovo_max_square(deg: int) -> int:
    """Maximal <beta, beta> for a curve of degree ``deg`` under a very ample polarization."""
    if deg < 1:
        raise ValueError("degree must be positive")
    return 2 * comb(deg - 1, 2) - 2


def vanishing_constraints(l: int) -> list[tuple[Fraction, int]]:
    """(exponent, component) slots forced to vanish by the Castelnuovo bound.

    Uses the lattices [[l, d], [d, 0]] for d = 1, 2: a class of square 0 and
    degree d exceeds the bound.  For l = 2 the polarization is not very ample
    and no slot is returned.
    """
    if l not in (2, 4, 6, 8):
        raise ValueError(f"unsupported level {l}")
    if l == 2:
        return []
    out = []
    for d in (1, 2):
        h = 1  # beta^2 = 0
        if 2 * h - 2 > castelnuovo_max_square(d):
            out.append((Fraction(disc(l, h, d), 2 * l), coset(l, d)))
    return out


def parse_gram(text: str | Sequence[int]) -> tuple[tuple[int, int], tuple[int, int]]:
    """Parse ``"a,b,c,d"`` (row-major) into a Gram matrix."""
    vals = [int(t) for t in text.split(",")] if isinstance(text, str) else [int(t) for t in text]
    if len(vals) != 4:
        raise ValueError("Gram matrix needs four entries a,b,c,d")
    return ((vals[0], vals[1]), (vals[2], vals[3]))
