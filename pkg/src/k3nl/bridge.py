"""Linear bridge between Noether-Lefschetz numbers and BPS counts of the total space.

For a family of degree-l K3 surfaces, ``n_{g,d} = sum_h r_{g,h} NL_{h,d}``.
For the quartic pencil NL_{h,d} is read from the scalar form Theta at
disc_4(h,d)/8; the mirror family X_{4,2} is the pencil taken twice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from . import lattice
from .bpsk3 import kkv_table, yau_zaslow
from .linalg import InconsistentSystemError, SingularSystemError, rref
from .modforms import VVForm, nl_lookup, theta_A, theta_B
from .qseries import FracSeries, eta24, invert

__all__ = [
    "NLTable",
    "nl_table_from_form",
    "nl_table_from_scalar",
    "theorem1_genus",
    "predict",
    "psi_series",
    "corollary2_degree",
    "ThetaFit",
    "fit_theta_from_gw",
    "theta_from_monomials",
    "g_series",
    "HarveyMooreReport",
    "harvey_moore_check",
    "THETA_DEGREE",
]

THETA_DEGREE = 21
ALLOWED_RESIDUES = (0, 1, 4)  # disc_4(h, d) mod 8


@dataclass
class NLTable:
    l: int
    values: dict = field(default_factory=dict)  # (h, d) -> Fraction
    provenance: str = "fitted-modular"

    def get(self, h: int, d: int) -> Fraction:
        if lattice.disc(self.l, h, d) < 0:
            return Fraction(0)
        try:
            return self.values[(h, d)]
        except KeyError:
            raise KeyError(f"NL_({h},{d}) missing from table") from None

    def scaled(self, c) -> "NLTable":
        return NLTable(self.l, {k: v * c for k, v in self.values.items()}, self.provenance)

    def rows(self):
        """(h, d, disc, coset, value) sorted by d then h."""
        for (h, d) in sorted(self.values, key=lambda k: (k[1], k[0])):
            yield h, d, lattice.disc(self.l, h, d), lattice.coset(self.l, d), self.values[(h, d)]


def nl_table_from_form(form: VVForm, dmax: int, provenance="fitted-modular") -> NLTable:
    l = form.level
    vals = {}
    for d in range(1, dmax + 1):
        for h in range(lattice.h_top(l, d) + 1):
            vals[(h, d)] = nl_lookup(form, h, d)
    return NLTable(l, vals, provenance)


def nl_table_from_scalar(theta: FracSeries, dmax: int, l: int = 4, provenance="fitted-modular") -> NLTable:
    """NL_{h,d} = theta[disc_l(h,d)/(2l)] (valid when the disc determines the coset)."""
    vals = {}
    for d in range(1, dmax + 1):
        for h in range(lattice.h_top(l, d) + 1):
            D = lattice.disc(l, h, d)
            vals[(h, d)] = theta.coeff(Fraction(D, 2 * l)) if D >= 0 else Fraction(0)
    return NLTable(l, vals, provenance)


def theorem1_genus(g: int, nl: NLTable, r: Mapping[tuple[int, int], int], d: int) -> Fraction:
    """n_{g,d} = sum_{h=g}^{h_top(d)} r_{g,h} NL_{h,d}."""
    top = lattice.h_top(nl.l, d)
    total = Fraction(0)
    for h in range(g, top + 1):
        if (g, h) not in r:
            raise KeyError(f"r_({g},{h}) missing; extend the KKV table")
        total += r[(g, h)] * nl.get(h, d)
    return total


def predict(g: int, nl: NLTable, dmax: int) -> dict[int, Fraction]:
    """n_{g,d} for d = 1..dmax."""
    hmax = lattice.h_top(nl.l, dmax)
    r = kkv_table(min(g, hmax), hmax) if g <= hmax else {}
    out = {}
    for d in range(1, dmax + 1):
        if g > lattice.h_top(nl.l, d):
            out[d] = Fraction(0)
        else:
            out[d] = theorem1_genus(g, nl, r, d)
    return out


# -- nodal correction --------------------------------------------------------------

def psi_series(trunc) -> FracSeries:
    """108 * sum_{n>0} q^(n^2)."""
    trunc = Fraction(trunc)
    terms = {}
    n = 1
    while n * n < trunc:
        terms[n * n] = 108
        n += 1
    return FracSeries(1, terms, trunc)


def corollary2_degree(h: int, d: int, theta: FracSeries) -> Fraction:
    """Degree of the closure of the quartic NL hypersurface: Theta - Psi at disc/8."""
    D = lattice.disc(4, h, d)
    if D <= 0:
        raise ValueError(f"disc_4({h},{d}) = {D} is not positive")
    e = Fraction(D, 8)
    return theta.coeff(e) - psi_series(theta.trunc or e + 1).coeff(e)


# -- Theta from mirror BPS numbers -----------------------------------------------------

@lru_cache(maxsize=8)
def _monomials(trunc: Fraction) -> tuple[FracSeries, ...]:
    """A^(21-k) B^k for k = 0..21."""
    A, B = theta_A(trunc), theta_B(trunc)
    Apow = [FracSeries(8, {0: 1})]
    Bpow = [FracSeries(8, {0: 1})]
    for _ in range(THETA_DEGREE):
        Apow.append(Apow[-1] * A)
        Bpow.append(Bpow[-1] * B)
    return tuple(Apow[THETA_DEGREE - k] * Bpow[k] for k in range(THETA_DEGREE + 1))


def theta_from_monomials(coeffs, trunc) -> FracSeries:
    """2^-22 sum_k coeffs[k] A^(21-k) B^k."""
    mons = _monomials(Fraction(trunc))
    total = None
    for c, m in zip(coeffs, mons):
        if c:
            t = m.scale(c)
            total = t if total is None else total + t
    if total is None:
        total = FracSeries(8, {}, Fraction(trunc))
    return total.scale(Fraction(1, 2**22))


@dataclass
class ThetaFit:
    monomial_coefficients: list  # coefficient of A^(21-k) B^k in 2^22 Theta
    theta: FracSeries
    rank: int
    equations: int
    surplus_consistent: bool


def fit_theta_from_gw(bps: Mapping[int, Fraction], dmax: int | None = None, multiplicity: int = 2,
                      trunc=None) -> ThetaFit:
    """Solve for Theta as a degree-21 polynomial in A, B from genus 0 BPS counts.

    Equations: for each d, ``n_{0,d} = multiplicity * sum_h r_{0,h} Theta[disc_4(h,d)/8]``,
    plus vanishing of Theta at exponents whose 8x residue is not a value of
    disc_4 mod 8.  ``multiplicity`` is 2 for the doubled pencil matching X_{4,2}.
    """
    ds = sorted(d for d in bps if dmax is None or d <= dmax)
    if not ds:
        raise SingularSystemError("no BPS data supplied")
    top = ds[-1]
    need = Fraction(top * top, 8) + 1
    trunc = Fraction(trunc) if trunc is not None else max(need + Fraction(1, 8), Fraction(11))
    mons = _monomials(trunc)
    r0 = yau_zaslow(lattice.h_top(4, top))
    rows, rhs = [], []
    for d in ds:
        row = [Fraction(0)] * (THETA_DEGREE + 1)
        for h in range(lattice.h_top(4, d) + 1):
            e = Fraction(lattice.disc(4, h, d), 8)
            for k, m in enumerate(mons):
                row[k] += multiplicity * r0[h] * m.coeff(e) / 2**22
        rows.append(row)
        rhs.append(Fraction(bps[d]))
    # support constraints below the truncation
    k8 = 0
    while Fraction(k8, 8) < trunc:
        if k8 % 8 not in ALLOWED_RESIDUES:
            e = Fraction(k8, 8)
            row = [m.coeff(e) for m in mons]
            if any(row):
                rows.append(row)
                rhs.append(Fraction(0))
        k8 += 1
    aug = [row + [b] for row, b in zip(rows, rhs)]
    red, piv = rref(aug)
    n = THETA_DEGREE + 1
    if n in piv:
        raise InconsistentSystemError("BPS data and support constraints are inconsistent")
    rk = len(piv)
    if rk < n:
        raise SingularSystemError(
            f"rank {rk} < {n}: supply BPS numbers to higher degree (currently d <= {top})"
        )
    sol = [red[i][n] for i in range(n)]
    theta = theta_from_monomials(sol, trunc)
    return ThetaFit(sol, theta, rk, len(rows), True)


# -- G-series identity ----------------------------------------------------------------

def g_series(bps: Mapping[int, Fraction], dmax: int) -> FracSeries:
    """-2/q + 168 + sum_{d <= dmax} n_{0,d} q^(d^2/8), known below (dmax+1)^2/8."""
    terms = {Fraction(-1): -2, Fraction(0): 168}
    for d in range(1, dmax + 1):
        terms[Fraction(d * d, 8)] = bps[d]
    return FracSeries(8, terms, Fraction((dmax + 1) ** 2, 8))


@dataclass
class HarveyMooreReport:
    """Outcome of comparing 2 Theta / Delta with the G-series.

    ``realized_ok`` covers the exponents -1, 0 and d^2/8 carried by the
    G-series; ``unrealized_nonzero`` lists every other exponent of the
    window where 2 Theta / Delta does not vanish.
    """

    window: tuple
    checked: int
    realized_ok: bool
    first_discrepancy: tuple | None  # (exponent, expected, got) at a realized exponent
    unrealized_nonzero: list  # (exponent, coefficient)

    @property
    def ok(self) -> bool:
        return self.realized_ok and not self.unrealized_nonzero


def harvey_moore_check(theta: FracSeries, bps: Mapping[int, Fraction], dmax: int) -> HarveyMooreReport:
    """Compare 2 Theta / Delta with the G-series on every exponent of [-1, dmax^2/8]."""
    hi = Fraction(dmax * dmax, 8)
    need = hi + 1 + Fraction(1, 8)  # 2 Theta / Delta is known below trunc(Theta) - 1
    if theta.trunc is not None and theta.trunc < need:
        raise ValueError(f"Theta must be known below {need}, have {theta.trunc}")
    ratio = theta.truncate(need).scale(2) * invert(eta24(int(need) + 2))
    G = g_series(bps, dmax)
    realized = {Fraction(-1), Fraction(0)} | {Fraction(d * d, 8) for d in range(1, dmax + 1)}
    first = None
    unrealized = []
    checked = 0
    k = -8
    while Fraction(k, 8) <= hi:
        e = Fraction(k, 8)
        want, got = G.coeff(e), ratio.coeff(e)
        checked += 1
        if e in realized:
            if want != got and first is None:
                first = (e, want, got)
        elif got:
            unrealized.append((e, got))
        k += 1
    return HarveyMooreReport((Fraction(-1), hi), checked, first is None, first, unrealized)
