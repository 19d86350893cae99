"""Theta and Eisenstein series, Rankin-Cohen brackets and vector-valued forms.

Vector-valued forms of type rho_l^* are stored by orbit representatives
r = 0..l/2 of (Z/lZ)/+-; component r of the full vector equals component l-r.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import lattice
from .linalg import SingularSystemError, rank, solve
from .qseries import FracSeries, mul, q_derivative

__all__ = [
    "VVForm",
    "theta_A",
    "theta_B",
    "theta_UV",
    "siegel_theta",
    "bernoulli",
    "eisenstein",
    "gen_binomial",
    "rc_bracket",
    "basis_forms",
    "basis_size",
    "fit",
    "fit_coefficients",
    "scalarize",
    "nl_lookup",
    "weil_rep",
    "numeric_modularity_check",
    "PRESETS",
    "preset_constraints",
    "fit_preset",
]

LEVELS = (2, 4, 6, 8)


@dataclass(frozen=True)
class VVForm:
    level: int
    weight2: int  # weight = weight2 / 2
    components: tuple[FracSeries, ...]

    def __post_init__(self):
        if len(self.components) != self.level // 2 + 1:
            raise ValueError(f"level {self.level} needs {self.level // 2 + 1} components")

    @property
    def weight(self) -> Fraction:
        return Fraction(self.weight2, 2)

    @property
    def trunc(self):
        ts = [c.trunc for c in self.components if c.trunc is not None]
        return min(ts) if ts else None

    def component(self, r: int) -> FracSeries:
        """Component r of the full l-vector (any integer r)."""
        return self.components[lattice.coset(self.level, r)]

    def full_vector(self) -> list[FracSeries]:
        return [self.component(r) for r in range(self.level)]

    def coeff(self, e, r: int) -> Fraction:
        return self.component(r).coeff(e)

    def __add__(self, other: "VVForm") -> "VVForm":
        self._compatible(other)
        return VVForm(self.level, self.weight2, tuple(a + b for a, b in zip(self.components, other.components)))

    def scale(self, c) -> "VVForm":
        return VVForm(self.level, self.weight2, tuple(x.scale(c) for x in self.components))

    def _compatible(self, other: "VVForm") -> None:
        if (self.level, self.weight2) != (other.level, other.weight2):
            raise ValueError("vector-valued forms of different level or weight")

    def grading_ok(self) -> bool:
        """Component r is supported on r^2/(2l) + Z."""
        l = self.level
        for r, comp in enumerate(self.components):
            base = Fraction(r * r, 2 * l)
            if any((e - base).denominator != 1 for e in comp.exponents()):
                return False
        return True

    def to_json_obj(self) -> dict:
        return {
            "level": self.level,
            "weight": str(self.weight),
            "components": [c.to_json_obj() for c in self.components],
        }


def _theta_terms(denom: int, trunc, signed: bool) -> FracSeries:
    trunc = Fraction(trunc)
    terms = {}
    n = 0
    while Fraction(n * n, denom) < trunc:
        sign = -1 if (signed and n % 2) else 1
        e = Fraction(n * n, denom)
        terms[e] = terms.get(e, 0) + (1 if n == 0 else 2 * sign)
        n += 1
    return FracSeries(denom, terms, trunc)


def theta_A(trunc) -> FracSeries:
    """sum over n of q^(n^2/8)."""
    return _theta_terms(8, trunc, signed=False)


def theta_B(trunc) -> FracSeries:
    """sum over n of (-1)^n q^(n^2/8)."""
    return _theta_terms(8, trunc, signed=True)


def theta_UV(trunc) -> tuple[FracSeries, FracSeries]:
    return _theta_terms(4, trunc, signed=False), _theta_terms(4, trunc, signed=True)


def siegel_theta(l: int, trunc) -> VVForm:
    """Weight 1/2 theta vector with component i equal to sum_s q^((ls+i)^2/(2l))."""
    trunc = Fraction(trunc)
    comps = []
    for i in range(l // 2 + 1):
        terms: dict[Fraction, int] = {}
        bound = 0
        # (ls + i)^2 grows in |s|; scan until both directions exceed trunc
        while True:
            hit = False
            for s in {bound, -bound}:
                e = Fraction((l * s + i) ** 2, 2 * l)
                if e < trunc:
                    terms[e] = terms.get(e, 0) + 1
                    hit = True
            if not hit and bound > 0:
                break
            bound += 1
        comps.append(FracSeries(2 * l, terms, trunc))
    return VVForm(l, 1, tuple(comps))


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(Fraction(_binom(m + 1, k)) * B[k] for k in range(m)) / (m + 1))
    return B[n]


def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def _sigma(n: int, k: int) -> int:
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d**k
            if d * d != n:
                s += (n // d) ** k
        d += 1
    return s


def eisenstein(k: int, trunc) -> FracSeries:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, normalized to constant term 1."""
    if k < 4 or k % 2:
        raise ValueError("Eisenstein series needs even weight >= 4")
    trunc = Fraction(trunc)
    factor = -Fraction(2 * k) / bernoulli(k)
    terms = {0: Fraction(1)}
    n = 1
    while n < trunc:
        terms[n] = factor * _sigma(n, k - 1)
        n += 1
    return FracSeries(1, terms, trunc)


def gen_binomial(x, j: int) -> Fraction:
    """C(x, j) = x (x-1) ... (x-j+1) / j! for rational x."""
    x = Fraction(x)
    if j < 0:
        return Fraction(0)
    out = Fraction(1)
    for i in range(j):
        out *= (x - i) / (i + 1)
    return out


def _derivatives(f: FracSeries, n: int) -> list[FracSeries]:
    out = [f]
    for _ in range(n):
        out.append(q_derivative(out[-1]))
    return out


def rc_bracket(f, k1, g: FracSeries, k2, n: int):
    """n-th Rankin-Cohen bracket [f, g]_n with D = q d/dq.

    ``f`` may be a :class:`VVForm`; the bracket is then taken componentwise
    against the scalar form ``g``.
    """
    k1, k2 = Fraction(k1), Fraction(k2)
    if isinstance(f, VVForm):
        comps = tuple(rc_bracket(c, k1, g, k2, n) for c in f.components)
        return VVForm(f.level, int(2 * (k1 + k2 + 2 * n)), comps)
    df = _derivatives(f, n)
    dg = _derivatives(g, n)
    total = None
    for r in range(n + 1):
        c = (-1) ** r * gen_binomial(n + k1 - 1, n - r) * gen_binomial(n + k2 - 1, r)
        if not c:
            continue
        term = mul(df[r], dg[n - r]).scale(c)
        total = term if total is None else total + term
    return total


def basis_size(l: int) -> int:
    if l not in LEVELS:
        raise ValueError(f"unsupported level {l}")
    return 4 if l == 8 else l // 2 + 1


@lru_cache(maxsize=32)
def basis_forms(l: int, trunc=30) -> tuple[VVForm, ...]:
    """F^l_n = [theta^(l), E_(10-2n)]_n, all of weight 21/2."""
    trunc = Fraction(trunc)
    theta = siegel_theta(l, trunc)
    forms = []
    for n in range(basis_size(l)):
        k = 10 - 2 * n
        forms.append(rc_bracket(theta, Fraction(1, 2), eisenstein(k, trunc), k, n))
    return tuple(forms)


def _combine(forms: Sequence[VVForm], coeffs: Sequence) -> VVForm:
    out = None
    for F, c in zip(forms, coeffs):
        term = F.scale(c)
        out = term if out is None else out + term
    return out


def fit_coefficients(l: int, constraints: Iterable[tuple], trunc=30) -> list[Fraction]:
    """Coefficients c_n with sum c_n F^l_n meeting every (exponent, component, value)."""
    forms = basis_forms(l, Fraction(trunc))
    rows, rhs = [], []
    for e, r, value in constraints:
        rows.append([F.coeff(Fraction(e), r) for F in forms])
        rhs.append(Fraction(value))
    if rank(rows) < len(forms):
        raise SingularSystemError(f"constraints determine only rank {rank(rows)} of {len(forms)} forms")
    return solve(rows, rhs)


def fit(l: int, constraints: Iterable[tuple], trunc=30) -> VVForm:
    """Unique combination of the basis forms meeting the constraints."""
    coeffs = fit_coefficients(l, constraints, trunc)
    return _combine(basis_forms(l, Fraction(trunc)), coeffs)


def scalarize(f: VVForm) -> FracSeries:
    """Sum of the orbit-representative components."""
    total = f.components[0]
    for c in f.components[1:]:
        total = total + c
    return total


def nl_lookup(f: VVForm, h: int, d: int) -> Fraction:
    """NL_{h,d}: the coefficient of component d mod l at disc/(2l); zero if disc < 0."""
    D = lattice.disc(f.level, h, d)
    if D < 0:
        return Fraction(0)
    return f.coeff(Fraction(D, 2 * f.level), d)


# -- presets ---------------------------------------------------------------

PRESETS = {
    # name: (level, Hodge degree, nodal count or None)
    "l2-sextic": (2, -1, 150),
    "quartic-pencil": (4, -1, None),
    "l6-family1": (6, -1, 98),
    "l6-family2": (6, -1, 78),
    "l8-quadrics": (8, -1, 80),
}


def preset_constraints(name: str) -> tuple[int, list[tuple[Fraction, int, Fraction]]]:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    l, hodge, nodal = PRESETS[name]
    cons = [(Fraction(0), 0, Fraction(hodge))]
    if nodal is not None:
        cons.append((Fraction(1), 0, Fraction(nodal)))
    cons += [(e, r, Fraction(0)) for e, r in lattice.vanishing_constraints(l)]
    return l, cons


def preset_for(l: int, family: int = 1) -> str:
    if l == 6:
        return f"l6-family{family}"
    return {2: "l2-sextic", 4: "quartic-pencil", 8: "l8-quadrics"}[l]


def fit_preset(name: str, trunc=30) -> tuple[list[Fraction], VVForm]:
    l, cons = preset_constraints(name)
    coeffs = fit_coefficients(l, cons, trunc)
    return coeffs, _combine(basis_forms(l, Fraction(trunc)), coeffs)


# -- numerical diagnostics --------------------------------------------------

def weil_rep(l: int, dual: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of rho_l(T), rho_l(S) on C[Z/lZ] (conjugated when ``dual``).

    The discriminant form is Z/lZ generated by w/l with <w, w> = -l and the
    lattice has signature (2, 19).
    """
    r = np.arange(l)
    T = np.diag(np.exp(2j * np.pi * (-(r**2) / (2 * l))))
    pref = cmath.exp(1j * cmath.pi / 4) ** (19 - 2) / np.sqrt(l)
    # <gamma_a, gamma_b> = -ab/l, so e(-<a,b>) = e(ab/l)
    S = pref * np.exp(2j * np.pi * np.outer(r, r) / l)
    if dual:
        return T.conj(), S.conj()
    return T, S


def _evaluate(series: FracSeries, tau: complex) -> complex:
    total = 0j
    for e, c in series.terms():
        total += float(c) * cmath.exp(2j * cmath.pi * float(e) * tau)
    return total


def numeric_modularity_check(f: VVForm, tau_samples: Iterable[complex]) -> float:
    """Largest residual of f(-1/tau) = tau^k rho_l^*(S) f(tau) over the samples."""
    _, S = weil_rep(f.level, dual=True)
    k = float(f.weight)
    worst = 0.0
    for tau in tau_samples:
        tau = complex(tau)
        v = np.array([_evaluate(c, tau) for c in f.full_vector()])
        w = np.array([_evaluate(c, -1 / tau) for c in f.full_vector()])
        factor = cmath.sqrt(tau) ** (2 * k)
        worst = max(worst, float(np.max(np.abs(w - factor * (S @ v)))))
    return worst
