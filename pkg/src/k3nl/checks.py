"""Verification suite: one check per acceptance criterion.

Every check is pure and returns a :class:`CheckResult`.  Expensive shared
inputs (mirror BPS numbers, the two quartic Theta series) are cached.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from . import bpsk3, bridge, lattice, mirror, modforms, picrank
from .qseries import FracSeries, eta24, invert

__all__ = ["CheckResult", "CHECKS", "SUITES", "run_suite", "S_TOLERANCE", "BRUINIER_TOLERANCE"]

S_TOLERANCE = 1e-6
BRUINIER_TOLERANCE = 1e-6
THETA_DMAX = 12  # mirror degrees needed for a rank-22 system
SCALAR_ORDER = 30


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} [{self.number:2d}] {self.name}: {self.detail}"


def _mismatches(pairs) -> list[str]:
    return [f"{label}: expected {want}, got {got}" for label, want, got in pairs if want != got]


def _result(number, name, pairs, extra_ok=True, extra="") -> CheckResult:
    bad = _mismatches(pairs)
    ok = not bad and extra_ok
    if ok:
        detail = f"{len(pairs)} values exact" + (f"; {extra}" if extra else "")
    else:
        detail = "; ".join(bad[:4]) + (f" (+{len(bad) - 4} more)" if len(bad) > 4 else "")
        if extra:
            detail = (detail + "; " if detail else "") + extra
    return CheckResult(number, name, ok, detail)


# -- shared inputs -------------------------------------------------------------------

@lru_cache(maxsize=1)
def mirror_bps() -> dict:
    return mirror.fiber_bps(THETA_DMAX)


@lru_cache(maxsize=1)
def mirror_theta() -> bridge.ThetaFit:
    return bridge.fit_theta_from_gw(mirror_bps(), THETA_DMAX)


@lru_cache(maxsize=1)
def modular_quartic() -> tuple[list, FracSeries]:
    # Hodge degree -1 and the two Castelnuovo slots
    cons = [(Fraction(0), 0, Fraction(-1)), (Fraction(1, 8), 1, Fraction(0)), (Fraction(1, 2), 2, Fraction(0))]
    coeffs = modforms.fit_coefficients(4, cons, SCALAR_ORDER)
    form = modforms.fit(4, cons, SCALAR_ORDER)
    return coeffs, modforms.scalarize(form)


THETA_MONOMIALS = [3, 0, -81, -627, -14436, -20007, -169092, -120636, -621558, -292796, -1038366,
                   -346122, -878388, -207186, -361908, -56364, -60021, -4812, -1881, -27, 0, 1]


# -- criteria --------------------------------------------------------------------------

def check_kkv() -> CheckResult:
    printed = {
        (0, 0): 1, (0, 1): 24, (0, 2): 324, (0, 3): 3200, (0, 4): 25650,
        (1, 1): -2, (1, 2): -54, (1, 3): -800, (1, 4): -8550,
        (2, 2): 3, (2, 3): 88, (2, 4): 1401,
        (3, 3): -4, (3, 4): -126,
        (4, 4): 5,
    }
    t = bpsk3.kkv_table(4, 4)
    pairs = [(f"r{g},{h}", v, t[(g, h)]) for (g, h), v in printed.items()]
    diag = bpsk3.kkv_table(8, 8)
    pairs += [(f"r{g},{g}", (-1) ** g * (g + 1), diag[(g, g)]) for g in range(9)]
    return _result(1, "KKV table", pairs)


def check_modular_theta() -> CheckResult:
    coeffs, theta = modular_quartic()
    want_c = [Fraction(-1), Fraction(-5, 4), Fraction(-16, 21)]
    pairs = [(f"c{i}", w, g) for i, (w, g) in enumerate(zip(want_c, coeffs))]
    printed = {Fraction(0): -1, Fraction(1): 108, Fraction(9, 8): 320, Fraction(3, 2): 50016,
               Fraction(2): 76950}
    pairs += [(f"Theta[{e}]", v, theta.coeff(e)) for e, v in printed.items()]
    return _result(2, "quartic Theta via modular fit", pairs)


def check_mirror_theta() -> CheckResult:
    fit = mirror_theta()
    pairs = [(f"A^{21 - k}B^{k}", v, fit.monomial_coefficients[k]) for k, v in enumerate(THETA_MONOMIALS)]
    _, modular = modular_quartic()
    agree = fit.theta.agrees_with(modular, upto=10)
    return _result(3, "quartic Theta via mirror fit", pairs, agree,
                   f"rank {fit.rank}, modular agreement below q^10: {agree}")


def check_g_series() -> CheckResult:
    fit = mirror_theta()
    rep = bridge.harvey_moore_check(fit.theta, mirror_bps(), 6)
    parts = []
    if rep.first_discrepancy:
        e, w, g = rep.first_discrepancy
        parts.append(f"realized exponent {e}: expected {w}, got {g}")
    else:
        parts.append(f"all realized exponents agree ({rep.checked} exponents scanned)")
    if rep.unrealized_nonzero:
        shown = ", ".join(f"q^{e}: {c}" for e, c in rep.unrealized_nonzero[:3])
        parts.append(f"{len(rep.unrealized_nonzero)} unrealized exponents nonzero ({shown}, ...)")
    return CheckResult(4, "G-series identity", rep.ok, "; ".join(parts))


def check_classical_fits() -> CheckResult:
    printed = {
        "l2-sextic": [Fraction(-1), Fraction(-1, 2)],
        "l6-family1": [Fraction(-1), Fraction(-49, 24), Fraction(-8, 3), Fraction(-12, 5)],
        "l6-family2": [Fraction(-1), Fraction(-17, 8), Fraction(-22, 7), Fraction(-18, 5)],
        "l8-quadrics": [Fraction(-1), Fraction(-49, 18), Fraction(-128, 27), Fraction(-256, 45)],
    }
    pairs = []
    for name, want in printed.items():
        got, _ = modforms.fit_preset(name, SCALAR_ORDER)
        pairs += [(f"{name} c{i}", w, g) for i, (w, g) in enumerate(zip(want, got))]
        pairs.append((f"{name} length", len(want), len(got)))
    return _result(5, "classical fits", pairs)


def check_degree2() -> CheckResult:
    _, form = modforms.fit_preset("l2-sextic", SCALAR_ORDER)
    s = modforms.scalarize(form)
    U, V = modforms.theta_UV(6)
    U4, V4 = U**4, V**4
    poly = (U**21 - 12 * U**17 * V4 - 402 * U**13 * V4**2 - 572 * U**9 * V4**3
            - 39 * U**5 * V4**4).scale(Fraction(1, 1024))
    agree = s.agrees_with(poly, upto=Fraction(21, 4))  # through q^5
    printed = {Fraction(0): -1, Fraction(1): 150, Fraction(5, 4): 1248, Fraction(2): 108600,
               Fraction(9, 4): 332800, Fraction(3): 5113200}
    pairs = [(f"[{e}]", v, s.coeff(e)) for e, v in printed.items()]
    return _result(6, "degree-2 scalar form", pairs, agree, f"U,V polynomial through q^5: {agree}")


def check_enumerative() -> CheckResult:
    _, f1 = modforms.fit_preset("l6-family1", SCALAR_ORDER)
    _, f2 = modforms.fit_preset("l6-family2", SCALAR_ORDER)
    _, f8 = modforms.fit_preset("l8-quadrics", SCALAR_ORDER)
    pairs = [
        ("l6 family 1 (13/12, 1)", 168, f1.coeff(Fraction(13, 12), 1)),
        ("l6 family 2 (13/12, 1)", 198, f2.coeff(Fraction(13, 12), 1)),
        ("l8 (17/16, 1)", 128, f8.coeff(Fraction(17, 16), 1)),
        ("l6 family 1 (3/4, 3)", 0, f1.coeff(Fraction(3, 4), 3)),
    ]
    return _result(7, "enumerative reads", pairs)


def check_degrees() -> CheckResult:
    _, theta = modular_quartic()
    pairs = [
        ("(1,3)", 320, bridge.corollary2_degree(1, 3, theta)),
        ("(2,4)", 0, bridge.corollary2_degree(2, 4, theta)),
        ("Psi[2]", 0, bridge.psi_series(3).coeff(2)),
    ]
    return _result(8, "NL hypersurface degrees", pairs)


def check_bruinier() -> CheckResult:
    pairs = []
    worst = 0.0
    for l, want in ((2, 2), (4, 3), (6, 4)):
        val = picrank.bruinier_value(l)
        worst = max(worst, abs(val - round(val)))
        pairs.append((f"l={l}", want, picrank.bruinier_rank(l, BRUINIER_TOLERANCE)))
    return _result(9, "Bruinier ranks", pairs, worst < BRUINIER_TOLERANCE, f"max residual {worst:.3e}")


# -- property suite --------------------------------------------------------------------

def _random_series(rng: random.Random, N: int, trunc: Fraction, unit: bool = False) -> FracSeries:
    terms = {}
    k = 0
    while Fraction(k, N) < trunc:
        if rng.random() < 0.6:
            terms[Fraction(k, N)] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        k += 1
    if unit:
        terms[Fraction(0)] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
    return FracSeries(N, terms, trunc)


def _ring_axioms(cases: int = 200, seed: int = 20240601) -> list[str]:
    rng = random.Random(seed)
    bad = []
    for i in range(cases):
        N = rng.choice([1, 2, 4, 8])
        t = Fraction(rng.randint(2, 6))
        a, b, c = (_random_series(rng, N, t) for _ in range(3))
        u = _random_series(rng, N, t, unit=True)
        if a + b != b + a or a * b != b * a:
            bad.append(f"case {i}: commutativity")
        if (a * b) * c != a * (b * c) or (a + b) + c != a + (b + c):
            bad.append(f"case {i}: associativity")
        if a * (b + c) != a * b + a * c:
            bad.append(f"case {i}: distributivity")
        one = u * invert(u)
        if not one.agrees_with(FracSeries(N, {0: 1}), upto=one.trunc):
            bad.append(f"case {i}: u * u^-1 != 1")
        if not invert(invert(u)).agrees_with(u):
            bad.append(f"case {i}: double inversion")
    return bad


def _mu_grid() -> tuple[int, list[str]]:
    bad = []
    cells = 0
    rng = random.Random(7)
    for l in (2, 4, 6, 8):
        d = np.arange(-40, 41)[None, :]
        h = np.arange(-20, 201)[:, None]
        for b in range(0, l):
            for c in range(-12, 13):
                gram = ((l, b), (b, c))
                if lattice.gram_disc(gram) == 0:
                    continue
                m = lattice.mu_array(l, h, d, gram)
                cells += m.size
                if not np.isin(m, (0, 1, 2)).all():
                    bad.append(f"mu outside {{0,1,2}} for l={l}, gram={gram}")
                # scalar and refined cross-check on sampled cells, always including hits
                hits = list(zip(*np.nonzero(m)))
                sample = rng.sample(hits, min(len(hits), 6))
                sample += [(rng.randrange(m.shape[0]), rng.randrange(m.shape[1])) for _ in range(2)]
                for i, j in sample:
                    hh, dd = int(h[i, 0]), int(d[0, j])
                    total = lattice.mu(l, hh, dd, gram)
                    if total != m[i, j]:
                        bad.append(f"mu_array != mu at l={l} {gram} (h,d)=({hh},{dd})")
                    refined = sum(lattice.mu_refined(k, l, hh, dd, gram) for k in range(1, abs(dd) + abs(hh) + 42))
                    if refined != total:
                        bad.append(f"refined sum != mu at l={l} {gram} (h,d)=({hh},{dd})")
    return cells, bad


def _delta_bracket() -> bool:
    E4, E6 = modforms.eisenstein(4, 20), modforms.eisenstein(6, 20)
    return modforms.rc_bracket(E4, 4, E6, 6, 1) == eta24(20).scale(-3456)


def _gv_round_trip() -> bool:
    rng = random.Random(11)
    bps = {(g, d): Fraction(rng.randint(-500, 500)) for g in range(4) for d in range(1, 9)}
    gw = bpsk3.gv_transform(bps, 3, 8)
    back = bpsk3.gv_invert(gw, 3, 8, strict=True)
    return back == bps


def _mirror_identities() -> list[str]:
    bad = []
    try:
        mirror.potential(4, 2, check=True)
    except mirror.LogCancellationError as exc:
        bad.append(f"log cancellation: {exc}")
    mm = mirror.mirror_map(5, 2)
    q1, q2 = mirror.invert_map(mm.Q1, mm.Q2)
    if mirror.compose(mm.Q1, q1, q2) != mirror.BiSeries.var(5, 2, 1) \
            or mirror.compose(mm.Q2, q1, q2) != mirror.BiSeries.var(5, 2, 2):
        bad.append("Q(q(Q)) != Q")
    return bad


def _forms_for_grading():
    for l in (2, 4, 6, 8):
        yield modforms.siegel_theta(l, SCALAR_ORDER)
        yield from modforms.basis_forms(l, Fraction(SCALAR_ORDER))
    for name in sorted(modforms.PRESETS):
        yield modforms.fit_preset(name, SCALAR_ORDER)[1]


def check_properties() -> CheckResult:
    notes, bad = [], []
    ring = _ring_axioms()
    bad += ring[:3]
    notes.append("ring axioms 200 cases")
    cells, mu_bad = _mu_grid()
    bad += mu_bad[:3]
    notes.append(f"mu grid {cells} cells")
    forms = list(_forms_for_grading())
    if not all(f.grading_ok() for f in forms):
        bad.append("VVForm grading violated")
    notes.append(f"grading on {len(forms)} forms")
    if not _delta_bracket():
        bad.append("[E4,E6]_1 != -3456 Delta")
    if not _gv_round_trip():
        bad.append("GV round trip failed")
    bad += _mirror_identities()
    theta2 = modforms.siegel_theta(2, 12)
    _, quartic = modforms.fit_preset("quartic-pencil", 12)
    tau = [1.5j]
    res = max(modforms.numeric_modularity_check(theta2, tau),
              modforms.numeric_modularity_check(quartic, tau))
    if not res < S_TOLERANCE:
        bad.append(f"S residual {res:.3e}")
    notes.append(f"S residual {res:.3e}")
    detail = "; ".join(bad) if bad else ", ".join(notes)
    return CheckResult(10, "property suites", not bad, detail)


CHECKS: dict[int, Callable[[], CheckResult]] = {
    1: check_kkv,
    2: check_modular_theta,
    3: check_mirror_theta,
    4: check_g_series,
    5: check_classical_fits,
    6: check_degree2,
    7: check_enumerative,
    8: check_degrees,
    9: check_bruinier,
    10: check_properties,
}

SUITES = {
    "all": tuple(CHECKS),
    "kkv": (1,),
    "modular": (2, 5, 6, 7),
    "mirror": (3,),
    "bridge": (3, 4, 8),
    "picrank": (9,),
    "properties": (10,),
}


def run_suite(name: str = "all") -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    out = []
    for n in SUITES[name]:
        try:
            out.append(CHECKS[n]())
        except Exception as exc:  # a crashing check is a failing check
            out.append(CheckResult(n, CHECKS[n].__name__, False, f"{type(exc).__name__}: {exc}"))
    return out
