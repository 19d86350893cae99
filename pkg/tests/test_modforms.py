from fractions import Fraction

import numpy as np
import pytest


from k3nl.linalg import rank
from k3nl.modforms import (
    VVForm,
    basis_forms,
    eisenstein,
    fit,
    fit_coefficients,
    fit_preset,
    nl_lookup,
    numeric_modularity_check,
    rc_bracket,
    scalarize,
    siegel_theta,
    weil_rep,
)
from k3nl.qseries import FracSeries, eta24

F = Fraction


def divisor_sum(n, k):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


@pytest.mark.parametrize("k,c", [(4, 240), (6, -504), (8, 480), (10, -264)])
def test_eisenstein_against_divisor_sums(k, c):
    E = eisenstein(k, 12)
    assert E.coeff(0) == 1
    for n in range(1, 12):
        assert E.coeff(n) == c * divisor_sum(n, k - 1)
    assert E.coeff(2) == {4: 2160, 6: -16632, 8: 61920, 10: -135432}[k]


def test_bracket_zero_is_product():
    E4, E6 = eisenstein(4, 10), eisenstein(6, 10)
    assert rc_bracket(E4, 4, E6, 6, 0) == E4 * E6
    assert rc_bracket(E4, 4, FracSeries(1, {0: 1}, 10), 0, 0) == E4


def test_bracket_gives_delta():
    E4, E6 = eisenstein(4, 15), eisenstein(6, 15)
    # direct oracle: 4 E4 D(E6) - 6 D(E4) E6
    from k3nl.qseries import q_derivative

    direct = (E4 * q_derivative(E6)).scale(4) - (q_derivative(E4) * E6).scale(6)
    br = rc_bracket(E4, 4, E6, 6, 1)
    assert br == direct
    assert br == eta24(15).scale(-3456)


def test_siegel_theta_components():
    th = siegel_theta(8, 20)
    assert th.component(0).terms() == [(0, 1), (4, 2), (16, 2)]
    c1 = th.component(1)
    assert [e for e, _ in c1.terms()] == [F(1, 16), F(49, 16), F(81, 16), F(225, 16), F(289, 16)]
    assert all(f.grading_ok() for f in [th, siegel_theta(2, 10), siegel_theta(6, 10)])
    assert th.component(7) == th.component(1)


def test_basis_sizes_and_weights():
    for l, n in ((2, 2), (4, 3), (6, 4), (8, 4)):
        forms = basis_forms(l, F(12))
        assert len(forms) == n
        assert all(f.weight == F(21, 2) and f.grading_ok() for f in forms)
        rows = []
        for f in forms:
            row = []
            for r in range(l // 2 + 1):
                row += [c for _, c in f.component(r).terms()[:6]]
            rows.append(row[: 6 * (l // 2 + 1)])
        width = min(len(r) for r in rows)
        assert rank([r[:width] for r in rows]) == n


@pytest.mark.parametrize("name,want", [
    ("l2-sextic", [F(-1), F(-1, 2)]),
    ("quartic-pencil", [F(-1), F(-5, 4), F(-16, 21)]),
    ("l6-family1", [F(-1), F(-49, 24), F(-8, 3), F(-12, 5)]),
    ("l6-family2", [F(-1), F(-17, 8), F(-22, 7), F(-18, 5)]),
    ("l8-quadrics", [F(-1), F(-49, 18), F(-128, 27), F(-256, 45)]),
])
def test_preset_fits(name, want):
    got, form = fit_preset(name)
    assert got == want
    assert form.grading_ok()
    assert form.coeff(0, 0) == -1


def test_explicit_constraints():
    cons = [(F(0), 0, F(-1)), (F(1, 8), 1, F(0)), (F(1, 2), 2, F(0))]
    assert fit_coefficients(4, cons) == [F(-1), F(-5, 4), F(-16, 21)]


def test_underdetermined_fit_raises():
    from k3nl.linalg import SingularSystemError

    with pytest.raises(SingularSystemError):
        fit(4, [(F(0), 0, F(-1))])


def test_quartic_scalar_expansion():
    _, form = fit_preset("quartic-pencil")
    s = scalarize(form)
    want = {F(0): -1, F(1, 8): 0, F(1, 4): 0, F(1): 108, F(9, 8): 320, F(3, 2): 5016, F(2): 76950}
    assert {e: s.coeff(e) for e in want} == want


def test_sextic_scalar_expansion():
    _, form = fit_preset("l2-sextic")
    s = scalarize(form)
    want = [(0, -1), (1, 150), (F(5, 4), 1248), (2, 108600), (F(9, 4), 332800), (3, 5113200)]
    assert s.truncate(F(13, 4)).terms() == want


def test_zero_form_scalarizes_to_zero():
    f = basis_forms(4, F(10))[0].scale(0)
    assert scalarize(f).is_zero()


def test_nl_lookup():
    _, form = fit_preset("quartic-pencil")
    assert nl_lookup(form, 2, 4) == 108
    assert nl_lookup(form, 1, 0) == -1
    assert nl_lookup(form, 5, 1) == 0  # negative discriminant


def test_weil_rep():
    for l in (2, 4, 6, 8):
        T, S = weil_rep(l)
        assert np.allclose(S @ S.conj().T, np.eye(l), atol=1e-12)
        r = np.arange(l)
        assert np.allclose(np.diag(T), np.exp(-2j * np.pi * r**2 / (2 * l)))
        Td, Sd = weil_rep(l, dual=True)
        assert np.allclose(Td, T.conj()) and np.allclose(Sd, S.conj())


def test_numeric_modularity():
    assert numeric_modularity_check(siegel_theta(2, 12), [2j]) < 1e-8
    assert numeric_modularity_check(siegel_theta(2, 12), [1.5j, 0.3 + 1.2j]) < 1e-8
    _, form = fit_preset("quartic-pencil", 12)
    assert numeric_modularity_check(form, [1.5j]) < 1e-6


def test_vvform_guards():
    bad = VVForm(4, 1, (FracSeries(8, {F(1, 8): 1}),) * 3)  # component 0 off its grading
    assert not bad.grading_ok()
    with pytest.raises(ValueError):
        VVForm(4, 1, (FracSeries(8, {}),) * 2)
    a, b = basis_forms(4, F(10))[:2]
    assert (a + b).coeff(0, 0) == a.coeff(0, 0) + b.coeff(0, 0)
    with pytest.raises(ValueError):
        a + basis_forms(2, F(10))[0]
