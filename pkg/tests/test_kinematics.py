import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgkp.kinematics import (admissible, boundary_curves, ctheta_height_width, sample_region,
                             shock_from_theta, shock_height_from_c, shock_height_width,
                             shock_speed, shock_width_from_c, soliton_from_ctheta, speed_bounds,
                             vartheta)
from mgkp.params import ParameterError, ScaledParams
from mgkp.travelling import (Family, InadmissibleError, WaveFrame, construct_first, hw_of,
                             reduced_constants)

MKP = ScaledParams(-1, 1, math.sqrt(2), 0.0, 1)


def test_vartheta_examples():
    assert vartheta(0.0) == 0.0
    phi = (1 + math.sqrt(5)) / 2
    assert vartheta(1.0) == pytest.approx(math.atan(math.sqrt(phi)), rel=1e-15)
    assert vartheta(1.0) == pytest.approx(0.904557, abs=1e-6)


@given(st.floats(1e-3, 10.0))
def test_vartheta_inverts_c_min(c):
    sp = ScaledParams(1, 1, 0, 0, 1)
    assert speed_bounds(sp, vartheta(c))[0] == pytest.approx(c, rel=1e-12)


@given(st.floats(0.0, 50.0), st.floats(0.0, 50.0))
def test_vartheta_monotone(c1, c2):
    if c1 < c2:
        assert vartheta(c1) <= vartheta(c2)


def test_speed_bounds_examples():
    assert speed_bounds(ScaledParams(1, 1, 0, 0, 1), math.pi / 4) == (pytest.approx(1 / math.sqrt(2)), None)
    assert speed_bounds(MKP, math.pi / 4)[1] == pytest.approx(4 / 3 / math.sqrt(2), rel=1e-14)
    for th in (-1.2, 0.3, 1.0):
        assert speed_bounds(ScaledParams(-1, -1, 0, 0, 1), th, k2=1.0)[1] == 0.0
    with pytest.raises(ParameterError):
        speed_bounds(MKP, math.pi / 2)


def test_focus_admissible_has_no_upper_bound():
    sp = ScaledParams(1, 1, 0.3, 0.2, 1)
    assert 0.5 < vartheta(1.0)
    for c in (1.0, 10.0, 1e4):
        assert admissible(sp, c, 0.5).soliton


def test_mkp_angular_range():
    k2 = 1 / 3
    for c in (0.5, 1.0, 3.0):
        lo, hi = vartheta(c / (1 + k2)), vartheta(c)
        for th in np.linspace(0.01, 1.5, 60):
            inside = lo < th < hi
            if min(abs(th - lo), abs(th - hi)) < 1e-9:
                continue
            assert admissible(MKP, c, th).soliton == inside


def test_defocus_sign_rule_even_q():
    sp = ScaledParams(-1, 1, 1.0, 1.0, 2)
    c = 1.0
    th = 0.5 * (vartheta(c / (1 + 1.0)) + vartheta(c))
    assert not admissible(sp, c, -abs(th)).soliton
    sp_k2 = ScaledParams(-1, 1, 0.0, 3.0, 2)
    k2 = (math.sqrt(5) / (math.sqrt(3) * 4) * 3) ** 2
    th = 0.5 * (vartheta(c / (1 + k2)) + vartheta(c))
    res = admissible(sp_k2, c, th)
    assert res.soliton and res.kinds[0].kind.family is Family.SYMMETRIC_SOLITON_PAIR
    assert not admissible(sp_k2, c, -th).soliton


@pytest.mark.parametrize("s2", [1, -1])
def test_focus_region_independent_of_q(s2):
    grids = [sample_region(ScaledParams(1, s2, 0.0, 0.0, q), (0.05, 4), (-1.4, 1.4), 25, refine=False)
             for q in ("1/2", 1, 2, 3)]
    for g in grids[1:]:
        np.testing.assert_array_equal(g.admissible, grids[0].admissible)


def test_defocus_regions_nested_in_k2():
    prev = None
    for k2 in (1 / 8, 1 / 3, 2, 10):
        g = sample_region(MKP, (0.05, 5), (0.01, 1.45), 30, k2=k2, refine=False)
        if prev is not None:
            assert np.all(g.admissible[prev])
        prev = g.admissible


def test_empty_region_below_c_min():
    g = sample_region(ScaledParams(1, 1, 0, 0, 1), (-5, -1), (-1.4, 1.4), 10)
    assert not g.admissible.any() and g.boundaries == []


def test_region_boundaries_are_bisected():
    g = sample_region(ScaledParams(1, 1, 0, 0, 1), (0.0, 5.0), (0.2, 1.4), 20)
    lower = dict(g.boundaries)["lower"]
    for c, th in lower:
        assert c == pytest.approx(math.sin(th) ** 2 / math.cos(th), abs=2e-10)


def test_mkp_c_max_curve_exact():
    ths = np.linspace(0.01, 1.5, 100)
    curves = boundary_curves(MKP, ths)
    k2 = 1 / 3
    for c, th in curves["c_max"]:
        assert c == pytest.approx((1 + k2) * math.sin(th) ** 2 / math.cos(th), rel=1e-12)


def test_stationary_shock():
    sp = ScaledParams(-1, -1, 0.0, 1.0, 1)
    for th in (-1.0, 0.2, 1.3):
        assert shock_speed(sp, th, k2=1.0) == 0.0


def _random_focus_query(rng):
    s2 = rng.choice([1, -1])
    q = rng.choice([Fraction(1, 2), Fraction(1), Fraction(2)])
    sp = ScaledParams(1, int(s2), rng.uniform(-1, 1), rng.uniform(-1, 1), q)
    th = rng.uniform(0.1, 1.3) * rng.choice([1, -1])
    c_min = speed_bounds(sp, th)[0]
    c = c_min + rng.uniform(0.1, 3.0)
    return sp, c, th


@pytest.mark.parametrize("seed", range(20))
def test_ctheta_matches_mu_nu(seed):
    rng = np.random.default_rng(seed)
    sp, c, th = _random_focus_query(rng)
    sol = soliton_from_ctheta(sp, c, th)
    ref = construct_first(sp, WaveFrame.from_ctheta(c, th), s=1)
    xi = np.linspace(-8 * ref.width, 8 * ref.width, 41)
    np.testing.assert_allclose(sol.eval(xi), ref.eval(xi), rtol=1e-9, atol=1e-300)
    h, w = ctheta_height_width(sp, c, th, s_tilde=sol.s_tilde)
    assert w == pytest.approx(1 / (sp.qf * math.sqrt(c / abs(speed_bounds(sp, th)[0]) - sp.sigma2)
                                   * abs(math.tan(th))), rel=1e-12)
    assert (h, w) == (pytest.approx(ref.height, rel=1e-9), pytest.approx(ref.width, rel=1e-12))


def test_width_symmetric_height_asymmetric():
    sp = ScaledParams(1, 1, 0.4, 0.4, 1)
    c = 2.0
    for th in (0.3, 0.6, 0.9):
        hp, wp = ctheta_height_width(sp, c, th)
        hm, wm = ctheta_height_width(sp, c, -th)
        assert wp == pytest.approx(wm, rel=1e-14)
        assert hp != pytest.approx(hm, rel=1e-6)


def test_trends_toward_upper_bound():
    th = 0.8
    c_min, c_max = speed_bounds(MKP, th)
    hs, ws = [], []
    for c in np.linspace(c_min, c_max, 12)[1:-1]:
        h, w = ctheta_height_width(MKP, c, th)
        hs.append(h)
        ws.append(w)
    assert np.all(np.diff(ws) < 0) and np.all(np.diff(hs) > 0)


@pytest.mark.parametrize("th", [-0.9, -0.3, 0.3, 0.9])
def test_boundary_consistency(th):
    sp = ScaledParams(-1, 1, 0.0, 1.5, 2)
    c_min, c_max = speed_bounds(sp, th)
    eps = 1e-6
    ok = admissible(sp, c_min + eps, th).soliton
    assert ok == (th > 0)
    assert not admissible(sp, c_min - eps, th).soliton
    if ok:
        assert admissible(sp, c_max - eps, th).soliton
        assert not admissible(sp, c_max + eps, th).soliton


@pytest.mark.parametrize("s2,th", [(1, 0.4), (1, 1.1), (-1, 0.7)])
def test_shock_round_trip(s2, th):
    sp = ScaledParams(-1, s2, 0.5, 1.5, 1)
    sol = shock_from_theta(sp, th)
    assert sol.kind.is_shock
    rc = reduced_constants(sp, sol.frame)
    assert rc.delta_is_zero
    h, w = shock_height_width(sp, th)
    assert (h, w) == (pytest.approx(sol.height, rel=1e-12), pytest.approx(sol.width, rel=1e-12))
    c = sol.frame.c
    assert shock_width_from_c(sp, c) == pytest.approx(w, rel=1e-10)
    assert shock_height_from_c(sp, c) == pytest.approx(h, rel=1e-10)
    xi = np.linspace(-10 * w, 10 * w, 41)
    np.testing.assert_allclose(sol.eval(xi), construct_first(sp, sol.frame).eval(xi), rtol=1e-10)


def test_shock_needs_defocusing():
    with pytest.raises(InadmissibleError):
        shock_from_theta(ScaledParams(1, 1, 0.5, 1.5, 1), 0.5)
