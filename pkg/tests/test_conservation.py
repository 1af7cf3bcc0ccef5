import math
from fractions import Fraction

import numpy as np
import pytest

from mgkp.conservation import fields, laws
from mgkp.conservation.fields import F_CHOICES, AnalyticField, f_choice
from mgkp.conservation.identity import (RESIDUAL_TOL, multiplier_check, offshell_residual,
                                        verify_id)
from mgkp.conservation.integrals import (conserved_integral, constraint_diagnostics,
                                         first_moment, potential_v)
from mgkp.conservation.laws import (IDS, InapplicableError, applicability, equation_lhs_G,
                                    params_for)
from mgkp.grid import Field2D, Grid2D
from mgkp.params import JetPoint, OutsideEquationDomain, ParameterError, ScaledParams
from mgkp.travelling import WaveFrame, construct_first

from cases import random_grid_field, soliton_cases

ALL_KEYS = [idx for idx in fields.multi_indices(4)]


def soliton_jet(sol, xi):
    """w-jet of a line soliton: w_x = U, d_y = mu d_x, d_t = -nu d_x on w_x."""
    U, U1, U2, U3 = sol.derivatives(xi)
    mu, nu = sol.frame.mu, sol.frame.nu
    return JetPoint({"x": U, "y": mu * U, "t": -nu * U, "xx": U1, "xy": mu * U1,
                     "yy": mu * mu * U1, "tx": -nu * U1, "xxxx": U3})


@pytest.mark.parametrize("sp,fr", soliton_cases(seed=21, per=2))
def test_soliton_annihilates_G(sp, fr):
    sol = construct_first(sp, fr)
    if sp.q < 1 and sp.a != 0:
        pytest.skip("a-term singular at U = 0 for q < 1")
    xi = np.linspace(-6 * sol.width, 6 * sol.width, 101)
    jet = soliton_jet(sol, xi)
    _, _, _, U3 = sol.derivatives(xi)
    assert np.max(np.abs(equation_lhs_G(sp, jet))) <= 1e-8 * max(1.0, np.max(np.abs(U3)))


def test_G_zero_jet_and_term_by_term(rng):
    sp = ScaledParams(-1, 1, 0.4, 0.9, 2)
    zero = JetPoint({k: 0.0 for k in ("x", "y", "xx", "xy", "yy", "tx", "xxxx")})
    assert equation_lhs_G(sp, zero) == 0.0
    fld = AnalyticField.random(rng)
    jet = fld.jet(0.1, -0.2, 0.3, 4)
    wx = jet[(0, 1, 0)]
    terms = [jet[(1, 1, 0)], -wx ** 4 * jet[(0, 2, 0)], 0.4 * wx * jet[(0, 0, 1)] * jet[(0, 2, 0)],
             0.9 * wx ** 2 * jet[(0, 1, 1)], jet[(0, 4, 0)], jet[(0, 0, 2)]]
    assert equation_lhs_G(sp, jet) == pytest.approx(sum(terms), rel=1e-13)


def test_analytic_field_derivatives_match_differences(rng):
    fld = AnalyticField.random(rng)
    h = 1e-5
    p = np.array([0.2, -0.1, 0.4])
    for axis in range(3):
        e = np.zeros(3)
        e[axis] = h
        idx = [0, 0, 0]
        idx[axis] = 1
        fd = (fld.derivative((0, 0, 0), *(p + e)) - fld.derivative((0, 0, 0), *(p - e))) / (2 * h)
        assert fld.derivative(tuple(idx), *p) == pytest.approx(fd, rel=1e-8)


def test_f_choices():
    assert [fc.name for fc in F_CHOICES] == ["1", "t", "t2", "sin"]
    d = f_choice("sin").derivs(0.3)
    assert d == pytest.approx((math.sin(0.3), math.cos(0.3), -math.sin(0.3), -math.cos(0.3)))


def test_id1_generic(rng):
    sp = ScaledParams(1, -1, 0.3, 0.7, "3/2")
    for _ in range(5):
        fld = AnalyticField.random(rng)
        pts = tuple(rng.uniform(-0.8, 0.8, 5) for _ in range(3))
        assert offshell_residual(1, sp, fld, pts).ratio <= RESIDUAL_TOL


def test_id13_with_sine(rng):
    b = math.sqrt(8 / 3)
    sp = ScaledParams(1, -1, b / 2, b, 1)
    assert applicability(13, sp)
    fld = AnalyticField.random(rng)
    pts = tuple(rng.uniform(-0.8, 0.8, 5) for _ in range(3))
    assert offshell_residual(13, sp, fld, pts, f_choice("sin")).ratio <= RESIDUAL_TOL


def _shifted_field(rng):
    # keeps w_x away from zero so negative and fractional powers are safe
    fld = AnalyticField.random(rng)
    return AnalyticField(fld.coeffs * 0.1, fld.lam, grad=(0.0, 1.5, 0.0))


@pytest.mark.parametrize("id_", IDS)
def test_each_id_passes_after_typo_protocol(id_):
    rep = verify_id(id_, params_for(id_, a=1.7) if id_ == 9 else None, n_fields=3, n_points=3)
    assert rep.verdict in ("pass", "typo-corrected")
    if id_ in laws.TYPO_IDS:
        assert rep.verdict == "typo-corrected"
        assert rep.typo["corrected_residual_max"] <= RESIDUAL_TOL


@pytest.mark.parametrize("id_", IDS)
def test_zero_field_zero_residual(id_):
    sp = params_for(id_, a=1.7) if id_ == 9 else params_for(id_)
    z = AnalyticField(np.zeros(1), np.zeros((1, 3)), grad=(0.0, 1.0, 0.0))
    pts = (np.array([0.1]), np.array([0.2]), np.array([0.3]))
    res = offshell_residual(id_, sp, z, pts)
    assert np.max(np.abs(res.residual)) <= 1e-9


def test_applicability_examples():
    assert applicability(3, ScaledParams(1, 1, 0.75, 1.0, "3/2"))
    assert not applicability(3, ScaledParams(1, 1, 0.7, 1.0, "3/2"))
    for sp in (ScaledParams(1, 1, 0, 0, 1), ScaledParams(-1, -1, 3, -2, "5/2")):
        assert applicability(1, sp) and applicability(2, sp)
    sp10 = ScaledParams(1, -1, -0.5, 0.5, -2)
    assert applicability(10, sp10) and sp10.outside_domain
    with pytest.raises(OutsideEquationDomain):
        laws.require_applicable(1, sp10)
    with pytest.raises(InapplicableError):
        laws.require_applicable(3, ScaledParams(1, 1, 0.0, 1.0, 1))


def test_multiplier_euler_check(rng):
    sp = ScaledParams(1, -1, math.sqrt(2), 0.0, 1)
    assert multiplier_check(15, sp, rng, n_fields=2)[0]
    assert not multiplier_check(15, sp, rng, n_fields=2, printed=True)[0]


# grid integrals ------------------------------------------------------------

def test_momentum_of_sine():
    g = Grid2D(1.0, 1.0, 32, 32)
    X, _ = g.mesh()
    fld = Field2D(g, np.sin(2 * math.pi * (X + 0.5)))
    assert conserved_integral("P", ScaledParams(1, 1, 0, 0, 1), fld) == pytest.approx(0.25, rel=1e-14)
    assert conserved_integral("M", ScaledParams(1, 1, 0, 0, 1), fld) == pytest.approx(0.0, abs=1e-15)


def test_first_moment_exact_for_trig_interpolant():
    g = Grid2D(2 * math.pi, 2 * math.pi, 16, 8)
    X, _ = g.mesh()
    # int_{-pi}^{pi} x sin x dx = 2 pi, times Ly
    assert first_moment(np.sin(X), g, "x") == pytest.approx(2 * math.pi * 2 * math.pi, rel=1e-13)


def test_spectral_convergence_of_quadrature():
    errs = []
    for n in (16, 32, 64):
        g = Grid2D(20.0, 20.0, n, n)
        X, Y = g.mesh()
        u = np.exp(-(X ** 2 + Y ** 2) / 4)
        errs.append(abs(Field2D(g, u).integral(0.5 * u * u) - 0.5 * 2 * math.pi))
    assert errs[0] / max(errs[1], 1e-300) >= 10
    assert errs[2] <= 1e-12


def test_potential_v_inverts_dx(rng):
    g = Grid2D(40.0, 40.0, 64, 64)
    fld = random_grid_field(g, rng)
    v = potential_v(ScaledParams(1, 1, 0, 0, 1), fld)
    from mgkp.grid import dx_spec, dy_spec
    np.testing.assert_allclose(dx_spec(v, g), dy_spec(fld.u, g), atol=1e-10)


def test_nonzero_row_mean_rejected():
    g = Grid2D(10.0, 10.0, 16, 16)
    _, Y = g.mesh()
    with pytest.raises(ParameterError):
        potential_v(ScaledParams(1, 1, 0, 0, 1), Field2D(g, np.sin(2 * math.pi * Y / 10)))


def _fields(n, seed=0):
    rng = np.random.default_rng(seed)
    g = Grid2D(40.0, 40.0, 64, 64)
    return [random_grid_field(g, rng, amp=2.0) for _ in range(n)]


def test_energy_sign_defocussing_b_above_a():
    # q = 1 energy carries the factor (b - a); non-negative for sigma1 = -1, b > a
    for s2 in (1, -1):
        a = -2.0 if s2 == 1 else 0.5
        b = math.sqrt(a * a + 2 * -1 * s2)
        sp = ScaledParams(-1, s2, a, b, 1)
        for f in _fields(10, seed=s2 + 5):
            assert conserved_integral("E", sp, f) >= 0


def test_energy_sign_flips_with_b_below_a():
    sp = ScaledParams(-1, -1, 0.5, -math.sqrt(2.25), 1)
    assert all(conserved_integral("E", sp, f) <= 0 for f in _fields(5, seed=3))


def test_variational_energy_sign():
    # integer q so that u of either sign is allowed; b^2 <= 4(q+1)/(2q+1)
    for q, b in ((1, 0.0), (1, 0.8), (2, 0.5), (3, 0.3)):
        sp = ScaledParams(-1, -1, b * q / 2, b, q)
        for f in _fields(5, seed=q):
            assert conserved_integral("E_var", sp, f) >= 0


def test_variational_energy_sign_needs_small_b():
    # the cross term -b/(q+1) u^{q+1} v is linear in b and wins for large |b|
    g = Grid2D(80.0, 80.0, 128, 128)
    from mgkp.solver import gaussian_seed
    u = gaussian_seed(g, 2.0, 10.0, order=2).u + gaussian_seed(g, 2.0, 10.0, (0, 10), order=3).u
    f = Field2D(g, u)
    vals = [conserved_integral("E_var", ScaledParams(-1, -1, b / 2, b, 1), f) for b in (30.0, -30.0)]
    assert min(vals) < 0


def test_constraint_report():
    g = Grid2D(40.0, 40.0, 64, 64)
    from mgkp.solver import gaussian_seed
    u0 = gaussian_seed(g, 1.0, 2.0, order=2)
    rep = constraint_diagnostics(ScaledParams(1, 1, 0.0, 0.5, 1), u0)
    items = {it["case"]: it for it in rep.items}
    assert items["i"]["satisfied"]
    assert "ill-posed in L² caveat" in rep.caveats
    assert any("energy-space caveat" in c and "positive" in c for c in rep.caveats)
    assert rep.E > 0
    with pytest.raises(ParameterError):
        constraint_diagnostics(ScaledParams(1, 1, 0.0, 0.5, 2), u0)
