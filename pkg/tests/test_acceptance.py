"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records a PASS/FAIL line (printed in the terminal summary) before
asserting, so a failing criterion still shows up in the report.
"""
import csv
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from mgkp.cli import main
from mgkp.conservation.identity import verification_report
from mgkp.conservation.integrals import conserved_integral, rectangle, topological_charge
from mgkp.grid import Field2D, Grid2D
from mgkp.kinematics import (boundary_curves, ctheta_height_width, shock_speed,
                             soliton_from_ctheta, speed_bounds, vartheta)
from mgkp.params import ScaledParams, WeightKind, scaling_weight
from mgkp.solver import (SolverConfig, evolve, gaussian_seed, measure_speed,
                         seed_soliton_on_grid, time_derivative)
from mgkp.travelling import (WaveFrame, construct_first, first_integral_residual_relative,
                             ode_residual_relative,
                             profile_hw, width_bound)

from acceptance_log import record
from cases import random_grid_field, soliton_cases

MKP = ScaledParams(-1, 1, math.sqrt(2), 0.0, 1)


def test_criterion_1_soliton_residuals():
    t0 = time.perf_counter()
    worst = 0.0
    cases = soliton_cases(seed=11, per=10)
    for sp, fr in cases:
        sol = construct_first(sp, fr)
        worst = max(worst, ode_residual_relative(sol), first_integral_residual_relative(sol))
    dt = time.perf_counter() - t0
    ok = worst <= 1e-8 and dt < 10
    record(1, ok, f"{len(cases)} solutions, max relative residual {worst:.2e} (<= 1e-8), {dt:.1f} s (< 10 s)")
    assert ok


def test_criterion_2_offshell_identities():
    t0 = time.perf_counter()
    reps = verification_report(n_fields=20, n_points=5)
    dt = time.perf_counter() - t0
    verdicts = {r.id: r.verdict for r in reps}
    bad = [i for i, v in verdicts.items() if v not in ("pass", "typo-corrected")]
    corrected = [r.id for r in reps if r.verdict == "typo-corrected"]
    ok = len(reps) == 15 and not bad and dt < 60
    record(2, ok, f"15 triples, failing {bad or 'none'}, repaired flux passing for ids {corrected}, "
                  f"{dt:.1f} s (< 60 s)")
    assert ok


def _cross_case(rng):
    s2 = int(rng.choice([1, -1]))
    q = rng.choice([Fraction(1, 2), Fraction(1), Fraction(2)])
    sp = ScaledParams(1, s2, rng.uniform(-1, 1), rng.uniform(-1, 1), q)
    th = rng.uniform(0.1, 1.3) * rng.choice([1, -1])
    c = speed_bounds(sp, th)[0] + rng.uniform(0.1, 3.0)
    return sp, c, th


def test_criterion_3_cross_parameterization():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(20):
        sp, c, th = _cross_case(rng)
        ref = construct_first(sp, WaveFrame.from_ctheta(c, th), s=1)
        sol = soliton_from_ctheta(sp, c, th)
        h, w = ctheta_height_width(sp, c, th, s_tilde=sol.s_tilde)
        xi = np.linspace(-8 * ref.width, 8 * ref.width, 41)
        u = ref.eval(xi)
        floor = 1e-300
        worst = max(worst,
                    float(np.max(np.abs(sol.eval(xi) - u) / np.maximum(np.abs(u), floor))),
                    float(np.max(np.abs(profile_hw(sp, h, w, xi) - np.abs(u))
                                 / np.maximum(np.abs(u), floor))))
    ok = worst <= 1e-9
    record(3, ok, f"20 cases, max pointwise relative disagreement {worst:.2e} (<= 1e-9)")
    assert ok


def test_criterion_4_kinematic_boundaries():
    normal = ScaledParams(1, 1, 0, 0, 1)
    e1 = max(abs(speed_bounds(normal, vartheta(c))[0] - c) / c for c in (0.1, 1.0, 10.0))
    k2 = 1 / 3
    e2 = max(abs(c / ((1 + k2) * math.sin(th) ** 2 / math.cos(th)) - 1)
             for c, th in boundary_curves(MKP, np.linspace(0.01, 1.5, 100))["c_max"])
    stationary = ScaledParams(-1, -1, 0.0, 1.0, 1)
    e3 = max(abs(shock_speed(stationary, th, k2=1.0)) for th in np.linspace(-1.4, 1.4, 29))
    ok = e1 <= 1e-10 and e2 <= 1e-12 and e3 == 0.0
    record(4, ok, f"c_min(vartheta(c)) error {e1:.1e}, mKP c_max curve error {e2:.1e}, "
                  f"stationary shock max |c| {e3}")
    assert ok


def test_criterion_5_criticality_table():
    got = (scaling_weight(WeightKind.MOMENTUM, Fraction(2, 3)),
           scaling_weight(WeightKind.ENERGY_VAR, 2),
           scaling_weight(WeightKind.ENERGY_NONVAR, 1))
    ok = got == (0, 0, -1) and all(isinstance(g, Fraction) for g in got)
    record(5, ok, f"weights (momentum q=2/3, E_var q=2, E q=1) = {tuple(map(str, got))}")
    assert ok


def _tilted_run(b):
    sp = ScaledParams(1, 1, 0.0, b, 1)
    fr = WaveFrame(1.0, 2.0)
    seeded = seed_soliton_on_grid(sp, fr, Grid2D(60.0, 60.0, 256, 256))
    ints = ("P", "M", "E_var", "Py_var") if b == 0 else ("P", "M")
    tr = evolve(sp, seeded.field, SolverConfig(dt=0.005, t_end=2.0, sample_every=20,
                                               snap_every=20, integrals=ints))
    c, th = measure_speed(tr)
    return abs(c / fr.c - 1), abs(th / fr.theta - 1), {k: tr.drift(k) for k in ints}


def test_criterion_6_solver_validation():
    t0 = time.perf_counter()
    sp = ScaledParams(1, 1, 0.0, 0.0, 1)
    g = Grid2D(64.0, 8.0, 256, 8)
    seeded = seed_soliton_on_grid(sp, WaveFrame(0.0, 1.0), g)
    tr = evolve(sp, seeded.field, SolverConfig(dt=1e-4, t_end=1.0, sample_every=1000))
    X, _ = g.mesh()
    xi = np.mod(X - 1.0 + g.Lx / 2, g.Lx) - g.Lx / 2
    l2 = math.sqrt(((tr.final - math.sqrt(6) / np.cosh(xi)) ** 2).sum() * g.cell_area)
    drifts = {"mKdV " + k: tr.drift(k) for k in ("P", "M")}
    ec, eth, d = _tilted_run(0.5)
    drifts.update({"tilted " + k: v for k, v in d.items()})
    vc, vth, dv = _tilted_run(0.0)
    drifts.update({"variational " + k: v for k, v in dv.items()})
    dt = time.perf_counter() - t0
    tol = {k: (1e-5 if k.endswith("_var") else 1e-6) for k in drifts}
    ok = (l2 <= 1e-3 and max(ec, eth, vc, vth) <= 0.01
          and all(drifts[k] <= tol[k] for k in drifts) and dt < 300)
    record(6, ok, f"mKdV L2 error {l2:.1e} (<= 1e-3); tilted c, theta errors {ec:.1e}, {eth:.1e} "
                  f"(<= 1%); max drift {max(drifts.values()):.1e}; {dt:.0f} s (< 300 s)")
    assert ok


def test_criterion_7_mass_charge():
    sp = ScaledParams(1, 1, 0.0, 0.5, 1)
    g = Grid2D(40.0, 40.0, 128, 128)
    tr = evolve(sp, gaussian_seed(g, 0.8, 1.5), SolverConfig(dt=0.005, t_end=0.5,
                                                             sample_every=1000))
    fld = Field2D(g, tr.final, 0.5)
    ut = time_derivative(sp, fld)
    res = [topological_charge(2, sp, fld, rectangle(g, *r), ut=ut)
           for r in ((32, 96, 32, 96), (16, 112, 20, 100))]
    spread = abs(res[0].value - res[1].value)
    tol = max(r.tolerance for r in res)
    ok = all(r.passed for r in res) and spread <= 2 * tol
    record(7, ok, f"charges {res[0].value:.1e}, {res[1].value:.1e} within 1e-4 normalization "
                  f"(tol {tol:.1e}); deformation spread {spread:.1e} (<= {2 * tol:.1e})")
    assert ok


def test_criterion_8_energy_signs():
    # both signs need the side conditions under which the sign claim is true:
    # E carries a factor (b - a), E_var needs a small cross coefficient b
    rng = np.random.default_rng(88)
    g = Grid2D(40.0, 40.0, 64, 64)
    fields = [random_grid_field(g, rng, amp=2.0) for _ in range(100)]
    e_sets = [ScaledParams(-1, 1, -2.0, math.sqrt(2.0), 1), ScaledParams(-1, -1, 0.5, 1.5, 1)]
    ev_sets = [ScaledParams(-1, -1, b * q / 2, b, q) for q, b in ((1, 0.0), (1, 0.8), (2, 0.5))]
    viol_e = sum(conserved_integral("E", sp, f) < 0 for sp in e_sets for f in fields)
    viol_v = sum(conserved_integral("E_var", sp, f) < 0 for sp in ev_sets for f in fields)
    ok = viol_e == 0 and viol_v == 0
    record(8, ok, f"100 fields: E < 0 in {viol_e} of {100 * len(e_sets)} (sigma1=-1, b > a); "
                  f"E_var < 0 in {viol_v} of {100 * len(ev_sets)} (sigma1=sigma2=-1, small b)")
    assert ok


def _read_rows(path):
    with open(path, newline="") as fh:
        return [tuple(map(float, r)) for r in list(csv.reader(fh))[1:]]


def test_criterion_9_figure_profiles(tmp_path):
    worst, bound_ok, heights = 0.0, True, set()
    l = width_bound(ScaledParams(-1, 1, 0, 0, 1), 1.0)
    for fig in ("focus-profile", "defocus-profile"):
        out = tmp_path / fig
        assert main(["profile", "--figure", fig, "--out-dir", str(out)]) == 0
        rows = _read_rows(out / f"{fig}.csv")
        groups = {}
        for h, w, _, u in rows:
            groups.setdefault((h, w), []).append(abs(u))
        for (h, w), us in groups.items():
            heights.add(h)
            worst = max(worst, abs(max(us) - h) / h)
            if fig == "defocus-profile":
                bound_ok &= w * h < l
    # line shocks approach h without attaining it: compare with the closed form
    out = tmp_path / "shock"
    assert main(["profile", "--figure", "shock-profile", "--out-dir", str(out)]) == 0
    shock_err = 0.0
    for h, w, xi, u in _read_rows(out / "shock-profile.csv"):
        shock_err = max(shock_err, abs(u - h / (1 + math.exp(-xi / w))) / h)
    ok = worst <= 1e-12 and bound_ok and heights == {1.0, 2.5, 4.0} and shock_err <= 1e-12
    record(9, ok, f"max |max|U| - h|/h {worst:.1e} (<= 1e-12), w h^q < l {bound_ok}, "
                  f"shock profile error {shock_err:.1e}")
    assert ok
