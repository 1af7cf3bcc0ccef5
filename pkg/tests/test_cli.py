import json
import math

import numpy as np
import pytest

from mgkp.cli import main


def run(tmp_path, *argv, sub="out"):
    out = tmp_path / sub
    code = main(list(argv) + ["--out-dir", str(out)])
    return code, out


def read_csv(path):
    text = path.read_bytes().decode("utf-8")
    assert "\r" not in text
    lines = text.rstrip("\n").split("\n")
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def test_unknown_flag_exits_2_and_writes_nothing(tmp_path):
    code, out = run(tmp_path, "profile", "--no-such-flag")
    assert code == 2
    assert not out.exists()


def test_missing_parameterization_is_usage_error(tmp_path):
    code, _ = run(tmp_path, "profile", "--sp", "preset:mkdv")
    assert code == 2


def test_profile_csv_format(tmp_path):
    code, out = run(tmp_path, "profile", "--sp", "preset:mkdv", "--mu-nu", "0,1", "--n", "101")
    assert code == 0
    header, rows = read_csv(out / "profile.csv")
    assert header == ["xi", "u"]
    assert len(rows) == 101
    # 17 significant digits round-trip exactly
    xi = float(rows[50][0])
    u = float(rows[50][1])
    assert abs(xi) < 1e-15 and u == pytest.approx(math.sqrt(6), rel=1e-16)
    man = json.loads((out / "manifest.json").read_text())
    assert man["command"] == "profile"
    assert {o["path"] for o in man["outputs"]} == {"profile.csv", "profile.json"}
    assert "numpy" in man["versions"] and man["exit_code"] == 0


@pytest.mark.parametrize("figure", ["defocus-profile", "focus-profile", "shock-profile"])
def test_profile_figures(tmp_path, figure):
    code, out = run(tmp_path, "profile", "--figure", figure, "--n", "401")
    assert code == 0
    header, rows = read_csv(out / f"{figure}.csv")
    assert header == ["h", "w", "xi", "u"]
    data = np.array(rows, dtype=float)
    for h, w in {(r[0], r[1]) for r in data}:
        sel = data[(data[:, 0] == h) & (data[:, 1] == w)]
        if figure == "shock-profile":
            assert np.max(sel[:, 3]) <= h
        else:
            assert np.max(np.abs(sel[:, 3])) == pytest.approx(h, rel=1e-12)
        if figure == "defocus-profile":
            assert w * h < math.sqrt(6)


def test_inadmissible_exit_3(tmp_path):
    code, out = run(tmp_path, "profile", "--sp", "sigma1=-1,q=1", "--hw", "4,1")
    assert code == 3
    assert json.loads((out / "manifest.json").read_text())["exit_code"] == 3


def test_kinematics_case(tmp_path):
    code, out = run(tmp_path, "kinematics", "--case", "defocus-normal", "--k2", "0.333",
                    "--resolution", "21")
    assert code == 0
    header, rows = read_csv(out / "region.csv")
    assert header == ["c", "theta", "admissible", "kinds"]
    assert len(rows) == 21 * 21
    assert any(r[2] == "1" for r in rows)
    header, rows = read_csv(out / "boundaries.csv")
    assert header == ["curve_id", "c", "theta"]
    ids = {r[0].split(":")[0] for r in rows}
    assert {"lower", "upper", "shock"} <= ids


def test_kinematics_figure_writes_one_region_per_k2(tmp_path):
    code, out = run(tmp_path, "kinematics", "--figure", "defocus-neg-k2lt1", "--resolution", "11")
    assert code == 0
    assert sorted(p.name for p in out.glob("region_*.csv")) == [f"region_{i}.csv" for i in range(4)]


def test_outputs_are_deterministic(tmp_path):
    args = ("kinematics", "--case", "focus-neg", "--resolution", "15")
    run(tmp_path, *args, sub="a")
    run(tmp_path, *args, sub="b")
    for name in ("region.csv", "boundaries.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_conservation_check_mkp(tmp_path, capsys):
    code, out = run(tmp_path, "conservation-check", "--all", "--sp", "preset:mkp", "--fields", "2",
                    "--points", "2", "--json")
    assert code == 0
    report = json.loads((out / "conservation_report.json").read_text())
    assert len(report["ids"]) == 15
    verdicts = {r["id"]: r["verdict"] for r in report["ids"]}
    assert verdicts[3] == "skipped" and verdicts[1] == "pass"
    for r in report["ids"]:
        assert set(r) >= {"applicable", "residual_max", "fields_tested", "f_choices", "verdict"}
    printed = json.loads(capsys.readouterr().out)
    assert printed["failed"] == []


def test_evolve_snapshots_and_file_init(tmp_path):
    code, out = run(tmp_path, "evolve", "--sp", "preset:mkdv", "--grid", "32,32,30,30",
                    "--dt", "0.01", "--t-end", "0.05", "--snap-every", "2", "--trace-out", "t.json")
    assert code == 0
    side = json.loads((out / "snap_0001.json").read_text())
    assert side == {"Nx": 32, "Ny": 32, "Lx": 30.0, "Ly": 30.0, "t": pytest.approx(0.02)}
    snap = np.fromfile(out / "snap_0001.bin", dtype="<f8")
    assert snap.size == 32 * 32
    trace = json.loads((out / "t.json").read_text())
    assert trace["times"][-1] == pytest.approx(0.05)
    code, out2 = run(tmp_path, "evolve", "--sp", "preset:mkdv", "--init", "file",
                     "--init-file", str(out / "final.bin"), "--dt", "0.01", "--t-end", "0.01",
                     sub="again")
    assert code == 0
    man = json.loads((out2 / "manifest.json").read_text())
    assert str(out / "final.bin") in man["inputs"]


def test_evolve_seed_kind_via_seed_flag(tmp_path):
    code, _ = run(tmp_path, "evolve", "--seed", "shock", "--sp", "preset:mkdv")
    assert code == 3
    code, _ = run(tmp_path, "profile", "--seed", "soliton", "--sp", "preset:mkdv", "--mu-nu", "0,1")
    assert code == 2


def test_numeric_abort_exit_5(tmp_path):
    code, _ = run(tmp_path, "evolve", "--sp", "preset:mkdv", "--amplitude", "40", "--width", "1",
                  "--grid", "32,32,20,20", "--dt", "0.05", "--t-end", "50")
    assert code == 5


def test_charge_pass_and_fail(tmp_path):
    sp = "sigma1=1,sigma2=1,a=0,b=0.5,q=1"
    code, out = run(tmp_path, "charge", "--sp", sp)
    assert code == 0
    res = json.loads((out / "charge.json").read_text())
    assert all(set(c) == {"curve", "value", "tolerance", "pass"} for c in res["charges"])
    # a crude time derivative leaves a visible flux imbalance
    code, _ = run(tmp_path, "charge", "--sp", sp, "--ut-step", "0.15", sub="bad")
    assert code == 4


def test_constraints(tmp_path):
    code, out = run(tmp_path, "constraints", "--sp", "preset:mkp")
    assert code == 0
    rep = json.loads((out / "constraints.json").read_text())
    assert "ill-posed in L² caveat" in rep["caveats"]


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# mKP via raw coefficients\nraw.alpha = -1\nraw.epsilon = 0\n"
                   "raw.kappa = 1.4142135623730951\nraw.beta = 1\nraw.gamma = 1\nraw.p = 2\n",
                   encoding="utf-8")
    code, out = run(tmp_path, "normalize", "--config", str(cfg))
    assert code == 0
    res = json.loads((out / "normalize.json").read_text())
    assert res["params"] == {"sigma1": -1, "sigma2": 1, "a": 1.4142135623730951, "b": 0.0, "q": "1"}
    man = json.loads((out / "manifest.json").read_text())
    assert str(cfg) in man["inputs"]


def test_config_supplies_params_and_options(tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("sigma1 = 1\nsigma2 = 1\na = 0\nb = 0\nq_num = 1\nq_den = 1\nn = 11\n"
                   "mu_nu = 0,1\n", encoding="utf-8")
    code, out = run(tmp_path, "profile", "--config", str(cfg))
    assert code == 0
    _, rows = read_csv(out / "profile.csv")
    assert len(rows) == 11


def test_normalize_raw_flag(tmp_path):
    code, out = run(tmp_path, "normalize", "--raw=4,0,0,1,1,2")
    assert code == 0
    res = json.loads((out / "normalize.json").read_text())
    assert res["transform"]["lambda4"] == pytest.approx(0.5)
