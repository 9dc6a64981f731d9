"""End-to-end command-line tests: determinism, formats, exit codes."""

import json
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from cavity_transit import FitParams, FitResult, ModeGeometry, ModeIndex, ModePoint, mode_amplitude
from cavity_transit.cli import main
from cavity_transit.fileio import read_trace_csv


def run(*argv):
    return main([str(a) for a in argv])


def test_transit_is_byte_identical_across_runs(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("transit", "--y", -16.3, "--v", 0.39, "--seed", 7, "--out", a) == 0
    assert run("transit", "--y", -16.3, "--v", 0.39, "--seed", 7, "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    assert run("transit", "--y", -16.3, "--v", 0.39, "--seed", 8, "--out", c) == 0
    assert a.read_bytes() != c.read_bytes()


def test_fit_on_simulated_transit_converges(tmp_path):
    trace_path = tmp_path / "trace.csv"
    fit_path = tmp_path / "fit.json"
    assert run("transit", "--y", -16.3, "--v", 0.39, "--seed", 1, "--out", trace_path) == 0
    assert run("fit", "--trace", trace_path, "--out", fit_path) == 0
    result = json.loads(fit_path.read_text())
    assert result["converged"] is True
    assert abs(result["y_off_um"] - (-16.3)) < 2.0
    assert abs(result["v_mps"] - 0.39) < 0.03


def test_trace_csv_format(tmp_path):
    path = tmp_path / "trace.csv"
    run("transit", "--y", 0.0, "--v", 0.42, "--seed", 2, "--out", path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t_s,expected_T,counts"
    assert len(lines) == 51
    trace = read_trace_csv(path)
    assert trace.counts is not None and len(trace) == 50


def test_scan_fixed_zero_coupling_matches_lorentzian(tmp_path):
    path = tmp_path / "scan.csv"
    assert run("scan", "--axis", "freq", "--delta-ca", 0, "--g", 0, "--out", path) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "delta_pa_mhz,T"
    kappa = 2.6
    for line in lines[1:]:
        d, T = map(float, line.split(","))
        assert abs(T - kappa**2 / (kappa**2 + d**2)) < 1e-12


def test_scan_csv_full_precision(tmp_path):
    path = tmp_path / "scan.csv"
    run("scan", "--axis", "pos", "--y", 0.0, "--samples", 11, "--out", path)
    for line in path.read_text().splitlines()[1:]:
        x_str, t_str = line.split(",")
        # 17 significant digits round-trip the exact double
        assert float(t_str) == float(f"{float(t_str):.17g}")


def test_scan_flag_conflict(tmp_path, capsys):
    assert run("scan", "--axis", "pos", "--g", 5, "--out", tmp_path / "s.csv") == 2
    assert "error:" in capsys.readouterr().err


def test_malformed_trace_reports_line_number(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("t_s,expected_T,counts\n0.0,1.0,50\nnot,a_number,x\n")
    assert run("fit", "--trace", bad, "--out", tmp_path / "f.json") == 2
    assert ":3:" in capsys.readouterr().err


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("g0_mhz = 23.9\nbogus_key = 1\n")
    assert run("transit", "--config", cfg, "--y", 0, "--v", 0.4, "--out", tmp_path / "t.csv") == 2
    assert "unknown key" in capsys.readouterr().err


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# test config\nseed = 5\ntilt_deg = 0\n")
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    # flag overrides the file seed
    run("transit", "--config", cfg, "--seed", 5, "--y", 10, "--v", 0.4, "--out", a)
    run("transit", "--config", cfg, "--y", 10, "--v", 0.4, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_dumped_config_reproduces_run(tmp_path):
    dump = tmp_path / "effective.cfg"
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run(
        "transit", "--y", -16.3, "--v", 0.39, "--seed", 3, "--tilt-deg", 30.0,
        "--flux0-cps", 2e6, "--out", a, "--dump-config", dump,
    )
    assert dump.exists()
    run("transit", "--config", dump, "--y", -16.3, "--v", 0.39, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_ensemble_thermometry_pipeline(tmp_path):
    ens = tmp_path / "ens.csv"
    temp = tmp_path / "temp.json"
    assert run("ensemble", "--n", 2000, "--temperature-uk", 186, "--seed", 5, "--out", ens) == 0
    assert ens.read_text().splitlines()[0] == "v0_mps,t_arr_ms,v_arr_mps"
    assert run("thermometry", "--ensemble", ens, "--out", temp) == 0
    est = json.loads(temp.read_text())
    assert est["temperature_k"] == pytest.approx(186e-6, rel=0.15)
    assert est["n_used"] == 2000


def test_thermometry_from_fit_directory(tmp_path):
    from cavity_transit.fileio import write_fit_json
    from cavity_transit import FallConfig, arrival_from_initial

    fits_dir = tmp_path / "fits"
    fits_dir.mkdir()
    fc = FallConfig()
    rng = np.random.default_rng(0)
    for i, v0 in enumerate(rng.normal(0.0, 0.1079, 200)):
        t_arr, v_arr = arrival_from_initial(fc, v0)
        write_fit_json(
            fits_dir / f"fit_{i:03d}.json",
            FitResult(FitParams(0.0, v_arr, t_arr), 0.1, 0.005, 1e-6, -100.0, -150.0, True, 1),
        )
    temp = tmp_path / "temp.json"
    assert run("thermometry", "--fits", fits_dir, "--out", temp) == 0
    est = json.loads(temp.read_text())
    assert est["temperature_k"] == pytest.approx(186e-6, rel=0.3)


def test_batch_fit_directory_feeds_thermometry(tmp_path):
    traces = tmp_path / "traces"
    traces.mkdir()
    for seed in range(12):
        run("transit", "--y", -16.3, "--v", 0.39 + 0.003 * seed, "--seed", seed,
            "--out", traces / f"transit_{seed:02d}.csv")
    fits = tmp_path / "fits"
    assert run("fit", "--trace", traces, "--out", fits) == 0
    outputs = sorted(fits.glob("*.json"))
    assert [p.stem for p in outputs] == [f"transit_{s:02d}" for s in range(12)]
    assert all(json.loads(p.read_text())["converged"] for p in outputs)
    temp = tmp_path / "temp.json"
    assert run("thermometry", "--fits", fits, "--out", temp) == 0
    assert json.loads(temp.read_text())["n_used"] == 12


def test_batch_fit_empty_directory(tmp_path, capsys):
    empty = tmp_path / "none"
    empty.mkdir()
    assert run("fit", "--trace", empty, "--out", tmp_path / "fits") == 2
    assert "no trace CSV" in capsys.readouterr().err


def test_ensemble_timing_jitter_flag(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run("ensemble", "--n", 100, "--seed", 1, "--out", a)
    run("ensemble", "--n", 100, "--seed", 1, "--timing-jitter-ms", 5, "--out", b)
    assert a.read_bytes() != b.read_bytes()
    col_v0 = lambda p: [line.split(",")[0] for line in p.read_text().splitlines()[1:]]
    assert col_v0(a) == col_v0(b)


def test_thermometry_input_flags_conflict(tmp_path, capsys):
    assert run("thermometry", "--out", tmp_path / "t.json") == 2
    err = capsys.readouterr().err
    assert "exactly one" in err


def test_degeneracy_report_json(tmp_path):
    out = tmp_path / "deg.json"
    assert run("degeneracy", "--y", 10, "--v", 0.42, "--out", out) == 0
    reports = {r["transform"]: r for r in json.loads(out.read_text())}
    assert not reports["y-mirror"]["degenerate"]
    assert reports["z-antinode-shift"]["degenerate"]
    assert reports["z-mirror"]["degenerate"]


def test_fit_nonconvergence_exit_code(tmp_path, monkeypatch):
    import cavity_transit.cli as cli

    stuck = FitResult(FitParams(0.0, 0.42, 0.0), 1.0, 0.01, 1e-6, -1.0, -1.0, False, 99)
    monkeypatch.setattr(cli, "fit_transit", lambda *a, **kw: stuck)
    trace = tmp_path / "trace.csv"
    run("transit", "--y", 0, "--v", 0.42, "--out", trace)
    assert run("fit", "--trace", trace, "--out", tmp_path / "f.json") == 3
    assert json.loads((tmp_path / "f.json").read_text())["converged"] is False


def test_no_transit_trace_is_validation_error(tmp_path, capsys):
    flat = tmp_path / "flat.csv"
    lines = ["t_s,expected_T,counts"] + [f"{i * 1e-5:.17g},1,50" for i in range(50)]
    flat.write_text("\n".join(lines) + "\n")
    assert run("fit", "--trace", flat, "--out", tmp_path / "f.json") == 2
    assert "no transit dip" in capsys.readouterr().err


def test_mode_image_nodal_line_at_45_degrees(tmp_path):
    out = tmp_path / "mode.csv"
    assert run("mode-image", "--samples", 121, "--extent-um", 40, "--out", out) == 0
    assert out.with_suffix(".svg").exists()
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    data = np.array([[float(a), float(b), float(c)] for a, b, c in rows])
    n = 121
    x = data[:n, 0]
    grid = data[:, 2].reshape(n, n)
    y_vals = data[::n, 1]
    # per-row intensity minimum traces the nodal line x(y)
    x_min = np.array([x[np.argmin(grid[j])] for j in range(n)])
    slope = np.polyfit(y_vals, x_min, 1)[0]
    angle = math.degrees(math.atan(abs(slope)))
    assert abs(angle - 45.0) <= 1.0


def test_mode_image_tem00_is_circularly_symmetric(tmp_path):
    # iso-level radii of the underlying field, located by root finding
    geo = ModeGeometry(tilt_deg=45.0)
    idx = ModeIndex(0, 0)
    peak = mode_amplitude(idx, geo, ModePoint(0.0, 0.0, 0.0)) ** 2
    level = 0.5 * peak

    def radius(phi):
        f = lambda r: mode_amplitude(
            idx, geo, ModePoint(r * math.cos(phi), r * math.sin(phi), 0.0)
        ) ** 2 - level
        return brentq(f, 1e-6, 3 * geo.w0_um, xtol=1e-13)

    radii = [radius(phi) for phi in np.linspace(0, 2 * math.pi, 37)]
    assert max(radii) - min(radii) < 1e-9


def test_mode_image_tem01_untilted_nodal_line_along_x(tmp_path):
    out = tmp_path / "mode01.csv"
    assert (
        run("mode-image", "--mode-m", 0, "--mode-n", 1, "--tilt-deg", 0,
            "--samples", 81, "--extent-um", 40, "--out", out) == 0
    )
    rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
    data = np.array([[float(a), float(b), float(c)] for a, b, c in rows])
    n = 81
    grid = data[:, 2].reshape(n, n)
    y_vals = data[::n, 1]
    # for every column the minimum over y sits on the y = 0 row
    j_zero = int(np.argmin(np.abs(y_vals)))
    assert np.all(np.argmin(grid, axis=0) == j_zero)
