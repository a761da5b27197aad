"""Command-line behavior: formats, exit codes, determinism, round-trips."""

import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import BENCH_ENERGIES
from heun_sextic.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_json_benchmark(capsys):
    code, out, err = run_cli(
        ["spectrum", "--gamma", "2", "--delta", "0", "--epsilon", "-16",
         "--alpha", "48", "-M", "3"],
        capsys,
    )
    assert code == 0, err
    payload = json.loads(out)
    energies = [lv["energy"] for lv in payload["levels"]]
    np.testing.assert_allclose(energies, BENCH_ENERGIES, atol=1e-10)
    assert payload["parameters"]["bhe"]["gamma"] == 2.0
    # the equation-side parameters here admit a well-side reading
    assert payload["parameters"]["qes"]["M"] == 3
    diffs = [abs(lv["closed_form_diff"]) for lv in payload["levels"]]
    assert max(diffs) < 1e-10


def test_spectrum_m0_single_line(capsys):
    code, out, _ = run_cli(
        ["spectrum", "-a", "1", "-s", "0.25", "-M", "0", "--format", "csv"],
        capsys,
    )
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("n,energy,q_root")
    assert len(lines) == 2
    assert float(lines[1].split(",")[1]) == 0.0


def test_spectrum_oracle_column(capsys):
    code, out, _ = run_cli(
        ["spectrum", "-a", "1", "-s", "1", "-M", "1", "--verify"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    for lv in payload["levels"]:
        assert abs(lv["oracle_diff"]) <= 1e-3
        assert lv["oracle_error_bar"] > 0


def test_spectrum_csv_deterministic(capsys):
    argv = ["spectrum", "-a", "1.7", "-s", "0.8", "-M", "2", "--format", "csv"]
    code1, out1, _ = run_cli(argv, capsys)
    code2, out2, _ = run_cli(argv, capsys)
    assert code1 == code2 == 0
    assert out1 == out2


def test_spectrum_file_output_round_trip(tmp_path, capsys):
    target = tmp_path / "spectrum.json"
    code, _, _ = run_cli(
        ["spectrum", "-a", "1", "-s", "1", "-M", "3", "--out", str(target)],
        capsys,
    )
    assert code == 0
    text = target.read_text(encoding="utf-8")
    payload = json.loads(text)
    assert json.dumps(payload, indent=2) + "\n" == text
    assert "\r" not in text


def test_csv_uses_17_significant_digits(tmp_path, capsys):
    from heun_sextic import solve_spectrum_qes, QesParams

    target = tmp_path / "spectrum.csv"
    code, _, _ = run_cli(
        ["spectrum", "-a", "1", "-s", "1", "-M", "3",
         "--format", "csv", "--out", str(target)],
        capsys,
    )
    assert code == 0
    rows = target.read_text(encoding="utf-8").strip().split("\n")[1:]
    parsed = [float(row.split(",")[1]) for row in rows]
    # 17 significant digits reimport to the exact binary64 values
    exact = solve_spectrum_qes(QesParams(a=1.0, b=0.0, s=1.0, M=3)).energies
    assert parsed == list(exact)


def test_exit_usage_on_mixed_parametrization(capsys):
    code, _, err = run_cli(
        ["spectrum", "-a", "1", "-s", "1", "--gamma", "2", "-M", "1"], capsys
    )
    assert code == 2
    assert "parametrization" in err


def test_exit_usage_on_bad_domain(capsys):
    code, _, err = run_cli(["spectrum", "-a", "-1", "-s", "1", "-M", "1"], capsys)
    assert code == 2
    assert "a must be positive" in err


def test_exit_usage_on_missing_m(capsys):
    code, _, err = run_cli(["spectrum", "-a", "1", "-s", "1"], capsys)
    assert code == 2


def test_exit_usage_on_delta_spectrum(capsys):
    code, _, err = run_cli(
        ["spectrum", "--gamma", "2", "--delta", "1", "--epsilon", "-16",
         "--alpha", "48", "-M", "3"],
        capsys,
    )
    assert code == 2
    assert "delta" in err


def test_wavefunction_files_and_nodes(tmp_path, capsys):
    out_dir = tmp_path / "wf"
    code, out, _ = run_cli(
        ["wavefunction", "-a", "1", "-s", "1", "-M", "3",
         "--out", str(out_dir), "--normalize"],
        capsys,
    )
    assert code == 0
    for n in range(4):
        path = out_dir / f"psi_n{n}.csv"
        assert path.exists()
        header = path.read_text().split("\n")[0]
        assert header == "x,psi,psi_normalized"
    sidecar = json.loads((out_dir / "nodes.json").read_text())
    assert [lv["nodes"] for lv in sidecar["levels"]] == [0, 1, 2, 3]

    data = np.loadtxt(out_dir / "psi_n2.csv", delimiter=",", skiprows=1)
    xs, _, psi_norm = data.T
    norm = np.trapezoid(psi_norm**2, xs)
    assert norm == pytest.approx(1.0, rel=1e-10)


def test_wavefunction_m0_positive(tmp_path, capsys):
    out_dir = tmp_path / "wf0"
    code, _, _ = run_cli(
        ["wavefunction", "-a", "1", "-s", "1", "-M", "0",
         "--out", str(out_dir), "--x-min", "0.01"],
        capsys,
    )
    assert code == 0
    data = np.loadtxt(out_dir / "psi_n0.csv", delimiter=",", skiprows=1)
    assert np.all(data[:, 1] > 0)


def test_wavefunction_level_subset(tmp_path, capsys):
    out_dir = tmp_path / "wfsub"
    code, _, _ = run_cli(
        ["wavefunction", "-a", "1", "-s", "1", "-M", "3",
         "--out", str(out_dir), "--levels", "1,3"],
        capsys,
    )
    assert code == 0
    assert (out_dir / "psi_n1.csv").exists()
    assert (out_dir / "psi_n3.csv").exists()
    assert not (out_dir / "psi_n0.csv").exists()


def test_wavefunction_bad_levels(tmp_path, capsys):
    code, _, err = run_cli(
        ["wavefunction", "-a", "1", "-s", "1", "-M", "1",
         "--out", str(tmp_path / "x"), "--levels", "5"],
        capsys,
    )
    assert code == 2
    assert "exceed" in err


def test_wavefunction_tail_below_threshold(tmp_path, capsys):
    # a grid pushed far past the turning point shows only negligible tail
    out_dir = tmp_path / "wftail"
    code, _, _ = run_cli(
        ["wavefunction", "-a", "1", "-s", "1", "-M", "0",
         "--out", str(out_dir), "--x-max", "8", "--points", "400"],
        capsys,
    )
    assert code == 0
    data = np.loadtxt(out_dir / "psi_n0.csv", delimiter=",", skiprows=1)
    xs, psi = data.T
    peak = np.max(np.abs(psi))
    assert np.all(np.abs(psi[xs > 6.0]) < 1e-12 * peak)


def test_potential_benchmark_table(tmp_path, capsys):
    target = tmp_path / "pot.csv"
    code, _, _ = run_cli(
        ["potential", "--gamma", "2", "--delta", "0", "--epsilon", "-16",
         "--alpha", "48", "--format", "csv", "--out", str(target)],
        capsys,
    )
    assert code == 0
    lines = target.read_text().strip().split("\n")
    data_rows = [ln for ln in lines if not ln.startswith("#")][1:]
    assert len(data_rows) == 500
    x0, v0 = (float(tok) for tok in data_rows[0].split(","))
    assert x0 == 0.05
    assert v0 == pytest.approx(0.75 / 0.05**2 - 18.0 * 0.05**2 + 0.05**6)


def test_potential_m0_terms(capsys):
    code, out, _ = run_cli(
        ["potential", "--gamma", "2", "--delta", "0.5", "--epsilon", "-16",
         "--alpha", "48", "--case", "0"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["solutions_computed"] is False
    exponents = sorted(t["exponent"] for t in payload["terms"])
    assert exponents == [-2.0, -1.0, 1.0, 2.0]


def test_potential_m1_exponential_terms(capsys):
    code, out, _ = run_cli(
        ["potential", "--gamma", "2", "--delta", "0.5", "--epsilon", "-16",
         "--alpha", "48", "--case", "1", "--x-min", "-1", "--x-max", "1"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert all(t["exponential"] for t in payload["terms"])


def test_potential_invalid_case(capsys):
    code, _, err = run_cli(
        ["potential", "-a", "1", "-s", "1", "-M", "1", "--case", "0.3"], capsys
    )
    assert code == 2


def test_verify_passes(tmp_path, capsys):
    target = tmp_path / "verdict.json"
    code, _, _ = run_cli(["verify", "--out", str(target)], capsys)
    assert code == 0
    verdict = json.loads(target.read_text())
    assert verdict["all_passed"] is True
    assert len(verdict["checks"]) == 14
    assert verdict["runtime_seconds"] < 60.0


def test_verify_injection_negative_control(tmp_path, capsys):
    target = tmp_path / "bad.json"
    code, _, _ = run_cli(
        ["verify", "--inject-wrong-centrifugal", "--out", str(target)], capsys
    )
    assert code == 3
    verdict = json.loads(target.read_text())
    failed = [c["name"] for c in verdict["checks"] if not c["passed"]]
    assert failed == ["schrodinger-residual"]


def test_verify_env_tolerance(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HEUN_SEXTIC_TOL", "1e-30")
    target = tmp_path / "strict.json"
    code, _, _ = run_cli(["verify", "--out", str(target)], capsys)
    assert code == 3  # nothing satisfies 1e-30
    assert json.loads(target.read_text())["tolerance"] == 1e-30


def test_figures_outputs(tmp_path, capsys):
    out_dir = tmp_path / "figs"
    code, out, _ = run_cli(["figures", "--out", str(out_dir)], capsys)
    assert code == 0
    names = {p.name for p in out_dir.iterdir()}
    assert names == {
        "potential.csv", "levels.csv",
        "psi_n0.csv", "psi_n1.csv", "psi_n2.csv", "psi_n3.csv",
    }
    levels = np.loadtxt(out_dir / "levels.csv", delimiter=",", skiprows=1)
    np.testing.assert_allclose(levels[:, 1], BENCH_ENERGIES, atol=1e-10)
    psi = np.loadtxt(out_dir / "psi_n3.csv", delimiter=",", skiprows=1)
    assert psi.shape == (601, 2)


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "heun_sextic",
         "spectrum", "-a", "1", "-s", "1", "-M", "1"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    payload = json.loads(proc.stdout)
    assert len(payload["levels"]) == 2
