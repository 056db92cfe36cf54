import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from entanglement_engine.cli import main, run
from entanglement_engine.datasets import read_csv

DEMO_CONFIGS = Path(__file__).resolve().parents[1] / "demos" / "configs"


def write_cfg(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


def quiet(*_):
    pass


def test_evolve_final_current(tmp_path):
    cfg = write_cfg(tmp_path, "initial_state = ground\n[params]\nt_l = 2\n")
    assert run("evolve", cfg, out=tmp_path, echo=quiet) == 0
    meta, cols, rows = read_csv(tmp_path / "evolve.csv")
    assert rows.shape == (201, len(cols))
    final = rows[-1, cols.index("current_l_over_gamma_l")]
    assert final == pytest.approx(0.2005, abs=2e-3)
    np.testing.assert_allclose(rows[:, cols.index("t_gamma")], np.linspace(0, 20, 201), atol=1e-12)
    np.testing.assert_allclose(rows[:, cols.index("current_l_over_gamma_l")],
                               rows[:, cols.index("analytic_current_l_over_gamma_l")], atol=1e-6)
    assert meta["version"] == "0.1.0"
    assert meta["config"]["params"]["t_l"] == 2.0
    assert meta["units"]["t_gamma"] == "1/Gamma"
    assert meta["early_time_rows"] == 1


def test_kur_without_bias_never_violates(tmp_path):
    cfg = write_cfg(tmp_path, "[params]\nmu_l = 0\n")
    assert run("kur", cfg, out=tmp_path, echo=quiet) == 0
    meta, cols, rows = read_csv(tmp_path / "kur.csv")
    assert np.nanmin(rows[:, cols.index("r_left")]) >= 1
    assert meta["violation_windows"]["left_baths_only"] == []


def test_kur_with_bias_reports_windows(tmp_path):
    cfg = write_cfg(tmp_path, "[params]\nmu_l = 2\nt_l = 0.15\n")
    assert run("kur", cfg, out=tmp_path, echo=quiet) == 0
    meta, cols, rows = read_csv(tmp_path / "kur.csv")
    assert meta["violation_windows"]["left_baths_only"]
    assert rows[-1, cols.index("r_left_with_internal")] > 1 > rows[-1, cols.index("r_left")]


def test_noise_dataset(tmp_path):
    cfg = write_cfg(tmp_path, "[grid]\nt_max_in_inverse_gamma = 20\nn_points = 5\n")
    assert run("noise", cfg, out=tmp_path, echo=quiet) == 0
    meta, cols, rows = read_csv(tmp_path / "noise.csv")
    s_ll = rows[-1, cols.index("s_ll_over_gamma_l")]
    assert s_ll == pytest.approx(meta["steady_state"]["s_ll_over_gamma_l"], rel=1e-3)


def test_sweep_files_and_json(tmp_path):
    cfg = write_cfg(tmp_path, "[grid]\nn_points = 3\n[sweep]\nvariable = t_l\nvalues = 0.15, 2\n")
    assert run("evolve", cfg, out=tmp_path, fmt="json", echo=quiet) == 0
    names = sorted(p.name for p in tmp_path.glob("*.json"))
    assert names == ["evolve_t_l=0.15.json", "evolve_t_l=2.json"]
    data = json.loads((tmp_path / "evolve_t_l=2.json").read_text())
    assert data["metadata"]["sweep_value"] == 2.0
    assert len(data["rows"]) == 3 and data["columns"][0] == "t_gamma"
    assert data["rows"][0][data["columns"].index("ratio_i_over_2gc")] is None


def test_sweep_subcommand(tmp_path):
    cfg = write_cfg(tmp_path, "[sweep]\nvariable = t_l\nvalues = 0.1, 0.15, 0.6, 2\n")
    assert run("sweep", cfg, out=tmp_path, threads=2, echo=quiet) == 0
    _, cols, rows = read_csv(tmp_path / "sweep.csv")
    assert rows.shape[0] == 4
    conc = rows[:, cols.index("concurrence")]
    assert conc[0] == 0 and np.all(np.diff(conc[1:]) > 0)


def test_sweep_needs_section(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "")
    assert run("sweep", cfg, out=tmp_path) == 2
    assert "sweep" in capsys.readouterr().err


def test_witness_report(tmp_path):
    cfg = write_cfg(tmp_path, "[params]\nt_l = 2\n")
    assert run("witness", cfg, out=tmp_path, echo=quiet) == 0
    text = (tmp_path / "witness.csv").read_text().splitlines()
    meta = json.loads(text[0].removeprefix("# metadata: "))
    assert meta["i_crit_over_gamma_l"] == pytest.approx(8.445e-4, rel=1e-3)
    ground = next(line for line in text[2:] if line.startswith("ground,"))
    assert int(ground.split(",")[1]) > 0


def test_witness_without_onset_is_numerical_failure(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "[params]\nmu_l = 2\nt_l = 0.15\n")
    assert run("witness", cfg, out=tmp_path) == 3
    assert "critical current" in capsys.readouterr().err


def test_validate_passes(tmp_path):
    cfg = write_cfg(tmp_path, "[params]\nmu_l = 2\nt_l = 0.15\n")
    lines = []
    assert run("validate", cfg, out=tmp_path, echo=lines.append) == 0
    assert sum(line.startswith("PASS") for line in lines) == 8


def test_validate_failure_exits_3(tmp_path, monkeypatch, capsys):
    from entanglement_engine import cli
    from entanglement_engine.validation import CheckResult

    monkeypatch.setattr(cli, "run_invariant_suite",
                        lambda p, t: [CheckResult("trace preservation", False, 1.0, 1e-12)])
    cfg = write_cfg(tmp_path, "")
    assert run("validate", cfg, out=tmp_path, echo=quiet) == 3
    assert "trace preservation" in capsys.readouterr().err


def test_negative_temperature_exits_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "[params]\nt_l = -0.5\n")
    assert run("evolve", cfg, out=tmp_path) == 2
    assert "params.t_l" in capsys.readouterr().err
    assert not list(tmp_path.glob("*.csv"))


def test_bad_threads(tmp_path):
    cfg = write_cfg(tmp_path, "")
    assert run("evolve", cfg, out=tmp_path, threads=0) == 2


def test_deterministic_output(tmp_path):
    cfg = write_cfg(tmp_path, "initial_state = singlet\n[params]\nmu_l = 2\nt_l = 0.15\n"
                              "[grid]\nn_points = 21\n[sweep]\nvariable = t_l\nvalues = 0.15, 0.6\n")
    for name in ("a", "b"):
        assert run("kur", cfg, out=tmp_path / name, threads=2, echo=quiet) == 0
    for path in (tmp_path / "a").iterdir():
        assert path.read_bytes() == (tmp_path / "b" / path.name).read_bytes()


def test_csv_number_format(tmp_path):
    cfg = write_cfg(tmp_path, "[grid]\nn_points = 3\n")
    run("evolve", cfg, out=tmp_path, echo=quiet)
    lines = (tmp_path / "evolve.csv").read_text().splitlines()
    assert lines[0].startswith("# metadata: {")
    assert lines[1].startswith("t_gamma,")
    first = lines[3].split(",")
    assert first[0] == "10"
    assert all(x == f"{float(x):.17g}" for x in first if x)


def test_main_and_module_entry_point(tmp_path):
    cfg = write_cfg(tmp_path, "[grid]\nn_points = 3\n")
    assert main(["evolve", "--config", str(cfg), "--out", str(tmp_path / "m")]) == 0
    proc = subprocess.run([sys.executable, "-m", "entanglement_engine", "evolve", "--config", str(cfg),
                           "--out", str(tmp_path / "n"), "--format", "json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "n" / "evolve.json").exists()


@pytest.mark.parametrize("name", ["fig2.cfg", "fig3.cfg", "fig4a.cfg", "fig4c.cfg", "appendix.cfg"])
def test_demo_configs_parse(name):
    from entanglement_engine.config import load_config

    load_config(DEMO_CONFIGS / name)
