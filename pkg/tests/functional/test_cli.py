import json

import numpy as np
import pandas as pd
import pytest

from src.cli import build_parser, main
from src.data_processing.export import read_wigner_grid

SMALL_RUN = {
    "pt_region": {"n": 5},
    "ep": {"n_times": 3, "t_start": 1.0, "t_end": 2.0},
    "wigner": {"times": [1.0, 2.0], "nx": 16, "np": 16},
    "density": {"nx": 5, "coefficients": {"0": [1.0, 0.0], "1": [0.5, 0.0]}},
}


@pytest.fixture
def run_config(tmp_path):
    """Configuration réduite écrite sur disque."""
    path = tmp_path / "run.json"
    path.write_text(json.dumps(SMALL_RUN), encoding="utf-8")
    return path


def _run(run_config, out, *command):
    return main(["--config", str(run_config), "--out", str(out), *command])


def test_parser_requires_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_pt_region(run_config, tmp_path):
    out = tmp_path / "out"
    assert _run(run_config, out, "pt-region") == 0
    df = pd.read_csv(out / "pt_region.csv")
    assert len(df) == 25
    row = df[(df["alpha"] == 0.0) & (df["beta"] == 0.0)]
    assert bool(row["unbroken"].iloc[0])


def test_metric_solve_prints_reference_root(run_config, tmp_path, capsys):
    out = tmp_path / "out"
    assert _run(run_config, out, "metric-solve") == 0
    printed = capsys.readouterr().out
    assert "kappa0 = 5.102" in printed
    report = pd.read_csv(out / "metric_report.csv")
    assert abs(report["kappa0"].iloc[0] - 5.10208) < 1e-4


def test_metric_solve_broken_pt_exit_code(tmp_path, capsys):
    """Symétrie PT brisée : code de sortie 3."""
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"amplifier": {"alpha": -0.1}}), encoding="utf-8")
    assert main(["--config", str(path), "--out", str(tmp_path), "metric-solve"]) == 3
    assert "PT" in capsys.readouterr().err


def test_missing_config_exit_code(tmp_path):
    assert main(["--config", str(tmp_path / "absent.json"), "pt-region"]) == 2


def test_invalid_config_exit_code(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"ep": {"c1": 0.2}}), encoding="utf-8")
    assert main(["--config", str(path), "--out", str(tmp_path), "pt-region"]) == 2


def test_negative_tolerance_exit_code(run_config, tmp_path):
    assert main(["--config", str(run_config), "--tol", "-1", "pt-region"]) == 2


def test_ep_toy_writes_four_branches(run_config, tmp_path, capsys):
    out = tmp_path / "out"
    assert _run(run_config, out, "ep", "toy") == 0
    for tag in ("1p", "1m", "2p", "2m"):
        df = pd.read_csv(out / f"ep_trajectory_{tag}.csv")
        assert list(df.columns) == ["t", "eta", "etadot", "g1", "g2", "g3", "residual"]
        assert len(df) == 3
    assert "variante lisse retenue : smooth" in capsys.readouterr().out


def test_ep_solve_from_amplifier(run_config, tmp_path):
    out = tmp_path / "out"
    assert _run(run_config, out, "ep", "solve") == 0
    df = pd.read_csv(out / "ep_trajectory_numeric.csv")
    assert (df["eta"] > 0).all()
    assert df["residual"].abs().max() < 1e-8


def test_evolve_outputs(run_config, tmp_path):
    out = tmp_path / "out"
    assert _run(run_config, out, "evolve") == 0
    for name in ("trajectory", "phases", "density", "covariance"):
        assert (out / f"evolve_{name}.csv").exists()
    density = pd.read_csv(out / "evolve_density.csv")
    assert len(density) == 3 * 5
    phases = pd.read_csv(out / "evolve_phases.csv")
    assert sorted(phases["n"].unique()) == [0, 1]
    first = phases[phases["t"] == phases["t"].min()]
    np.testing.assert_allclose(first[["theta_d", "theta_g_im", "theta_g_re"]], 0.0, atol=1e-14)


def test_wigner_with_oracle_check(run_config, tmp_path, capsys):
    out = tmp_path / "out"
    assert _run(run_config, out, "--oracle-check", "wigner") == 0
    meta, df = read_wigner_grid(out / "wigner_t1.csv")
    assert meta["nx"] == 16 and meta["np"] == 16
    assert len(df) == 256
    origin = pd.read_csv(out / "wigner_origin.csv")
    assert list(origin.columns) == ["t", "W00"]
    assert (origin["W00"] > 0).all()
    assert "écart forme close / oracle" in capsys.readouterr().out
