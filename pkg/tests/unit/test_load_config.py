import json

import pytest
from unittest.mock import patch

from src import config
from src.api.schemas import RunConfig
from src.data_processing.load_config import (
    build_amplifier_spec,
    load_run_config,
    parse_run_config,
)
from src.exceptions import ConfigError


@patch("src.data_processing.load_config.logger")
def test_load_run_config_defaults(mock_logger):
    """Sans fichier, les paramètres des figures sont utilisés."""
    cfg = load_run_config()
    assert isinstance(cfg, RunConfig)
    assert cfg.metric.kappa == config.DEFAULT_KAPPA
    assert cfg.ep.branch == config.DEFAULT_BRANCH
    assert cfg.wigner.times == config.WIGNER_TIMES
    mock_logger.info.assert_called_once()


@patch("src.data_processing.load_config.logger")
def test_load_run_config_from_file(mock_logger, tmp_path):
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps(
            {
                "amplifier": {"alpha": {"kind": "cosine", "amp": 0.05, "freq": 2.0, "offset": 0.1}},
                "ep": {"c1": 2.0, "branch": "2-"},
                "density": {"coefficients": {"0": [1.0, 0.0], "1": [0.0, 1.0]}},
            }
        ),
        encoding="utf-8",
    )
    cfg = load_run_config(path)
    assert cfg.ep.c1 == 2.0 and cfg.ep.branch == "2-"
    assert cfg.density.complex_coefficients() == {0: 1.0 + 0j, 1: 1j}
    spec = build_amplifier_spec(cfg)
    assert spec.sample(0.0)[1] == pytest.approx(0.15)


@patch("src.data_processing.load_config.logger")
def test_load_run_config_missing_file(mock_logger, tmp_path):
    with pytest.raises(ConfigError) as excinfo:
        load_run_config(tmp_path / "absent.json")
    assert excinfo.value.exit_code == 2
    mock_logger.error.assert_called_once()


@patch("src.data_processing.load_config.logger")
def test_load_run_config_invalid_json(mock_logger, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_run_config(path)


@pytest.mark.parametrize(
    "raw",
    [
        {"unknown_section": {}},
        {"ep": {"c1": 0.5}},
        {"ep": {"branch": "3+"}},
        {"ep": {"t_start": 5.0, "t_end": 2.0}},
        {"wigner": {"nx": 8}},
        {"wigner": {"times": []}},
        {"density": {"x_min": 1.0, "x_max": -1.0}},
        {"amplifier": {"omega": {"amp": 1.0}}},
        {"tolerances": {"root": -1.0}},
    ],
)
@patch("src.data_processing.load_config.logger")
def test_parse_run_config_rejects_invalid_documents(mock_logger, raw):
    """Clés inconnues et valeurs hors domaine : ConfigError avant tout calcul."""
    with pytest.raises(ConfigError):
        parse_run_config(raw)


@patch("src.data_processing.load_config.logger")
def test_build_amplifier_spec_invalid_descriptor(mock_logger):
    cfg = parse_run_config({"amplifier": {"omega": {"kind": "sawtooth"}}})
    with pytest.raises(ConfigError):
        build_amplifier_spec(cfg)
