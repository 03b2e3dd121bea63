import numpy as np
import pytest
from unittest.mock import patch

from src.amplifier.signals import AmplifierSpec, constant, cosine
from src.exceptions import BrokenPTError, NoMetricError
from src.modeling.ep_solver import toy_eta
from src.modeling.pipeline import (
    ModeState,
    amplifier_pipeline,
    numeric_toy_pipeline,
    static_pipeline,
    toy_pipeline,
)


@pytest.fixture(scope="module")
def toy():
    return toy_pipeline(4.0, 4.0, "1+", "smooth", (1.0, 10.0))


def test_toy_pipeline_mode_and_coefficients(toy):
    """g = (η₀ + ig₃)/g₁ avec g₁ = η², g₃ = −tηη̇."""
    eta, etadot, _ = toy_eta(4.0, 4.0, "1+", 2.0, "smooth")
    g = complex(toy.mode(2.0))
    assert g.real == pytest.approx(1.0 / eta**2)
    assert g.imag == pytest.approx(-2.0 * eta * etadot / eta**2)


def test_toy_pipeline_g_dot_matches_finite_difference(toy):
    h = 1e-5
    dg1, dg2, dg3 = toy.g_dot(3.0)
    plus, minus = toy.g_coefficients(3.0 + h), toy.g_coefficients(3.0 - h)
    assert dg1 == pytest.approx((plus.g1 - minus.g1) / (2 * h), abs=1e-6)
    assert dg2 == pytest.approx((plus.g2 - minus.g2) / (2 * h), abs=1e-6)
    assert dg3 == pytest.approx((plus.g3 - minus.g3) / (2 * h), abs=1e-6)


def test_toy_pipeline_mode_dot(toy):
    h = 1e-5
    fd = (complex(toy.mode(2.0 + h)) - complex(toy.mode(2.0 - h))) / (2 * h)
    assert complex(toy.mode_dot(2.0)) == pytest.approx(fd, abs=1e-6)


def test_state_snapshot(toy):
    state = toy.state(2.0)
    assert isinstance(state, ModeState)
    assert state.M0 == pytest.approx(2.0)
    assert state.Omega0_sq == pytest.approx(0.25)
    assert state.g_coefficients.ermakov_residual == pytest.approx(0.0, abs=1e-12)
    assert toy.omega_rho(2.0) == pytest.approx(state.omega_rho)


@patch("src.modeling.ep_solver.logger")
def test_static_pipeline_is_stationary(mock_logger):
    """M₀ = Ω₀ = 1 : g ≡ 1 et ω_ρ ≡ 1."""
    pipeline = static_pipeline(1.0, 1.0, (0.0, 3.0))
    for t in (0.0, 1.5, 3.0):
        assert complex(pipeline.mode(t)) == pytest.approx(1.0, abs=1e-8)
        assert pipeline.omega_rho(t) == pytest.approx(1.0, abs=1e-8)


@patch("src.modeling.ep_solver.logger")
@pytest.mark.parametrize("branch", ["1+", "2-"])
def test_numeric_toy_pipeline_tracks_closed_form(mock_logger, branch):
    """Sur la branche négative le signe est replié : g ne dépend que de η²."""
    numeric = numeric_toy_pipeline(4.0, 4.0, branch, (1.0, 10.0), tol=1e-11)
    exact = toy_pipeline(4.0, 4.0, branch, "smooth", (1.0, 10.0))
    for t in (1.0, 4.0, 10.0):
        assert complex(numeric.mode(t)) == pytest.approx(complex(exact.mode(t)), abs=1e-5)


@patch("src.modeling.ep_solver.logger")
@patch("src.modeling.pipeline.logger")
@patch("src.amplifier.metric.logger")
def test_amplifier_pipeline_constant_spec(mock_metric_logger, mock_logger, mock_ep_logger):
    """Amplificateur constant : M₀ et Ω₀² constants, η reste au point fixe."""
    spec = AmplifierSpec.from_constants(1.0, 0.1, 0.2)
    pipeline = amplifier_pipeline(spec, 1.0, (0.0, 2.0), n_samples=5)
    m0 = float(pipeline.M0(1.0))
    om2 = float(pipeline.Omega0_sq(1.0))
    assert m0 > 0 and om2 > 0
    eta = float(pipeline.solution.eta(2.0))
    assert eta == pytest.approx((m0 * np.sqrt(om2)) ** -0.5, rel=1e-8)


@patch("src.modeling.ep_solver.logger")
@patch("src.modeling.pipeline.logger")
@patch("src.amplifier.metric.logger")
def test_amplifier_pipeline_modulated_spec(mock_metric_logger, mock_logger, mock_ep_logger):
    spec = AmplifierSpec(
        omega=constant(1.0), alpha=cosine(0.02, 1.0, offset=0.1), beta=constant(0.2), mass=constant(1.0)
    )
    pipeline = amplifier_pipeline(spec, 1.0, (0.0, 2.0), n_samples=21)
    g = pipeline.g_coefficients(np.linspace(0.0, 2.0, 5))
    np.testing.assert_allclose(g.ermakov_residual, 0.0, atol=1e-8)


@patch("src.amplifier.metric.logger")
def test_amplifier_pipeline_broken_pt_has_no_metric(mock_logger):
    spec = AmplifierSpec.from_constants(1.0, 0.1, -0.2)
    with pytest.raises((NoMetricError, BrokenPTError)):
        amplifier_pipeline(spec, 1.0, (0.0, 1.0), n_samples=3)
