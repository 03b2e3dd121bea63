import time
from unittest.mock import patch

import numpy as np
import pytest

from src.amplifier.metric import (
    MetricParams,
    Kappa0Constraint,
    hermitian_oscillator,
    hermitian_oscillator_series,
    hermitized_coeffs,
    k_matrix,
    k_matrix_closed,
    kappa0_constraint,
    metric_report,
    solve_metric,
    solve_metric_series,
)
from src.amplifier.signals import AmplifierSpec, constant, cosine
from src.exceptions import (
    BrokenPTError,
    HermitizationError,
    InvalidArgumentError,
    NoMetricError,
)
from src.numerics.linalg import mat_exp

REFERENCE_KAPPA0 = 5.10208


@pytest.fixture
def reference_spec():
    """Amplificateur de référence ω=1, α=0.1, β=0.2, m=1."""
    return AmplifierSpec.from_constants(1.0, 0.1, 0.2, 1.0)


# --- MetricParams et matrice k̂ ---
def test_metric_params_from_kappas():
    p = MetricParams.from_kappas(1.0, REFERENCE_KAPPA0)
    assert p.theta == pytest.approx(np.sqrt(REFERENCE_KAPPA0**2 - 4.0))
    assert not p.is_identity


def test_metric_params_requires_kappa0_above_bound():
    with pytest.raises(InvalidArgumentError):
        MetricParams.from_kappas(1.0, 1.5)


def test_metric_params_inconsistent_theta():
    with pytest.raises(InvalidArgumentError):
        MetricParams(1.0, 3.0, 2.0)


def test_k_matrix_closed_matches_matrix_exponential():
    """Les neuf éléments en forme close coïncident avec e^K̂."""
    p = MetricParams.from_kappas(1.0, REFERENCE_KAPPA0)
    np.testing.assert_allclose(k_matrix_closed(p), mat_exp(k_matrix(p)), rtol=1e-9, atol=1e-9)


def test_k_matrix_closed_random_parameters():
    """1000 couples (κ, κ₀) tirés au hasard : forme close ≡ e^K̂, en moins d'une seconde."""
    rng = np.random.default_rng(7)
    kappas = rng.uniform(0.05, 2.0, 1000) * rng.choice([-1.0, 1.0], 1000)
    thetas = rng.uniform(1e-3, 3.0, 1000)
    params = [
        MetricParams.from_kappas(k, np.sqrt(theta**2 + 4.0 * k**2)) for k, theta in zip(kappas, thetas)
    ]

    start = time.perf_counter()
    closed = [k_matrix_closed(p) for p in params]
    elapsed = time.perf_counter() - start

    assert elapsed < 1.0
    for p, k_hat in zip(params, closed):
        reference = mat_exp(k_matrix(p))
        assert np.max(np.abs(k_hat - reference)) <= 1e-9 * max(1.0, np.max(np.abs(reference)))


def test_k_matrix_closed_small_theta_series():
    """Sous le seuil θ < 1e-4 la série limite reste cohérente avec e^K̂."""
    kappa0 = 2.0 * np.sqrt(1.0 + 1e-11)
    p = MetricParams.from_kappas(1.0, kappa0)
    assert p.theta < 1e-4
    np.testing.assert_allclose(k_matrix_closed(p), mat_exp(k_matrix(p)), rtol=1e-8, atol=1e-8)


def test_k_matrix_identity_metric():
    np.testing.assert_allclose(k_matrix_closed(MetricParams.identity()), np.eye(3))


# --- Contrainte et résolution ---
def test_constraint_is_nan_at_pole():
    c = Kappa0Constraint(omega=1.0, alpha=0.1, beta=0.2, kappa=1.0)
    assert c.pole == pytest.approx(2.0 / 0.3)
    assert np.isnan(c(c.pole))


def test_constraint_changes_sign_around_reference_root(reference_spec):
    c = kappa0_constraint(reference_spec, 1.0, 0.0)
    assert np.sign(c(5.0)) != np.sign(c(5.2))


def test_solve_metric_reference_value(reference_spec):
    """ω=1, α=0.1, β=0.2, κ=1 : κ₀ ≈ 5.10208."""
    p = solve_metric(reference_spec, 1.0, 0.0)
    assert p.kappa0 == pytest.approx(REFERENCE_KAPPA0, abs=1e-4)
    assert p.theta == pytest.approx(np.sqrt(p.kappa0**2 - 4.0))


@pytest.mark.parametrize(
    "omega, alpha, beta, kappa",
    [(1.0, 0.1, 0.2, 1.0), (1.0, 0.05, 0.3, 0.5), (2.0, 0.3, 0.5, 1.0), (1.0, 0.2, 0.6, 2.0)],
)
def test_solve_metric_root_satisfies_constraint(omega, alpha, beta, kappa):
    """La racine retenue annule la contrainte transcendante à 1e-8 près."""
    spec = AmplifierSpec.from_constants(omega, alpha, beta)
    p = solve_metric(spec, kappa, 0.0)
    assert p.kappa0 > 2.0 * abs(kappa)
    assert abs(kappa0_constraint(spec, kappa, 0.0)(p.kappa0)) <= 1e-8


@patch("src.amplifier.metric.logger")
def test_solve_metric_hermitian_case_returns_identity(mock_logger):
    spec = AmplifierSpec.from_constants(1.0, 0.2, 0.2)
    assert solve_metric(spec, 1.0, 0.0).is_identity
    mock_logger.info.assert_called_once()


def test_solve_metric_requires_nonzero_kappa(reference_spec):
    with pytest.raises(InvalidArgumentError):
        solve_metric(reference_spec, 0.0, 0.0)


@patch("src.amplifier.metric.logger")
def test_solve_metric_no_root_attaches_report(mock_logger):
    """β − α et la contrainte sont de signes opposés : le rapport de balayage est joint."""
    spec = AmplifierSpec.from_constants(1.0, 0.1, -0.2)
    with pytest.raises(NoMetricError) as excinfo:
        solve_metric(spec, 1.0, 0.0)
    assert excinfo.value.report["points"] > 0
    mock_logger.error.assert_called_once()


def test_solve_metric_series_constant_spec(reference_spec):
    metrics, jumps = solve_metric_series(reference_spec, 1.0, [0.0, 0.5, 1.0])
    assert jumps == []
    assert all(m.kappa0 == pytest.approx(metrics[0].kappa0) for m in metrics)


# --- Hermitisation et oscillateur effectif ---
def test_hermitized_coeffs_are_hermitian(reference_spec):
    """Formes réduites et produit k̂·(ω, α, β)ᵀ concordent ; α₀ = β₀."""
    p = solve_metric(reference_spec, 1.0, 0.0)
    c = hermitized_coeffs(reference_spec, p, 0.0)
    assert c.residual < 1e-8
    assert c.omega0 == pytest.approx(c.omega0_matrix, abs=1e-8)
    assert c.alpha0 == pytest.approx(c.alpha0_matrix, abs=1e-8)
    assert c.alpha0 == pytest.approx(c.beta0, abs=1e-8)


@patch("src.amplifier.metric.logger")
def test_hermitized_coeffs_rejects_arbitrary_kappa0(mock_logger, reference_spec):
    """Un κ₀ qui ne vérifie pas la contrainte laisse un résidu d'hermiticité."""
    p = MetricParams.from_kappas(1.0, 3.0)
    with pytest.raises(HermitizationError) as excinfo:
        hermitized_coeffs(reference_spec, p, 0.0)
    assert excinfo.value.residual > 1e-6
    mock_logger.error.assert_called_once()


def test_hermitian_oscillator_identity_metric():
    """α = β : M₀ et Ω₀² de la forme équivalente."""
    spec = AmplifierSpec.from_constants(1.0, 0.1, 0.1)
    c = hermitized_coeffs(spec, MetricParams.identity(), 0.0)
    osc = hermitian_oscillator(c, spec, 0.0)
    assert osc.M0 == pytest.approx(1.0 / 0.8)
    assert osc.Omega0_sq == pytest.approx(1.0 - 0.04)
    assert not osc.inverted


def test_hermitian_oscillator_series_constant(reference_spec):
    m0, om2, jumps = hermitian_oscillator_series(reference_spec, 1.0, np.linspace(0.0, 1.0, 3))
    assert np.ptp(m0) == pytest.approx(0.0, abs=1e-10)
    assert np.all(m0 > 0)
    assert jumps == []


def test_hermitian_oscillator_series_modulated():
    spec = AmplifierSpec(
        omega=constant(1.0), alpha=cosine(0.02, 1.0, offset=0.1), beta=constant(0.2), mass=constant(1.0)
    )
    m0, om2, _ = hermitian_oscillator_series(spec, 1.0, np.linspace(0.0, 3.0, 7))
    assert m0.shape == om2.shape == (7,)
    assert np.ptp(m0) > 0.0


# --- Rapport ---
@patch("src.amplifier.metric.logger")
def test_metric_report_reference(mock_logger, reference_spec):
    report = metric_report(reference_spec, 1.0)
    assert report["kappa0"] == pytest.approx(REFERENCE_KAPPA0, abs=1e-4)
    assert report["identity"] is False
    assert set(report) >= {"M0", "Omega0_sq", "residual", "inverted"}


@patch("src.amplifier.metric.logger")
def test_metric_report_broken_pt(mock_logger):
    spec = AmplifierSpec.from_constants(1.0, -0.1, 0.2)
    with pytest.raises(BrokenPTError):
        metric_report(spec, 1.0)
    mock_logger.error.assert_called_once()
