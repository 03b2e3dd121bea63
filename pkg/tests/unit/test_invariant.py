import numpy as np
import pytest
from unittest.mock import patch

from src.exceptions import DiagonalizationError, InvalidArgumentError
from src.modeling.ep_solver import GCoefficients, g_from_eta, toy_signals, toy_solution
from src.modeling.invariant import (
    SIGMA_Y,
    SIGMA_Z,
    QuadForm2,
    invariant_eigenvalue,
    invariant_reconstruction_check,
    ladder_coeffs,
    lambda_matrix,
    symplectic_diag,
)


def _random_g(rng) -> GCoefficients:
    """g₁ > 0, g₃ quelconque, g₂ fixé par g₁g₂ − g₃² = 1."""
    g1 = rng.uniform(0.2, 5.0)
    g3 = rng.uniform(-3.0, 3.0)
    return GCoefficients(g1, (1.0 + g3**2) / g1, g3)


@pytest.fixture
def toy_g():
    sol = toy_solution(4.0, 4.0, "1+")
    M0, _ = toy_signals()
    return g_from_eta(sol, M0, 2.0)


def test_quad_form_rejects_indefinite():
    with pytest.raises(InvalidArgumentError):
        QuadForm2(1.0, 1.0, 2.0)


def test_lambda_matrix_eigenvalues(toy_g):
    """Valeurs propres de Λ = ±iη₀."""
    eigvals = np.sort_complex(np.linalg.eigvals(lambda_matrix(QuadForm2.from_g(toy_g))))
    np.testing.assert_allclose(eigvals, [-1j, 1j], atol=1e-10)


def test_ladder_commutator_is_one():
    rng = np.random.default_rng(1)
    for _ in range(10):
        assert ladder_coeffs(_random_g(rng)).commutator == pytest.approx(1.0, abs=1e-12)


def test_left_eigenvector_relation(toy_g):
    """u₋Λ = −iη₀u₋."""
    c = ladder_coeffs(toy_g)
    u = np.array([c.u11, c.u12])
    lam = lambda_matrix(QuadForm2.from_g(toy_g))
    np.testing.assert_allclose(u @ lam, -1j * u, atol=1e-12)


def test_symplectic_diag_properties(toy_g):
    """QQ⁻¹ = I, Q⁻¹ΛQ = Λ_D et Q† = −σ_z·Q⁻¹·σ_y."""
    pair = symplectic_diag(toy_g)
    lam = lambda_matrix(QuadForm2.from_g(toy_g))
    np.testing.assert_allclose(pair.Qinv @ pair.Q, np.eye(2), atol=1e-12)
    np.testing.assert_allclose(pair.Qinv @ lam @ pair.Q, pair.LambdaD, atol=1e-12)
    np.testing.assert_allclose(pair.Q.conj().T, -SIGMA_Z @ pair.Qinv @ SIGMA_Y, atol=1e-12)


def test_invariant_properties_over_random_coefficients():
    """1000 tirages (g₁, g₂, g₃, η₀) : spectre de Λ, relation Q† et reconstruction de Î."""
    rng = np.random.default_rng(11)
    for _ in range(1000):
        eta0 = rng.uniform(0.2, 3.0)
        g1 = rng.uniform(0.2, 5.0)
        g3 = rng.uniform(-3.0, 3.0)
        g = GCoefficients(g1, (eta0**2 + g3**2) / g1, g3, eta0)

        eigvals = np.sort_complex(np.linalg.eigvals(lambda_matrix(QuadForm2.from_g(g))))
        np.testing.assert_allclose(eigvals, [-1j * eta0, 1j * eta0], atol=1e-10)

        pair = symplectic_diag(g)
        np.testing.assert_allclose(pair.Q.conj().T, -SIGMA_Z @ pair.Qinv @ SIGMA_Y, atol=1e-12)
        assert invariant_reconstruction_check(g) <= 1e-10


def test_forward_and_inverse_maps(toy_g):
    c = ladder_coeffs(toy_g)
    np.testing.assert_allclose(c.inverse @ c.forward, np.eye(2), atol=1e-12)


def test_invariant_reconstruction_random():
    """Î = 2η₀(â₊â₋ + 1/2) redonne (g₁, g₂, g₃) sans terme constant."""
    rng = np.random.default_rng(7)
    for _ in range(20):
        assert invariant_reconstruction_check(_random_g(rng)) < 1e-12


def test_invariant_reconstruction_toy_grid():
    sol = toy_solution(4.0, 4.0, "2+")
    M0, _ = toy_signals()
    for t in np.linspace(1.0, 10.0, 11):
        assert invariant_reconstruction_check(g_from_eta(sol, M0, t)) < 1e-10


@patch("src.modeling.invariant.logger")
def test_symplectic_diag_rejects_non_finite_coefficients(mock_logger):
    """u₋v₋ = 1 est une identité algébrique : seuls des coefficients non finis la violent."""
    pair_ok = symplectic_diag(GCoefficients(1.0, 1.0, 0.0))
    assert pair_ok.LambdaD[0, 0] == -1j
    with pytest.raises(DiagonalizationError):
        symplectic_diag(GCoefficients(1.0, 1.0, np.nan))
    mock_logger.error.assert_called_once()


@pytest.mark.parametrize("n, expected", [(0, 1.0), (1, 3.0), (4, 9.0)])
def test_invariant_eigenvalue(n, expected):
    assert invariant_eigenvalue(n) == expected


def test_invariant_eigenvalue_negative_level():
    with pytest.raises(InvalidArgumentError):
        invariant_eigenvalue(-1)
