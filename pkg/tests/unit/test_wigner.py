import numpy as np
import pytest
from unittest.mock import patch

from src.exceptions import InvalidArgumentError, NonNormalizableError
from src.modeling.wigner import (
    ORACLE_COSINE,
    PRINTED_COSINE,
    CatSpec,
    WignerGrid,
    cat_norm_sq,
    cat_state,
    default_axes,
    fit_cosine_coefficients,
    grid_momentum_marginal,
    marginal_ratio,
    momentum_marginal,
    origin_interference,
    psi_tilde,
    wigner_closed,
    wigner_grid,
    wigner_grid_numeric,
    wigner_numeric,
)
from src.numerics.quadrature import quad

G_CHIRPED = 1.0 - 0.4j


def test_cat_spec_rejects_non_finite():
    with pytest.raises(InvalidArgumentError):
        CatSpec(np.inf, 0.0)


def test_psi_tilde_rejects_non_normalizable_mode():
    with pytest.raises(NonNormalizableError):
        psi_tilde(0.0, -1.0, 1.0)


def test_psi_tilde_fourier_convention_is_unit_norm():
    """Convention de Fourier : ψ̃₀ est la transformée unitaire de φ₀, donc normée."""
    g = G_CHIRPED
    eta = 1.0 / np.sqrt(g.real)
    norm = quad(lambda p: abs(psi_tilde(p, g, eta, 0.0, "fourier")) ** 2, -np.inf, np.inf)
    assert norm == pytest.approx(1.0, abs=1e-9)


def test_cat_state_separated_lobes():
    """p = p₀ grand : seule la première composante contribue."""
    spec = CatSpec(0.0, 20.0)
    value = cat_state(20.0, 1.0, 1.0, spec)
    assert value == pytest.approx(psi_tilde(0.0, 1.0, 1.0) / np.sqrt(2.0))


@pytest.mark.parametrize("convention", ["printed", "fourier"])
def test_cat_norm_matches_quadrature(convention):
    spec = CatSpec(0.7, 0.4)
    eta = 1.0 / np.sqrt(G_CHIRPED.real)
    direct = quad(
        lambda p: abs(cat_state(p, G_CHIRPED, eta, spec, convention)) ** 2, -np.inf, np.inf
    )
    assert cat_norm_sq(G_CHIRPED, spec, convention) == pytest.approx(direct, rel=1e-9)


def test_origin_interference_separated_lobes():
    """x₀ = p₀ = 5, g = 1 : lobes négligeables, franges 2/√(2π) à l'origine."""
    spec = CatSpec(5.0, 5.0)
    assert origin_interference(1.0, spec) == pytest.approx(2.0 / np.sqrt(2.0 * np.pi), rel=1e-10)


@pytest.mark.parametrize("x0, p0", [(5.0, 5.0), (10.0, 10.0), (7.0, 3.0)])
def test_origin_interference_independent_of_offsets(x0, p0):
    """Lobes séparés : W(0, 0) = 2/√(2π) quels que soient (x₀, p₀)."""
    value = origin_interference(1.0, CatSpec(x0, p0))
    assert value == pytest.approx(2.0 / np.sqrt(2.0 * np.pi), abs=1e-6)


def test_wigner_closed_coincident_components():
    """x₀ = p₀ = 0 : W = (4/√2π)e^{−x²−p²} pour g = 1."""
    x, p = 0.3, -0.7
    expected = 4.0 / np.sqrt(2.0 * np.pi) * np.exp(-(x**2) - p**2)
    assert wigner_closed(x, p, 1.0, CatSpec(0.0, 0.0)) == pytest.approx(expected)


def test_wigner_closed_lobe_positions():
    """Les lobes sont centrés en (−x₀, p₀) et (x₀, −p₀)."""
    spec = CatSpec(4.0, 3.0)
    lobe = wigner_closed(-4.0, 3.0, 1.0, spec)
    mirror = wigner_closed(4.0, -3.0, 1.0, spec)
    assert lobe == pytest.approx(1.0 / np.sqrt(2.0 * np.pi), rel=1e-6)
    assert mirror == pytest.approx(lobe, rel=1e-10)
    assert wigner_closed(4.0, 3.0, 1.0, spec) < 1e-10


@pytest.mark.parametrize("convention", ["printed", "fourier"])
@pytest.mark.parametrize("point", [(1.0, 1.0), (-0.5, 2.0), (0.0, 0.0), (2.5, -1.5)])
def test_wigner_closed_matches_numeric_oracle(convention, point):
    """La forme close avec cos(2x₀p + 2p₀x) reproduit la transformée numérique."""
    spec = CatSpec(3.0, 3.0)
    closed = wigner_closed(*point, G_CHIRPED, spec, ORACLE_COSINE, convention)
    numeric = wigner_numeric(*point, G_CHIRPED, spec, convention)
    assert closed == pytest.approx(numeric, abs=1e-6)


def test_wigner_numeric_is_real():
    value = wigner_numeric(0.4, -0.3, G_CHIRPED, CatSpec(1.0, 2.0), full=True)
    assert abs(value.imag) < 1e-10


def test_printed_cosine_disagrees_with_oracle():
    spec = CatSpec(1.0, 1.0)
    numeric = wigner_numeric(0.8, 0.1, 1.0, spec)
    printed = wigner_closed(0.8, 0.1, 1.0, spec, PRINTED_COSINE)
    assert abs(printed - numeric) > 1e-3


@patch("src.modeling.wigner.logger")
def test_fit_cosine_coefficients_recovers_oracle_argument(mock_logger):
    report = fit_cosine_coefficients(1.0, CatSpec(1.5, 1.5))
    assert report["a"] == pytest.approx(2.0, abs=1e-4)
    assert report["b"] == pytest.approx(2.0, abs=1e-4)
    assert report["residual"] < 1e-8
    assert report["printed_residual"] > 1e-3


def test_default_axes_minimum_size():
    with pytest.raises(InvalidArgumentError):
        default_axes(1.0, CatSpec(0.0, 0.0), 8, 32)


def test_default_axes_cover_lobes():
    x, p = default_axes(1.0, CatSpec(5.0, 2.0), 21, 21)
    assert x[-1] >= 5.0 + 6.0 * np.sqrt(0.5) - 1e-12
    assert x[0] == -x[-1] and p[0] == -p[-1]


@patch("src.modeling.wigner.logger")
def test_wigner_grid_normalized_integrates_to_one(mock_logger):
    grid = wigner_grid(G_CHIRPED, CatSpec(2.0, 2.0), 101, 101, normalized=True)
    dx, dp = grid.x[1] - grid.x[0], grid.p[1] - grid.p[0]
    assert grid.W.shape == (101, 101)
    assert np.sum(grid.W) * dx * dp == pytest.approx(1.0, abs=1e-4)


@patch("src.modeling.wigner.logger")
def test_wigner_grid_matches_numeric_grid(mock_logger):
    spec = CatSpec(1.0, 2.0)
    bounds = (-4.0, 4.0, -4.0, 4.0)
    closed = wigner_grid(G_CHIRPED, spec, 16, 16, bounds=bounds)
    numeric = wigner_grid_numeric(G_CHIRPED, spec, 16, 16, bounds=bounds)
    assert np.max(np.abs(closed.W - numeric.W)) < 1e-6
    assert numeric.imag_residue < 1e-10


@patch("src.modeling.wigner.logger")
def test_wigner_grid_point_symmetry(mock_logger):
    """W(x, p) = W(−x, −p) sur une grille symétrique."""
    grid = wigner_grid(G_CHIRPED, CatSpec(1.5, -0.8), 41, 37)
    np.testing.assert_allclose(grid.W, grid.W[::-1, ::-1], atol=1e-10)


@patch("src.modeling.wigner.logger")
def test_wigner_grid_matches_numeric_grid_random_parameters(mock_logger):
    """20 tirages (g, x₀, p₀) : forme close et oracle numérique coïncident sur 41×41."""
    rng = np.random.default_rng(3)
    for _ in range(20):
        g = complex(rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0))
        spec = CatSpec(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5))
        closed = wigner_grid(g, spec, 41, 41)
        numeric = wigner_grid_numeric(g, spec, 41, 41)
        assert np.max(np.abs(closed.W - numeric.W)) <= 1e-6


@pytest.mark.parametrize("convention", ["printed", "fourier"])
def test_momentum_marginal_is_scaled_momentum_density(convention):
    """∫W dx = √(2π)|ψ_c(p)|² : même facteur pour tout p."""
    spec = CatSpec(1.0, 1.0)
    eta = 1.0 / np.sqrt(G_CHIRPED.real)
    for p in (-1.0, 0.0, 0.7, 2.0):
        marginal = momentum_marginal(p, G_CHIRPED, spec, convention=convention)
        density = abs(cat_state(p, G_CHIRPED, eta, spec, convention)) ** 2
        assert marginal == pytest.approx(np.sqrt(2.0 * np.pi) * density, rel=1e-8, abs=1e-10)


@patch("src.modeling.wigner.logger")
def test_grid_momentum_marginal_factor_is_grid_independent(mock_logger):
    """Le rapport marginale / |ψ_c|² ne dépend ni de p ni de la résolution en x."""
    spec = CatSpec(1.0, 1.0)
    for nx in (241, 481):
        grid = wigner_grid(G_CHIRPED, spec, nx, 31, bounds=(-12.0, 12.0, -1.0, 2.0))
        ratio = marginal_ratio(grid_momentum_marginal(grid), grid.p, G_CHIRPED, spec)
        np.testing.assert_allclose(ratio, np.sqrt(2.0 * np.pi), rtol=1e-6)


def test_wigner_grid_shape_validation():
    with pytest.raises(InvalidArgumentError):
        WignerGrid(t=None, x=np.zeros(3), p=np.zeros(2), W=np.zeros((2, 3)))
