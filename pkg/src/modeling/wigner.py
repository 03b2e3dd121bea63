"""
État chat en représentation impulsion et distribution de Wigner.

Fonctions principales :

* `psi_tilde()` / `cat_state()`: fondamental translaté et superposition à deux composantes.
* `wigner_closed()`: forme close W = P·(I₁ + I₂ + I₃ + I₄).
* `wigner_numeric()`: transformée de Fourier numérique de la matrice densité (oracle).
* `wigner_grid()` / `wigner_grid_numeric()`: évaluation sur grille, parallèle par lignes (joblib).
* `origin_interference()`: W(0, 0), signature d'interférence persistante.
* `momentum_marginal()` / `grid_momentum_marginal()`: ∫W dx, comparée à |ψ_c(p)|².
* `fit_cosine_coefficients()`: ajuste l'argument cos(a·x₀p + b·p₀x) sur l'oracle.

Conventions : "printed" utilise k_g = (g/(πη⁴|g|²))^{1/4} avec η² = 1/g_r ;
"fourier" utilise la transformée unitaire de φ₀, k_g = π^{−1/4}η^{−1/2}.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from scipy import integrate
from scipy.optimize import least_squares

from src.exceptions import InvalidArgumentError, NonNormalizableError
from src.numerics.quadrature import quad, quad_vector

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

CONVENTIONS = ("printed", "fourier")
ORACLE_COSINE = (2.0, 2.0)
PRINTED_COSINE = (4.0, 0.0)
MIN_GRID_POINTS = 16
GRID_SIGMAS = 6.0
_TAIL_EXPONENT = 37.0


@dataclass(frozen=True)
class CatSpec:
    x0: float
    p0: float

    def __post_init__(self):
        if not (np.isfinite(self.x0) and np.isfinite(self.p0)):
            raise InvalidArgumentError(f"Décalages non finis : x₀={self.x0}, p₀={self.p0}")


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """
    W(x, p) sur une grille uniforme ; W[i, j] correspond à (x[i], p[j]).

    Attributes:
        t (float, optional): Instant associé.
        x (np.ndarray): Grille en position.
        p (np.ndarray): Grille en impulsion.
        W (np.ndarray): Valeurs, forme (nx, np).
        imag_residue (float): max |Im| de l'intégrale (oracle numérique seulement).
    """

    t: Optional[float]
    x: np.ndarray
    p: np.ndarray
    W: np.ndarray
    imag_residue: float = 0.0

    def __post_init__(self):
        if self.W.shape != (len(self.x), len(self.p)):
            raise InvalidArgumentError(f"Forme de W incohérente : {self.W.shape}")
        if not np.all(np.isfinite(self.W)):
            raise InvalidArgumentError("Valeurs de W non finies.")


def _check_mode(g: complex) -> complex:
    g = complex(g)
    if not g.real > 0.0:
        raise NonNormalizableError(f"Re g ≤ 0 : état non normalisable (g={g})")
    return g


def _check_convention(convention: str) -> None:
    if convention not in CONVENTIONS:
        raise InvalidArgumentError(f"Convention inconnue '{convention}'. Attendu : {CONVENTIONS}")


def _normalization(g: complex, eta: float, convention: str) -> complex:
    """k_g."""
    if convention == "printed":
        return (g / (np.pi * eta**4 * abs(g) ** 2)) ** 0.25
    return np.pi**-0.25 / np.sqrt(abs(eta))


def psi_tilde(p, g: complex, eta: float, x0: float = 0.0, convention: str = "printed"):
    """
    ψ̃₀(p) = (k_g/√g)·e^{−p²/(2g) − ipx₀}.

    Raises:
        NonNormalizableError: Si Re g ≤ 0.
    """
    g = _check_mode(g)
    _check_convention(convention)
    p = np.asarray(p, dtype=float)
    value = _normalization(g, eta, convention) / np.sqrt(g) * np.exp(-(p**2) / (2.0 * g) - 1j * p * x0)
    return value[()] if np.ndim(value) == 0 else value


def cat_state(p, g: complex, eta: float, spec: CatSpec, convention: str = "printed"):
    """ψ_c(p) = [ψ̃₀(p − p₀; x₀) + ψ̃₀(p + p₀; −x₀)]/√2."""
    p = np.asarray(p, dtype=float)
    value = (
        psi_tilde(p - spec.p0, g, eta, spec.x0, convention)
        + psi_tilde(p + spec.p0, g, eta, -spec.x0, convention)
    ) / np.sqrt(2.0)
    return value[()] if np.ndim(value) == 0 else value


def _eta_from_mode(g: complex) -> float:
    """η = g_r^{-1/2} (η₀ = 1)."""
    return 1.0 / np.sqrt(g.real)


def _closed_parameters(g: complex, convention: str):
    """(c_r, c_i, P) avec c = 1/g et P = |k_g/√g|²/√(2c_r)."""
    c = 1.0 / g
    amplitude_sq = abs(_normalization(g, _eta_from_mode(g), convention)) ** 2 / abs(g)
    return c.real, c.imag, amplitude_sq / np.sqrt(2.0 * c.real), amplitude_sq


def cat_norm_sq(g: complex, spec: CatSpec, convention: str = "printed") -> float:
    """‖ψ_c‖² = |k_g/√g|²√(π/c_r)·(1 + e^{−c_r p₀² − (x₀ − c_i p₀)²/c_r})."""
    g = _check_mode(g)
    _check_convention(convention)
    c_r, c_i, _, amplitude_sq = _closed_parameters(g, convention)
    overlap = np.exp(-c_r * spec.p0**2 - (spec.x0 - c_i * spec.p0) ** 2 / c_r)
    return float(amplitude_sq * np.sqrt(np.pi / c_r) * (1.0 + overlap))


def wigner_closed(
    x,
    p,
    g: complex,
    spec: CatSpec,
    cos_coeffs: tuple[float, float] = ORACLE_COSINE,
    convention: str = "printed",
    normalized: bool = False,
):
    """
    Forme close de la distribution de Wigner de l'état chat.

    W = P·[I₁ + I₄ + 2e^{−c_r p² − (x + c_i p)²/c_r}·cos(a·x₀p + b·p₀x)], avec
    I₁ = e^{−c_r(p−p₀)² − (x + x₀ + c_i(p−p₀))²/c_r} et
    I₄ = e^{−c_r(p+p₀)² − (x − x₀ + c_i(p+p₀))²/c_r}.

    Args:
        x, p: Point(s) de l'espace des phases (diffusés l'un contre l'autre).
        g (complex): Paramètre du mode, Re g > 0.
        spec (CatSpec): Décalages (x₀, p₀).
        cos_coeffs (tuple): (a, b) ; (2, 2) reproduit l'oracle, (4, 0) la forme imprimée.
        convention (str): "printed" ou "fourier".
        normalized (bool): Divise par √(2π)‖ψ_c‖² (intégrale unité sur l'espace des phases).

    Returns:
        float | np.ndarray: W(x, p).
    """
    g = _check_mode(g)
    _check_convention(convention)
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    c_r, c_i, prefactor, _ = _closed_parameters(g, convention)
    a, b = cos_coeffs
    x0, p0 = spec.x0, spec.p0

    lobe_1 = np.exp(-c_r * (p - p0) ** 2 - (x + x0 + c_i * (p - p0)) ** 2 / c_r)
    lobe_4 = np.exp(-c_r * (p + p0) ** 2 - (x - x0 + c_i * (p + p0)) ** 2 / c_r)
    fringes = 2.0 * np.exp(-c_r * p**2 - (x + c_i * p) ** 2 / c_r) * np.cos(a * x0 * p + b * p0 * x)
    value = prefactor * (lobe_1 + lobe_4 + fringes)
    if normalized:
        value = value / (np.sqrt(2.0 * np.pi) * cat_norm_sq(g, spec, convention))
    return value[()] if np.ndim(value) == 0 else value


def _q_cutoff(p, g: complex, spec: CatSpec) -> float:
    """Borne |q| au-delà de laquelle |ψ_c(p − q/2)ψ_c(p + q/2)| < 1e-16·|k_g/√g|²."""
    c_r = (1.0 / g).real
    return 2.0 * (np.max(np.abs(p)) + abs(spec.p0) + np.sqrt(_TAIL_EXPONENT / c_r))


def wigner_numeric(
    x: float,
    p: float,
    g: complex,
    spec: CatSpec,
    convention: str = "printed",
    tol: float = 1e-12,
    full: bool = False,
):
    """
    W = (1/√2π)∫ψ_c(p − q/2)ψ_c*(p + q/2)e^{iqx}dq par quadrature adaptative.

    Args:
        full (bool): Si vrai, renvoie la valeur complexe (partie imaginaire nulle en théorie).

    Raises:
        AccuracyError: Si la quadrature ne converge pas.
    """
    g = _check_mode(g)
    eta = _eta_from_mode(g)

    def kernel(q):
        return (
            cat_state(p - q / 2.0, g, eta, spec, convention)
            * np.conj(cat_state(p + q / 2.0, g, eta, spec, convention))
            * np.exp(1j * q * x)
        )

    cutoff = _q_cutoff(p, g, spec)
    value = complex(quad(kernel, -cutoff, cutoff, tol, limit=400)) / np.sqrt(2.0 * np.pi)
    return value if full else value.real


def _bounds(g: complex, spec: CatSpec) -> tuple[float, float]:
    """Demi-largeur symétrique : |centre| + 6σ."""
    g_r, modulus_sq = g.real, abs(g) ** 2
    sigma = np.sqrt(max(modulus_sq / (2.0 * g_r), g_r / (2.0 * modulus_sq), 1.0 / (2.0 * g_r)))
    half = max(abs(spec.x0), abs(spec.p0)) + GRID_SIGMAS * sigma
    return half, half


def default_axes(g: complex, spec: CatSpec, nx: int, np_: int) -> tuple[np.ndarray, np.ndarray]:
    if nx < MIN_GRID_POINTS or np_ < MIN_GRID_POINTS:
        raise InvalidArgumentError(f"Grille trop petite : {nx}×{np_} (minimum {MIN_GRID_POINTS})")
    half_x, half_p = _bounds(_check_mode(g), spec)
    return np.linspace(-half_x, half_x, nx), np.linspace(-half_p, half_p, np_)


def wigner_grid(
    g: complex,
    spec: CatSpec,
    nx: int,
    np_: int,
    bounds: Optional[tuple[float, float, float, float]] = None,
    t: Optional[float] = None,
    cos_coeffs: tuple[float, float] = ORACLE_COSINE,
    convention: str = "printed",
    normalized: bool = False,
    n_jobs: int = 1,
) -> WignerGrid:
    """
    Forme close sur une grille nx × np, parallèle sur les lignes en x.

    Args:
        bounds (tuple, optional): (x_min, x_max, p_min, p_max) ; par défaut grille
            symétrique couvrant les centres ± 6σ.
        n_jobs (int): Nombre de processus joblib.
    """
    if bounds is None:
        x, p = default_axes(g, spec, nx, np_)
    else:
        if nx < MIN_GRID_POINTS or np_ < MIN_GRID_POINTS:
            raise InvalidArgumentError(f"Grille trop petite : {nx}×{np_}")
        x = np.linspace(bounds[0], bounds[1], nx)
        p = np.linspace(bounds[2], bounds[3], np_)

    rows = Parallel(n_jobs=n_jobs)(
        delayed(wigner_closed)(xi, p, g, spec, cos_coeffs, convention, normalized) for xi in x
    )
    logger.info(f"Grille de Wigner {nx}×{np_} évaluée (t={t}, g={complex(g):.6g})")
    return WignerGrid(t=t, x=x, p=p, W=np.vstack(rows))


def _numeric_column(pj: float, x: np.ndarray, g: complex, spec: CatSpec, convention: str, tol: float):
    eta = _eta_from_mode(g)

    def kernel(q):
        weight = cat_state(pj - q / 2.0, g, eta, spec, convention) * np.conj(
            cat_state(pj + q / 2.0, g, eta, spec, convention)
        )
        return weight * np.exp(1j * q * x)

    cutoff = _q_cutoff(pj, g, spec)
    return quad_vector(kernel, -cutoff, cutoff, tol, limit=400) / np.sqrt(2.0 * np.pi)


def wigner_grid_numeric(
    g: complex,
    spec: CatSpec,
    nx: int,
    np_: int,
    bounds: Optional[tuple[float, float, float, float]] = None,
    t: Optional[float] = None,
    convention: str = "printed",
    tol: float = 1e-12,
    n_jobs: int = 1,
) -> WignerGrid:
    """Oracle numérique sur grille : une quadrature vectorielle en q par colonne p."""
    g = _check_mode(g)
    if bounds is None:
        x, p = default_axes(g, spec, nx, np_)
    else:
        x = np.linspace(bounds[0], bounds[1], nx)
        p = np.linspace(bounds[2], bounds[3], np_)

    columns = Parallel(n_jobs=n_jobs)(
        delayed(_numeric_column)(pj, x, g, spec, convention, tol) for pj in p
    )
    values = np.column_stack(columns)
    residue = float(np.max(np.abs(values.imag)))
    logger.info(f"Oracle de Wigner {nx}×{np_} : résidu imaginaire {residue:.3e}")
    return WignerGrid(t=t, x=x, p=p, W=values.real, imag_residue=residue)


def origin_interference(
    g: complex,
    spec: CatSpec,
    cos_coeffs: tuple[float, float] = ORACLE_COSINE,
    convention: str = "printed",
    normalized: bool = False,
) -> float:
    """W(0, 0) = 2P(1 + e^{−c_r p₀² − (x₀ − c_i p₀)²/c_r})."""
    return float(wigner_closed(0.0, 0.0, g, spec, cos_coeffs, convention, normalized))


def momentum_marginal(
    p: float,
    g: complex,
    spec: CatSpec,
    cos_coeffs: tuple[float, float] = ORACLE_COSINE,
    convention: str = "printed",
    tol: float = 1e-12,
) -> float:
    """
    Marginale en impulsion ∫W(x, p)dx de la forme close, par quadrature en x.

    Avec les coefficients de l'oracle elle vaut √(2π)|ψ_c(p)|², quel que soit g.

    Raises:
        AccuracyError: Si la quadrature ne converge pas.
    """
    g = _check_mode(g)
    _, c_i, _, _ = _closed_parameters(g, convention)
    return float(
        quad(
            lambda x: wigner_closed(x, p, g, spec, cos_coeffs, convention),
            -np.inf,
            np.inf,
            tol,
            center=-c_i * p,
        )
    )


def grid_momentum_marginal(grid: WignerGrid) -> np.ndarray:
    """Marginale en impulsion d'une grille : règle des trapèzes le long de x."""
    return integrate.trapezoid(grid.W, grid.x, axis=0)


def marginal_ratio(marginal, p, g: complex, spec: CatSpec, convention: str = "printed") -> np.ndarray:
    """Rapport marginale / |ψ_c(p)|² ; constant (√(2π)) lorsque la forme close est exacte."""
    g = _check_mode(g)
    density = np.abs(cat_state(p, g, _eta_from_mode(g), spec, convention)) ** 2
    return np.asarray(marginal, dtype=float) / density


def fit_cosine_coefficients(
    g: complex,
    spec: CatSpec,
    points: Optional[Sequence[tuple[float, float]]] = None,
    convention: str = "printed",
) -> dict:
    """
    Ajuste (a, b) de cos(a·x₀p + b·p₀x) sur l'oracle numérique.

    Balayage grossier de [0, 4]² puis raffinement par moindres carrés.
    Si x₀ = 0 (resp. p₀ = 0), a (resp. b) n'est pas identifiable.

    Returns:
        dict: {"a", "b", "residual", "printed_residual"}.
    """
    g = _check_mode(g)
    if points is None:
        axis = np.linspace(-1.0, 1.0, 7)
        points = [(xi, pi) for xi in axis for pi in axis]
    xs = np.array([pt[0] for pt in points], dtype=float)
    ps = np.array([pt[1] for pt in points], dtype=float)
    target = np.array([wigner_numeric(xi, pi, g, spec, convention) for xi, pi in points])

    def misfit(params):
        return wigner_closed(xs, ps, g, spec, (params[0], params[1]), convention) - target

    coarse = np.linspace(0.0, 4.0, 17)
    start = min(
        ((a, b) for a in coarse for b in coarse), key=lambda ab: float(np.sum(misfit(ab) ** 2))
    )
    result = least_squares(misfit, x0=np.array(start), bounds=([-1.0, -1.0], [5.0, 5.0]), xtol=1e-14, ftol=1e-14)
    report = {
        "a": float(result.x[0]),
        "b": float(result.x[1]),
        "residual": float(np.max(np.abs(result.fun))),
        "printed_residual": float(np.max(np.abs(misfit(PRINTED_COSINE)))),
    }
    logger.info(
        f"Argument du cosinus ajusté : a={report['a']:.6f}, b={report['b']:.6f} "
        f"(résidu {report['residual']:.2e} ; forme imprimée {report['printed_residual']:.2e})"
    )
    return report
