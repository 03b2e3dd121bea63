"""
États propres de l'invariant, phases et solution de l'équation de Schrödinger.

Fonctions principales :

* `phi_n()` / `phi0_ground()`: fonctions propres en représentation position.
* `dynamical_phase()`, `geometric_phase_im()`, `geometric_phase_oracle()`,
  `phase_trajectory()`: phases de Lewis-Riesenfeld.
* `assemble_psi()`: ψ(x, t) = Σ cₙ e^{iθₙ(t)} φₙ(x, t).
* `schrodinger_residual()`: résidu de l'EDP sur une grille espace-temps.
* `covariance()`, `rsup_check()`, `rsup_eta_form()`: matrice de covariance
  et principe d'incertitude de Robertson-Schrödinger.

Deux normalisations des fonctions propres coexistent : "invariant" (fonctions
propres orthonormées de Î, par défaut) et "printed" (forme (g/π)^{1/4} à g
complexe, non orthonormée en général).
"""

import logging
from dataclasses import dataclass
from math import factorial
from typing import TYPE_CHECKING, Callable, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline

from src.exceptions import InvalidArgumentError, NonNormalizableError, ParameterDomainError
from src.modeling.ep_solver import GCoefficients
from src.modeling.invariant import invariant_eigenvalue, ladder_coeffs
from src.numerics.quadrature import hermite, quad

if TYPE_CHECKING:
    from src.modeling.pipeline import ModePipeline

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

NORM_MODES = ("invariant", "printed")
ROUTES = ("integrated", "printed")
COVARIANCE_CONVENTIONS = ("moments", "printed")
FD_TIME_STEP = 1e-5
RSUP_TOL = 1e-12

Coefficients = Union[Mapping[int, complex], Sequence[complex]]


@dataclass(frozen=True)
class ModeFunction:
    """g(t) = (η₀ + ig₃)/g₁, avec Re g > 0."""

    g: complex

    def __post_init__(self):
        if not np.real(self.g) > 0.0:
            raise NonNormalizableError(f"Re g ≤ 0 : fonction d'onde non normalisable (g={self.g})")

    @property
    def g_r(self) -> float:
        return float(np.real(self.g))

    @property
    def g_i(self) -> float:
        return float(np.imag(self.g))

    @classmethod
    def from_coefficients(cls, g: GCoefficients) -> "ModeFunction":
        return cls(complex(g.eta0 + 1j * float(g.g3)) / float(g.g1))


@dataclass(frozen=True)
class PhaseTrajectory:
    """
    Phases du niveau n le long d'une grille de temps.

    Attributes:
        n (int): Niveau.
        t (np.ndarray): Instants.
        theta_d (np.ndarray): Phase dynamique.
        theta_g_im (np.ndarray): Partie imaginaire de la phase géométrique.
        theta_g_re (np.ndarray): Phase géométrique réelle des fonctions propres normées.
        t_ref (float): Instant de référence (phases nulles).
    """

    n: int
    t: np.ndarray
    theta_d: np.ndarray
    theta_g_im: np.ndarray
    theta_g_re: np.ndarray
    t_ref: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "t": self.t,
                "n": self.n,
                "theta_d": self.theta_d,
                "theta_g_im": self.theta_g_im,
                "theta_g_re": self.theta_g_re,
            }
        )


@dataclass(frozen=True)
class Covariance2:
    V11: float
    V22: float
    V12: float

    def __post_init__(self):
        if not (self.V11 > 0.0 and self.V22 > 0.0):
            raise InvalidArgumentError(
                f"Variances strictement positives requises : V11={self.V11}, V22={self.V22}"
            )

    @property
    def det(self) -> float:
        return self.V11 * self.V22 - self.V12**2


def _coefficient_map(coeffs: Coefficients) -> dict[int, complex]:
    if isinstance(coeffs, Mapping):
        items = {int(n): complex(c) for n, c in coeffs.items()}
    else:
        items = {n: complex(c) for n, c in enumerate(coeffs)}
    if any(n < 0 for n in items):
        raise InvalidArgumentError(f"Niveaux négatifs dans les coefficients : {sorted(items)}")
    items = {n: c for n, c in items.items() if c != 0}
    if not items:
        raise InvalidArgumentError("Au moins un coefficient cₙ non nul est requis.")
    return items


def _integrate(f: Callable[[float], float], t_ref: float, t: float, tol: float):
    """∫_{t_ref}^{t} f, orienté."""
    if t == t_ref:
        return 0.0
    if t > t_ref:
        return quad(f, t_ref, t, tol)
    return -quad(f, t, t_ref, tol)


def _richardson(f: Callable[[float], np.ndarray], t: float, domain: tuple[float, float]):
    """Dérivée centrée extrapolée (h = 1e-5·max(1, |t|)), stencil ramené dans le domaine."""
    h = FD_TIME_STEP * max(1.0, abs(t))
    center = min(max(t, domain[0] + h), domain[1] - h)

    def central(step):
        return (np.asarray(f(center + step)) - np.asarray(f(center - step))) / (2.0 * step)

    return (4.0 * central(h / 2.0) - central(h)) / 3.0


def h_rho_ladder_coeffs(
    eta: float, etadot: float, M0: float, Omega0_sq: float, eta0: float = 1.0
) -> tuple[float, complex]:
    """
    Coefficients de Ĥ_ρ = ω_ρ(â₊â₋ + 1/2) + α_ρâ₋² + α_ρ*â₊².

    ω_ρ = (M₀²Ω₀²η⁴ + M₀²η²η̇² + η₀²)/(2η₀M₀η²) et α_ρ = u11*²/(2M₀) + M₀Ω₀²u12²/2 ;
    pour η₀ = 1, α_ρ = (ω_ρ − 1/(M₀η²) − iη̇/η)/2.

    Raises:
        InvalidArgumentError: Si M₀ = 0 ou η = 0.
    """
    if M0 == 0.0 or eta == 0.0:
        raise InvalidArgumentError(f"M₀ et η doivent être non nuls (M₀={M0}, η={eta}).")
    omega_rho = (M0**2 * Omega0_sq * eta**4 + M0**2 * eta**2 * etadot**2 + eta0**2) / (
        2.0 * eta0 * M0 * eta**2
    )
    ladder = ladder_coeffs(
        GCoefficients(
            g1=eta**2,
            g2=M0**2 * etadot**2 + eta0**2 / eta**2,
            g3=-M0 * eta * etadot,
            eta0=eta0,
        )
    )
    alpha_rho = np.conj(ladder.u11) ** 2 / (2.0 * M0) + M0 * Omega0_sq * ladder.u12**2 / 2.0
    return float(omega_rho), complex(alpha_rho)


def dynamical_phase(
    n: int,
    omega_rho: Union[Callable[[float], float], tuple[np.ndarray, np.ndarray]],
    t: float,
    t_ref: float = 0.0,
    tol: float = 1e-10,
) -> float:
    """
    θₙ^(d)(t) = −(n + 1/2)·∫_{t_ref}^{t} ω_ρ dτ.

    Args:
        n (int): Niveau.
        omega_rho: Fonction du temps, ou couple (instants, valeurs) interpolé par spline cubique.
        t (float): Instant final.
        t_ref (float): Instant où la phase est nulle.
        tol (float): Tolérance de quadrature.

    Returns:
        float: La phase dynamique.
    """
    if n < 0:
        raise InvalidArgumentError(f"Niveau négatif : {n}")
    if isinstance(omega_rho, tuple):
        times, values = omega_rho
        omega_rho = CubicSpline(np.asarray(times, float), np.asarray(values, float))
    return float(-(n + 0.5) * _integrate(lambda s: float(omega_rho(s)), t_ref, t, tol))


def phi_n(n: int, x, g: complex, norm_mode: str = "invariant"):
    """
    Fonction propre φₙ(x) de l'invariant.

    * "invariant": iⁿ(g_r/π)^{1/4}/√(2ⁿn!)·Hₙ(√g_r·x)·e^{−gx²/2}, égale à (â₊)ⁿφ₀/√n!.
    * "printed": (g/π)^{1/4}/√(2ⁿn!)·e^{−gx²/2}·Hₙ(√g·x), branches principales.

    Raises:
        NonNormalizableError: Si Re g ≤ 0.
        InvalidArgumentError: Si n < 0 ou mode inconnu.
    """
    mode = ModeFunction(complex(g))
    if n < 0:
        raise InvalidArgumentError(f"Niveau négatif : {n}")
    if norm_mode not in NORM_MODES:
        raise InvalidArgumentError(f"Mode de normalisation inconnu '{norm_mode}'.")
    x = np.asarray(x, dtype=float)
    scale = 1.0 / np.sqrt(2.0**n * factorial(n))
    gaussian = np.exp(-mode.g * x**2 / 2.0)
    if norm_mode == "invariant":
        root = np.sqrt(mode.g_r)
        value = (1j**n) * (mode.g_r / np.pi) ** 0.25 * scale * hermite(n, root * x) * gaussian
    else:
        root = np.sqrt(mode.g)
        value = (mode.g / np.pi) ** 0.25 * scale * gaussian * hermite(n, root * x)
    return value[()] if np.ndim(value) == 0 else value


def phi0_ground(x, eta: float, etadot: float, M0: float, eta0: float = 1.0):
    """
    φ₀ = (η₀/π)^{1/4}/√η·exp(−η⁻²(η₀ − iM₀ηη̇)x²/2).

    Raises:
        NonNormalizableError: Si η₀ ≤ 0.
        InvalidArgumentError: Si η = 0.
    """
    if eta0 <= 0.0:
        raise NonNormalizableError(f"η₀ > 0 requis pour la normalisation (reçu {eta0}).")
    if eta == 0.0:
        raise InvalidArgumentError("η = 0 : état fondamental indéfini.")
    x = np.asarray(x, dtype=float)
    exponent = (eta0 - 1j * M0 * eta * etadot) * x**2 / (2.0 * eta**2)
    value = (eta0 / np.pi) ** 0.25 / np.sqrt(abs(eta)) * np.exp(-exponent)
    return value[()] if np.ndim(value) == 0 else value


def overlap(m: int, n: int, g: complex, norm_mode: str = "invariant", tol: float = 1e-12) -> complex:
    """⟨φₘ|φₙ⟩ = ∫φₘ*φₙ dx."""
    return complex(
        quad(lambda x: np.conj(phi_n(m, x, g, norm_mode)) * phi_n(n, x, g, norm_mode),
             -np.inf, np.inf, tol)
    )


def phi_norm(n: int, g: complex, norm_mode: str = "invariant", tol: float = 1e-12) -> float:
    """∫|φₙ|² dx."""
    return float(quad(lambda x: abs(phi_n(n, x, g, norm_mode)) ** 2, -np.inf, np.inf, tol))


def invariant_action_residual(
    n: int, g: GCoefficients, x, hx: float = 1e-3
) -> float:
    """
    max |Îφₙ − εₙφₙ| sur la grille, avec p̂ = −i∂ₓ et différences centrées d'ordre 4.

    Îψ = −g₁ψ'' + g₂x²ψ − ig₃(2xψ' + ψ).
    """
    mode = ModeFunction.from_coefficients(g)
    x = np.asarray(x, dtype=float)

    def phi(s):
        return phi_n(n, s, mode.g, "invariant")

    d1 = (-phi(x + 2 * hx) + 8 * phi(x + hx) - 8 * phi(x - hx) + phi(x - 2 * hx)) / (12 * hx)
    d2 = (
        -phi(x + 2 * hx) + 16 * phi(x + hx) - 30 * phi(x) + 16 * phi(x - hx) - phi(x - 2 * hx)
    ) / (12 * hx**2)
    value = phi(x)
    action = (
        -float(g.g1) * d2
        + float(g.g2) * x**2 * value
        - 1j * float(g.g3) * (2.0 * x * d1 + value)
    )
    return float(np.max(np.abs(action - invariant_eigenvalue(n, g.eta0) * value)))


def _geometric_terms(pipeline: "ModePipeline", t: float):
    """g, ġ (différences finies), r_g et r±."""

    def g_vector(s):
        c = pipeline.g_coefficients(s)
        return np.array([c.g1, c.g2, c.g3], dtype=float)

    g1, g2, g3 = g_vector(t)
    dg1, dg2, dg3 = _richardson(g_vector, t, pipeline.domain)
    r_g = np.sqrt(g1 * g2)
    if r_g < 1.0 - 1e-12:
        raise ParameterDomainError(f"r_g = √(g₁g₂) = {r_g:.12g} < 1 à t={t}")
    r_plus = np.sqrt(1.0 + 1.0 / r_g)
    r_minus = np.sqrt(max(1.0 - 1.0 / r_g, 0.0))
    return g1, g2, g3, dg1, dg2, dg3, r_g, r_plus, r_minus


def geometric_phase_im_rate(n: int, pipeline: "ModePipeline", t: float) -> float:
    """
    d(Im θₙ^(g))/dt = (n/2√g₁)[ġ₃r₊/r_g − ġ₁g₂r₋]η + (1/8)d ln(g₂/g₁)/dt + (n+1/2)ġ₁/(2g₁).

    Raises:
        ParameterDomainError: Si r_g < 1.
    """
    g1, g2, _, dg1, dg2, dg3, r_g, r_plus, r_minus = _geometric_terms(pipeline, t)
    eta = float(pipeline.solution.eta(t))
    return float(
        n / (2.0 * np.sqrt(g1)) * (dg3 * r_plus / r_g - dg1 * g2 * r_minus) * eta
        + (dg2 / g2 - dg1 / g1) / 8.0
        + 0.5 * (n + 0.5) * dg1 / g1
    )


def geometric_phase_im(
    n: int, pipeline: "ModePipeline", t: float, t_ref: Optional[float] = None, tol: float = 1e-10
) -> float:
    """Im θₙ^(g) intégrée de t_ref (`pipeline.reference_time` par défaut) à t."""
    t_ref = pipeline.reference_time if t_ref is None else t_ref
    return float(_integrate(lambda s: geometric_phase_im_rate(n, pipeline, s), t_ref, t, tol))


def geometric_phase_real_rate(n: int, pipeline: "ModePipeline", t: float) -> float:
    """i⟨n|∂ₜ|n⟩ pour les fonctions propres orthonormées : (2n+1)ġᵢ/(4g_r)."""
    g = complex(pipeline.mode(t))
    g_dot = complex(pipeline.mode_dot(t))
    return float((2 * n + 1) * g_dot.imag / (4.0 * g.real))


def geometric_phase_oracle_rate(
    n: int, pipeline: "ModePipeline", t: float, norm_mode: str = "printed", tol: float = 1e-12
) -> complex:
    """
    i⟨φₙ|∂ₜφₙ⟩/⟨φₙ|φₙ⟩ par dérivée temporelle extrapolée et quadrature en x.
    """
    h = FD_TIME_STEP * max(1.0, abs(t))
    lo, hi = pipeline.domain
    center = min(max(t, lo + h), hi - h)
    g0 = complex(pipeline.mode(t))
    g_far = (complex(pipeline.mode(center + h)), complex(pipeline.mode(center - h)))
    g_near = (complex(pipeline.mode(center + h / 2)), complex(pipeline.mode(center - h / 2)))

    def integrand(x):
        far = (phi_n(n, x, g_far[0], norm_mode) - phi_n(n, x, g_far[1], norm_mode)) / (2 * h)
        near = (phi_n(n, x, g_near[0], norm_mode) - phi_n(n, x, g_near[1], norm_mode)) / h
        return np.conj(phi_n(n, x, g0, norm_mode)) * (4.0 * near - far) / 3.0

    numerator = quad(integrand, -np.inf, np.inf, tol)
    return complex(1j * numerator / phi_norm(n, g0, norm_mode, tol))


def geometric_phase_oracle(
    n: int,
    pipeline: "ModePipeline",
    t: float,
    t_ref: Optional[float] = None,
    norm_mode: str = "printed",
    tol: float = 1e-8,
) -> complex:
    """θₙ^(g) de référence : intégrale en temps du taux de `geometric_phase_oracle_rate`."""
    t_ref = pipeline.reference_time if t_ref is None else t_ref
    return complex(
        _integrate(lambda s: geometric_phase_oracle_rate(n, pipeline, s, norm_mode), t_ref, t, tol)
    )


def phase_trajectory(
    n: int,
    pipeline: "ModePipeline",
    times: Sequence[float],
    t_ref: Optional[float] = None,
    tol: float = 1e-10,
) -> PhaseTrajectory:
    """
    Phases dynamique et géométriques cumulées sur une grille croissante.

    Les intégrales sont calculées intervalle par intervalle puis cumulées.
    Les phases sont nulles en t_ref (`pipeline.reference_time` par défaut).
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0 or np.any(np.diff(times) <= 0):
        raise InvalidArgumentError("Grille de temps strictement croissante requise.")
    t_ref = pipeline.reference_time if t_ref is None else float(t_ref)
    nodes = np.concatenate([[t_ref], times])

    def cumulative(rate):
        steps = [_integrate(rate, a, b, tol) for a, b in zip(nodes[:-1], nodes[1:])]
        return np.cumsum(steps)

    theta_d = -(n + 0.5) * cumulative(lambda s: float(pipeline.omega_rho(s)))
    theta_g_im = cumulative(lambda s: geometric_phase_im_rate(n, pipeline, s))
    theta_g_re = cumulative(lambda s: geometric_phase_real_rate(n, pipeline, s))
    logger.info(
        f"Phases du niveau {n} calculées sur {len(times)} instants "
        f"(θ_d final = {theta_d[-1]:.6g}, Im θ_g final = {theta_g_im[-1]:.6g})"
    )
    return PhaseTrajectory(n, times, theta_d, theta_g_im, theta_g_re, t_ref)


def printed_amplitude(
    n: int, pipeline: "ModePipeline", t: float, t_ref: Optional[float] = None, tol: float = 1e-10
) -> float:
    """e^{−n∫(ġ₃r₊/r_g − ġ₁g₂r₋)dτ}/(η^{2n}(1 + M₀²η²η̇²)^{1/4})."""
    t_ref = pipeline.reference_time if t_ref is None else t_ref

    def rate(s):
        _, g2, _, dg1, _, dg3, r_g, r_plus, r_minus = _geometric_terms(pipeline, s)
        return float(dg3 * r_plus / r_g - dg1 * g2 * r_minus)

    state = pipeline.state(t)
    integral = _integrate(rate, t_ref, t, tol) if n else 0.0
    squeeze = 1.0 + state.M0**2 * state.eta**2 * state.etadot**2
    return float(np.exp(-n * integral) / (state.eta ** (2 * n) * squeeze**0.25))


def assemble_psi(
    coeffs: Coefficients,
    x,
    t: float,
    pipeline: "ModePipeline",
    route: str = "integrated",
    t_ref: Optional[float] = None,
    tol: float = 1e-12,
):
    """
    Solution ψ(x, t) = Σ cₙ e^{iθₙ(t)} φₙ(x, t).

    * "integrated": fonctions propres orthonormées, θₙ = θₙ^(d) + phase géométrique réelle.
    * "printed": facteur d'amplitude imprimé × φₙ imprimée × e^{iθₙ^(d)}.

    Args:
        coeffs: Coefficients cₙ (dictionnaire ou séquence indexée par n).
        x: Position(s).
        t (float): Instant.
        pipeline (ModePipeline): Chaîne η → g → ω_ρ.
        route (str): "integrated" ou "printed".
        t_ref (float, optional): Instant où les phases sont nulles
            (`pipeline.reference_time` par défaut).
        tol (float): Tolérance des quadratures de phase.
    """
    if route not in ROUTES:
        raise InvalidArgumentError(f"Route inconnue '{route}'. Attendu : {ROUTES}")
    t_ref = pipeline.reference_time if t_ref is None else t_ref
    levels = _coefficient_map(coeffs)
    g = complex(pipeline.mode(t))
    omega = lambda s: float(pipeline.omega_rho(s))  # noqa: E731

    psi = np.zeros(np.shape(x), dtype=complex)
    for n, c in levels.items():
        theta_d = dynamical_phase(n, omega, t, t_ref, tol)
        if route == "integrated":
            theta_g = _integrate(lambda s: geometric_phase_real_rate(n, pipeline, s), t_ref, t, tol)
            psi = psi + c * np.exp(1j * (theta_d + theta_g)) * phi_n(n, x, g, "invariant")
        else:
            amplitude = printed_amplitude(n, pipeline, t, t_ref, tol)
            psi = psi + c * amplitude * np.exp(1j * theta_d) * phi_n(n, x, g, "printed")
    return psi[()] if np.ndim(psi) == 0 else psi


def amplitude_check(
    n: int, pipeline: "ModePipeline", times: Sequence[float], t_ref: Optional[float] = None
) -> pd.DataFrame:
    """
    Compare la norme ‖e^{iθₙ}φₙ‖ des deux routes.

    La route intégrée est unitaire ; la route imprimée dévie dès que η̇ ≠ 0.
    """
    rows = []
    for t in times:
        g = complex(pipeline.mode(t))
        printed = abs(printed_amplitude(n, pipeline, t, t_ref)) * np.sqrt(phi_norm(n, g, "printed"))
        integrated = np.sqrt(phi_norm(n, g, "invariant"))
        rows.append({"t": t, "printed": printed, "integrated": integrated,
                     "deviation": abs(printed - integrated)})
    frame = pd.DataFrame(rows)
    worst = float(frame["deviation"].max())
    if worst > 1e-6:
        logger.warning(f"Amplitude imprimée du niveau {n} : écart maximal {worst:.3e} à la route intégrée")
    return frame


def schrodinger_residual(
    coeffs: Coefficients,
    pipeline: "ModePipeline",
    x_grid,
    t_grid,
    route: str = "integrated",
    hx: float = 1e-3,
    ht: float = 1e-4,
    t_ref: Optional[float] = None,
    tol: float = 1e-12,
) -> float:
    """
    max |i∂ₜψ − Ĥψ| avec Ĥ = p̂²/(2M₀) + M₀Ω₀²x̂²/2, différences centrées d'ordre 4.
    """
    x = np.asarray(x_grid, dtype=float)
    t_ref = pipeline.reference_time if t_ref is None else t_ref

    def psi(xs, s):
        return assemble_psi(coeffs, xs, s, pipeline, route, t_ref, tol)

    worst = 0.0
    for t in np.asarray(t_grid, dtype=float):
        d_t = (-psi(x, t + 2 * ht) + 8 * psi(x, t + ht) - 8 * psi(x, t - ht) + psi(x, t - 2 * ht)) / (
            12 * ht
        )
        d_xx = (
            -psi(x + 2 * hx, t) + 16 * psi(x + hx, t) - 30 * psi(x, t)
            + 16 * psi(x - hx, t) - psi(x - 2 * hx, t)
        ) / (12 * hx**2)
        m0 = float(pipeline.M0(t))
        om2 = float(pipeline.Omega0_sq(t))
        residual = 1j * d_t - (-d_xx / (2.0 * m0) + m0 * om2 * x**2 * psi(x, t) / 2.0)
        worst = max(worst, float(np.max(np.abs(residual))))
    logger.info(f"Résidu de Schrödinger maximal : {worst:.3e}")
    return worst


def density_frame(
    coeffs: Coefficients,
    pipeline: "ModePipeline",
    x_grid,
    times: Sequence[float],
    route: str = "integrated",
    t_ref: Optional[float] = None,
) -> pd.DataFrame:
    """Colonnes t, x, re_psi, im_psi, abs2 ; t en boucle externe."""
    x = np.asarray(x_grid, dtype=float)
    blocks = []
    for t in times:
        psi = np.asarray(assemble_psi(coeffs, x, t, pipeline, route, t_ref))
        blocks.append(
            pd.DataFrame(
                {"t": t, "x": x, "re_psi": psi.real, "im_psi": psi.imag, "abs2": np.abs(psi) ** 2}
            )
        )
    return pd.concat(blocks, ignore_index=True)


def covariance(
    n: int,
    g: GCoefficients,
    theta_im: float = 0.0,
    M0: Optional[float] = None,
    etadot: Optional[float] = None,
    eta: Optional[float] = None,
    convention: str = "moments",
) -> Covariance2:
    """
    Éléments de la matrice de covariance du niveau n.

    * "moments": moments de l'état propre normé, V₁₁ = g₁(2n+1)/(2η₀),
      V₂₂ = g₂(2n+1)/(2η₀), V₁₂ = −g₃(2n+1)/(2η₀) = M₀ηη̇(2n+1)/(2η₀).
    * "printed": (g₁/2, g₂/2, M₀η̇/2)·(2n+1)e^{−2θ}, θ = Im θₙ^(g).
    """
    if convention not in COVARIANCE_CONVENTIONS:
        raise InvalidArgumentError(f"Convention inconnue '{convention}'.")
    level = 2 * n + 1
    if convention == "moments":
        scale = level / (2.0 * g.eta0)
        return Covariance2(float(g.g1) * scale, float(g.g2) * scale, -float(g.g3) * scale)
    if M0 is None or etadot is None:
        raise InvalidArgumentError("La convention imprimée requiert M₀ et η̇.")
    damping = level * np.exp(-2.0 * theta_im)
    return Covariance2(
        float(g.g1) / 2.0 * damping, float(g.g2) / 2.0 * damping, M0 * etadot / 2.0 * damping
    )


def quadrature_moments(n: int, g: complex, norm_mode: str = "invariant", tol: float = 1e-12) -> Covariance2:
    """⟨x²⟩, ⟨p²⟩ et ⟨{x, p}⟩/2 par quadrature (états centrés, p̂ = −i∂ₓ)."""
    h = 1e-4

    def phi(s):
        return phi_n(n, s, g, norm_mode)

    def dphi(s):
        return (-phi(s + 2 * h) + 8 * phi(s + h) - 8 * phi(s - h) + phi(s - 2 * h)) / (12 * h)

    norm = phi_norm(n, g, norm_mode, tol)
    x2 = quad(lambda s: s**2 * abs(phi(s)) ** 2, -np.inf, np.inf, tol) / norm
    p2 = quad(lambda s: abs(dphi(s)) ** 2, -np.inf, np.inf, tol) / norm
    sym = quad(lambda s: (np.conj(phi(s)) * s * (-1j) * dphi(s)).real, -np.inf, np.inf, tol) / norm
    return Covariance2(float(x2), float(p2), float(sym))


def rsup_check(V: Covariance2) -> tuple[bool, float]:
    """V + iJ/2 ≥ 0 ⇔ det V ≥ 1/4 ; renvoie (verdict, det V − 1/4)."""
    margin = V.det - 0.25
    return bool(margin >= -RSUP_TOL), float(margin)


def rsup_eta_form(eta: float, etadot: float, M0: float) -> tuple[bool, float]:
    """1 + M₀²η²η̇² ≥ M₀²η̇² + √(1 + M₀²η²η̇²) ; renvoie (verdict, marge)."""
    squeeze = 1.0 + M0**2 * eta**2 * etadot**2
    margin = squeeze - M0**2 * etadot**2 - np.sqrt(squeeze)
    return bool(margin >= -RSUP_TOL), float(margin)


def covariance_frame(
    n: int,
    pipeline: "ModePipeline",
    times: Sequence[float],
    convention: str = "moments",
    t_ref: Optional[float] = None,
) -> pd.DataFrame:
    """
    Covariance et verdicts RSUP par instant.

    Les désaccords entre det V ≥ 1/4 et la contrainte en η sont signalés en WARNING.
    """
    times = np.asarray(times, dtype=float)
    theta = np.zeros_like(times)
    if convention == "printed":
        theta = phase_trajectory(n, pipeline, times, t_ref).theta_g_im

    rows = []
    for t, theta_im in zip(times, theta):
        state = pipeline.state(t)
        V = covariance(n, state.g_coefficients, theta_im, state.M0, state.etadot, state.eta, convention)
        ok, margin = rsup_check(V)
        eta_ok, eta_margin = rsup_eta_form(state.eta, state.etadot, state.M0)
        rows.append(
            {
                "t": t, "V11": V.V11, "V22": V.V22, "V12": V.V12, "det": V.det,
                "rsup_ok": ok, "rsup_margin": margin,
                "eta_form_ok": eta_ok, "eta_form_margin": eta_margin,
                "disagreement": ok != eta_ok,
            }
        )
    frame = pd.DataFrame(rows)
    disagreements = int(frame["disagreement"].sum())
    if disagreements:
        logger.warning(
            f"RSUP : {disagreements} instant(s) où det V ≥ 1/4 et la contrainte en η divergent"
        )
    return frame
