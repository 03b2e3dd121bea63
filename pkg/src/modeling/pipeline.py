"""
Chaîne de calcul par mode : η(t) → (g₁, g₂, g₃) → g(t) → (ω_ρ, α_ρ).

* `ModePipeline`: enveloppe une solution d'Ermakov-Pinney et les coefficients
  M₀(t), Ω₀²(t) de l'oscillateur hermitien.
* `toy_pipeline()`: modèle jouet M₀ = t, Ω₀ = 1/t (forme close).
* `static_pipeline()`: oscillateur à coefficients constants.
* `amplifier_pipeline()`: amplificateur PT-symétrique → métrique ponctuelle →
  oscillateur hermitien tabulé → intégration numérique d'EP.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.amplifier.metric import hermitian_oscillator_series
from src.amplifier.signals import AmplifierSpec, as_callable, constant, table
from src.exceptions import InvalidArgumentError
from src.modeling.ep_solver import (
    EPSolution,
    GCoefficients,
    default_initial_conditions,
    ep_integrate,
    g_from_eta,
    toy_signals,
    toy_solution,
)
from src.modeling.states import h_rho_ladder_coeffs

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

TOY_DOMAIN = (1e-3, 1e4)


@dataclass(frozen=True)
class ModeState:
    """Instantané de la chaîne au temps t."""

    t: float
    eta: float
    etadot: float
    g1: float
    g2: float
    g3: float
    g: complex
    M0: float
    Omega0_sq: float
    omega_rho: float
    alpha_rho: complex
    eta0: float = 1.0

    @property
    def g_coefficients(self) -> GCoefficients:
        return GCoefficients(self.g1, self.g2, self.g3, self.eta0)


class ModePipeline:
    """
    Évalue les quantités dérivées d'une solution d'EP à tout instant du domaine.

    Args:
        solution (EPSolution): Solution d'Ermakov-Pinney.
        M0: Masse effective (signal, fonction ou constante).
        Omega0_sq: Fréquence effective au carré.
        label (str): Nom du mode pour les journaux.
        reference_time (float, optional): Instant où les phases sont nulles ;
            début du domaine par défaut.
    """

    def __init__(
        self, solution: EPSolution, M0, Omega0_sq, label: str = "", reference_time: Optional[float] = None
    ):
        self.solution = solution
        self.M0 = as_callable(M0)
        self.Omega0_sq = as_callable(Omega0_sq)
        self.label = label or solution.label or solution.provenance
        self.reference_time = self.domain[0] if reference_time is None else reference_time

    @property
    def domain(self) -> tuple[float, float]:
        return self.solution.domain

    @property
    def reference_time(self) -> float:
        """Origine commune des phases dynamique et géométriques."""
        return self._reference_time

    @reference_time.setter
    def reference_time(self, t: float) -> None:
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise InvalidArgumentError(f"Instant de référence {t} hors du domaine [{lo}, {hi}]")
        self._reference_time = float(t)

    @property
    def eta0(self) -> float:
        return self.solution.eta0

    def g_coefficients(self, t) -> GCoefficients:
        return g_from_eta(self.solution, self.M0, t)

    def mode(self, t):
        """g(t) = (η₀ + ig₃)/g₁."""
        c = self.g_coefficients(t)
        return (self.eta0 + 1j * np.asarray(c.g3)) / np.asarray(c.g1)

    def g_dot(self, t) -> tuple:
        """(ġ₁, ġ₂, ġ₃) exacts d'après les équations d'invariance."""
        c = self.g_coefficients(t)
        m = np.asarray(self.M0(t), dtype=float)
        om2 = np.asarray(self.Omega0_sq(t), dtype=float)
        return (
            -2.0 * c.g3 / m,
            2.0 * m * om2 * c.g3,
            m * om2 * c.g1 - c.g2 / m,
        )

    def mode_dot(self, t):
        """ġ = (iġ₃g₁ − (η₀ + ig₃)ġ₁)/g₁²."""
        c = self.g_coefficients(t)
        dg1, _, dg3 = self.g_dot(t)
        return (1j * dg3 * c.g1 - (self.eta0 + 1j * c.g3) * dg1) / c.g1**2

    def omega_rho(self, t) -> float:
        return self.state(t).omega_rho

    def state(self, t: float) -> ModeState:
        eta, etadot = (float(v) for v in self.solution(t))
        c = self.g_coefficients(t)
        m0 = float(self.M0(t))
        om2 = float(self.Omega0_sq(t))
        omega_rho, alpha_rho = h_rho_ladder_coeffs(eta, etadot, m0, om2, self.eta0)
        return ModeState(
            t=float(t),
            eta=eta,
            etadot=etadot,
            g1=float(c.g1),
            g2=float(c.g2),
            g3=float(c.g3),
            g=complex(self.mode(t)),
            M0=m0,
            Omega0_sq=om2,
            omega_rho=omega_rho,
            alpha_rho=alpha_rho,
            eta0=self.eta0,
        )


def toy_pipeline(
    c1: float = 4.0,
    c2: float = 4.0,
    branch: str = "1+",
    variant: str = "smooth",
    t_span: tuple[float, float] = TOY_DOMAIN,
) -> ModePipeline:
    """Modèle jouet M₀ = t, Ω₀² = 1/t², η₀ = 1, solution exacte."""
    M0, Omega0_sq = toy_signals()
    solution = toy_solution(c1, c2, branch, variant, t_span)
    return ModePipeline(solution, M0, Omega0_sq, label=f"toy {branch}/{variant}")


def static_pipeline(
    mass: float = 1.0, omega: float = 1.0, t_span: tuple[float, float] = (0.0, 10.0)
) -> ModePipeline:
    """Oscillateur constant, η ≡ (MΩ)^{-1/2} point fixe d'EP."""
    M0, Omega0_sq = constant(mass), constant(omega**2)
    eta_init, etadot_init = default_initial_conditions(M0, Omega0_sq, t_span[0])
    solution = ep_integrate(M0, Omega0_sq, 1.0, eta_init, etadot_init, t_span)
    return ModePipeline(solution, M0, Omega0_sq, label="static")


def numeric_toy_pipeline(
    c1: float = 4.0,
    c2: float = 4.0,
    branch: str = "1+",
    t_span: tuple[float, float] = (1.0, 10.0),
    tol: float = 1e-10,
) -> ModePipeline:
    """Modèle jouet intégré numériquement, démarré sur la branche exacte (variante lisse)."""
    M0, Omega0_sq = toy_signals()
    start = toy_solution(c1, c2, branch, "smooth")
    eta_init, etadot_init = (float(v) for v in start(t_span[0]))
    if eta_init < 0.0:
        eta_init, etadot_init = -eta_init, -etadot_init
    solution = ep_integrate(M0, Omega0_sq, 1.0, eta_init, etadot_init, t_span, tol)
    return ModePipeline(solution, M0, Omega0_sq, label=f"numeric toy {branch}")


def amplifier_pipeline(
    spec: AmplifierSpec,
    kappa: float,
    t_span: tuple[float, float],
    n_samples: int = 201,
    tol: float = 1e-10,
    hermiticity_tol: float = 1e-6,
    eta_init: Optional[float] = None,
    etadot_init: float = 0.0,
    eta0: float = 1.0,
) -> ModePipeline:
    """
    Chaîne complète depuis l'amplificateur PT-symétrique.

    M₀(t) et Ω₀²(t) sont tabulés par résolution ponctuelle de la métrique, puis
    interpolés (spline cubique) pour l'intégration d'EP.

    Raises:
        NoMetricError, HermitizationError, DegenerateMassError: Propagées.
        SingularityError: Si l'intégration d'EP échoue.
    """
    times = np.linspace(t_span[0], t_span[1], n_samples)
    logger.info(f"Étape 1 : métrique ponctuelle sur {n_samples} instants de {t_span}")
    m0_values, om2_values, jumps = hermitian_oscillator_series(
        spec, kappa, times, hermiticity_tol=hermiticity_tol
    )
    if jumps:
        logger.warning(f"{len(jumps)} saut(s) de branche de κ₀ le long de la trajectoire")

    if np.ptp(m0_values) == 0.0 and np.ptp(om2_values) == 0.0:
        M0, Omega0_sq = constant(m0_values[0]), constant(om2_values[0])
    else:
        M0, Omega0_sq = table(times, m0_values), table(times, om2_values)

    if eta_init is None:
        eta_init, etadot_init = default_initial_conditions(M0, Omega0_sq, times[0], eta0)
    logger.info(f"Étape 2 : intégration d'EP (η={eta_init:.6g}, η̇={etadot_init:.6g})")
    solution = ep_integrate(M0, Omega0_sq, eta0, eta_init, etadot_init, t_span, tol)
    return ModePipeline(solution, M0, Omega0_sq, label="amplifier")
