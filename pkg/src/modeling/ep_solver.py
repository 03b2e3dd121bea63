"""
Équation d'Ermakov-Pinney et coefficients de l'invariant de Lewis-Riesenfeld.

    η̈ + (Ṁ₀/M₀)η̇ + Ω₀²η = η₀²/(M₀²η³)

Fonctions principales :

* `ep_integrate()`: intégration numérique (RK45) de l'équation.
* `toy_eta()` / `toy_solution()`: solution exacte du modèle jouet M₀ = t,
  Ω₀ = 1/t, en variante |sin| ou sinus signé.
* `select_smooth_variant()`: verdict résidu + sauts de dérivée entre les deux variantes.
* `g_from_eta()`: coefficients (g₁, g₂, g₃) de l'invariant.
* `lr_residual()`: résidus des équations couplées d'invariance.
* `trajectory_frame()`: tableau pandas t, eta, etadot, g1, g2, g3, residual.
"""

import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np
import pandas as pd

from src.amplifier.signals import ParameterSignal, as_callable, toy
from src.exceptions import (
    BarrierViolationError,
    CoefficientSingularityError,
    InvalidArgumentError,
    InvalidConstantError,
)
from src.numerics.solvers import Trajectory, integrate_ode

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

BRANCHES = ("1+", "1-", "2+", "2-")
_BRANCH_ALIASES = {"1p": "1+", "1m": "1-", "2p": "2+", "2m": "2-", "1−": "1-", "2−": "2-"}
VARIANTS = ("smooth", "abs")
FD_RELATIVE_STEP = 1e-6
BARRIER_FRACTION = 1e-8
SINGULARITY_SAMPLES = 1001


@dataclass(frozen=True)
class GCoefficients:
    """
    Coefficients de Î = g₁p̂² + g₂x̂² + g₃{x̂, p̂} (g₀ = 0).

    Les champs peuvent être des scalaires ou des tableaux (séries temporelles).
    """

    g1: float
    g2: float
    g3: float
    eta0: float = 1.0

    def __post_init__(self):
        if not np.all(np.asarray(self.g1) > 0.0):
            raise InvalidArgumentError(f"g₁ doit être strictement positif : {self.g1}")
        if self.eta0 <= 0.0:
            raise InvalidArgumentError(f"η₀ doit être strictement positif : {self.eta0}")

    @property
    def ermakov_residual(self):
        """g₃² − g₁g₂ + η₀², nul le long de toute solution."""
        return np.asarray(self.g3) ** 2 - np.asarray(self.g1) * np.asarray(self.g2) + self.eta0**2


@dataclass(frozen=True, eq=False)
class EPSolution:
    """
    Solution (η, η̇) de l'équation d'Ermakov-Pinney.

    Attributes:
        eta0 (float): Constante d'Ermakov.
        provenance (str): "closed-form-toy" ou "numeric".
        domain (tuple[float, float]): Intervalle de temps couvert.
        evaluator (Callable): t ↦ (η, η̇), vectorisé.
        trajectory (Trajectory, optional): Trajectoire numérique sous-jacente.
        label (str): Branche / variante pour la forme close.
    """

    eta0: float
    provenance: str
    domain: tuple[float, float]
    evaluator: Callable
    trajectory: Optional[Trajectory] = None
    label: str = ""

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < self.domain[0]) or np.any(t_arr > self.domain[1]):
            raise InvalidArgumentError(f"t={t} hors du domaine {self.domain} de la solution.")
        return self.evaluator(t_arr)

    def eta(self, t):
        return self(t)[0]

    def etadot(self, t):
        return self(t)[1]


class ToyEta(NamedTuple):
    eta: np.ndarray
    etadot: np.ndarray
    kink: np.ndarray


def _parse_branch(branch: str) -> tuple[float, float]:
    """(signe intérieur, signe global) : j=1 → +, j=2 → −, ± → signe de η."""
    branch = _BRANCH_ALIASES.get(branch, branch)
    if branch not in BRANCHES:
        raise InvalidArgumentError(f"Branche inconnue '{branch}'. Attendu : {BRANCHES}")
    inner = 1.0 if branch[0] == "1" else -1.0
    outer = 1.0 if branch[1] == "+" else -1.0
    return inner, outer


def _toy_terms(c1: float, c2: float, branch: str, t, variant: str):
    """u = η², ses dérivées temporelles et le signe global."""
    if c1 < 1.0:
        raise InvalidConstantError(f"c₁ ≥ 1 requis pour une racine réelle (reçu {c1}).")
    if variant not in VARIANTS:
        raise InvalidArgumentError(f"Variante inconnue '{variant}'. Attendu : {VARIANTS}")
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise InvalidArgumentError("Le modèle jouet est défini pour t > 0.")
    inner, outer = _parse_branch(branch)
    amplitude = np.sqrt(c1**2 - 1.0)

    phase = 2.0 * c2 - 2.0 * np.log(t)
    sin_phase, cos_phase = np.sin(phase), np.cos(phase)
    if variant == "smooth":
        s, ds, d2s = sin_phase, cos_phase, -sin_phase
        kink = np.zeros_like(t, dtype=bool)
    else:
        sign = np.where(sin_phase >= 0.0, 1.0, -1.0)
        s, ds, d2s = sign * sin_phase, sign * cos_phase, -sign * sin_phase
        kink = sin_phase == 0.0

    u = c1 + inner * amplitude * s
    du = inner * amplitude * ds * (-2.0 / t)
    d2u = inner * amplitude * (d2s * 4.0 / t**2 + ds * 2.0 / t**2)
    return u, du, d2u, outer, kink


def toy_eta(c1: float, c2: float, branch: str, t, variant: str = "abs") -> ToyEta:
    """
    Solution exacte du modèle jouet (M₀ = t, Ω₀ = 1/t, η₀ = 1).

    η² = c₁ ± √(c₁² − 1)·S(2c₂ − 2 ln t), où S = |sin| (variante "abs", forme
    imprimée via ζ/(1+ζ) = sin²) ou S = sin (variante "smooth").

    Args:
        c1 (float): Constante d'intégration (≥ 1).
        c2 (float): Constante d'intégration (phase).
        branch (str): "1+", "1-", "2+" ou "2-".
        t: Instant(s) strictement positif(s).
        variant (str): "abs" ou "smooth".

    Returns:
        ToyEta: (η, η̇, drapeau de point anguleux). Au point anguleux la dérivée
        renvoyée est la dérivée à droite en ln t.

    Raises:
        InvalidConstantError: Si c₁ < 1.
    """
    u, du, _, outer, kink = _toy_terms(c1, c2, branch, t, variant)
    eta = outer * np.sqrt(u)
    etadot = du / (2.0 * eta)
    if np.ndim(eta) == 0:
        return ToyEta(float(eta), float(etadot), bool(kink))
    return ToyEta(eta, etadot, kink)


def toy_eta_ddot(c1: float, c2: float, branch: str, t, variant: str = "smooth"):
    """η̈ analytique, η̈ = ü/(2η) − u̇²/(4uη)."""
    u, du, d2u, outer, _ = _toy_terms(c1, c2, branch, t, variant)
    eta = outer * np.sqrt(u)
    return d2u / (2.0 * eta) - du**2 / (4.0 * u * eta)


def toy_signals() -> tuple[ParameterSignal, ParameterSignal]:
    """(M₀, Ω₀²) du modèle jouet avec η₀ = 1 : M₀ = t, Ω₀² = 1/t²."""
    return toy(1.0, 1.0), toy(1.0, -2.0)


def toy_solution(
    c1: float,
    c2: float,
    branch: str,
    variant: str = "smooth",
    t_span: tuple[float, float] = (1e-3, 1e4),
) -> EPSolution:
    """Solution exacte du modèle jouet emballée en `EPSolution`."""
    _parse_branch(branch)
    if c1 < 1.0:
        raise InvalidConstantError(f"c₁ ≥ 1 requis pour une racine réelle (reçu {c1}).")

    def evaluator(t):
        values = toy_eta(c1, c2, branch, t, variant)
        return values.eta, values.etadot

    return EPSolution(
        eta0=1.0,
        provenance="closed-form-toy",
        domain=(float(t_span[0]), float(t_span[1])),
        evaluator=evaluator,
        label=f"{branch}/{variant}",
    )


def ermakov_residual(g: GCoefficients):
    """g₃² − g₁g₂ + η₀² (scalaire ou tableau)."""
    return g.ermakov_residual


def ep_residual(eta, etadot, etaddot, M0, dM0, Omega0_sq, eta0: float = 1.0):
    """Résidu η̈ + (Ṁ₀/M₀)η̇ + Ω₀²η − η₀²/(M₀²η³)."""
    return (
        etaddot + (dM0 / M0) * etadot + Omega0_sq * eta - eta0**2 / (M0**2 * eta**3)
    )


def select_smooth_variant(
    c1: float,
    c2: float,
    branch: str,
    t_span: tuple[float, float] = (1.0, 10.0),
    n: int = 2001,
    tol: float = 1e-8,
) -> dict:
    """
    Compare les variantes |sin| et sinus signé du modèle jouet.

    Pour chaque variante : résidu maximal de l'équation d'EP sur la grille et
    saut maximal de η̇ aux zéros de sin(2c₂ − 2 ln t) dans l'intervalle. La
    variante retenue est celle dont le résidu est ≤ tol et dont η̇ est continue.

    Returns:
        dict: {"smooth": {...}, "abs": {...}, "genuine": nom ou None}.
    """
    t = np.linspace(t_span[0], t_span[1], n)
    k_min = np.ceil((2.0 * c2 - 2.0 * np.log(t_span[1])) / np.pi)
    k_max = np.floor((2.0 * c2 - 2.0 * np.log(t_span[0])) / np.pi)
    kinks = np.exp((2.0 * c2 - np.pi * np.arange(k_min, k_max + 1)) / 2.0)

    report: dict = {}
    for variant in VARIANTS:
        eta, etadot, _ = toy_eta(c1, c2, branch, t, variant)
        etaddot = toy_eta_ddot(c1, c2, branch, t, variant)
        residual = ep_residual(eta, etadot, etaddot, t, 1.0, 1.0 / t**2)
        jumps = [
            abs(
                toy_eta(c1, c2, branch, tk * (1.0 + 1e-10), variant).etadot
                - toy_eta(c1, c2, branch, tk * (1.0 - 1e-10), variant).etadot
            )
            for tk in kinks
        ]
        report[variant] = {
            "max_residual": float(np.max(np.abs(residual))),
            "max_jump": float(max(jumps)) if jumps else 0.0,
            "kinks": [float(tk) for tk in kinks],
        }

    genuine = [
        v for v in VARIANTS
        if report[v]["max_residual"] <= tol and report[v]["max_jump"] <= 1e-6
    ]
    report["genuine"] = genuine[0] if genuine else None
    logger.info(
        f"Verdict de régularité (branche {branch}, c₁={c1}, c₂={c2}) : "
        f"variante retenue = {report['genuine']} ; "
        f"saut maximal de η̇ pour |sin| = {report['abs']['max_jump']:.3e}"
    )
    return report


def _derivative_rule(signal, dM0: Optional[Callable]) -> Callable:
    if dM0 is not None:
        return dM0
    if isinstance(signal, ParameterSignal) and signal.has_analytic_derivative:
        return signal.derivative
    domain = signal.domain if isinstance(signal, ParameterSignal) else (-np.inf, np.inf)

    def central_difference(t):
        h = FD_RELATIVE_STEP * max(1.0, abs(t))
        center = min(max(t, domain[0] + h), domain[1] - h)
        return (signal(center + h) - signal(center - h)) / (2.0 * h)

    return central_difference


def _check_mass(M0: Callable, t_span: tuple[float, float]) -> None:
    samples = np.linspace(min(t_span), max(t_span), SINGULARITY_SAMPLES)
    values = np.array([float(M0(s)) for s in samples])
    if np.any(values == 0.0) or np.any(np.sign(values[:-1]) != np.sign(values[1:])):
        idx = int(np.argmax((values == 0.0) | np.r_[np.sign(values[:-1]) != np.sign(values[1:]), False]))
        logger.error(f"M₀ s'annule près de t={samples[idx]:.6g} sur {t_span}")
        raise CoefficientSingularityError(
            f"M₀ s'annule sur l'intervalle d'intégration (près de t={samples[idx]:.6g}).",
            reached_time=float(samples[idx]),
        )


def ep_integrate(
    M0,
    Omega0_sq,
    eta0: float,
    eta_init: float,
    etadot_init: float,
    t_span: tuple[float, float],
    tol: float = 1e-10,
    dM0: Optional[Callable] = None,
) -> EPSolution:
    """
    Intègre numériquement l'équation d'Ermakov-Pinney.

    Args:
        M0: Masse effective M₀(t) (signal, fonction ou constante).
        Omega0_sq: Fréquence effective au carré Ω₀²(t).
        eta0 (float): Constante d'Ermakov.
        eta_init (float): η au début de l'intervalle (> 0).
        etadot_init (float): η̇ au début de l'intervalle.
        t_span (tuple): (t_début, t_fin).
        tol (float): Tolérance relative locale (absolue = tol·1e-2).
        dM0 (Callable, optional): Dérivée analytique de M₀.

    Returns:
        EPSolution: Solution numérique avec sortie dense.

    Raises:
        InvalidArgumentError: Si eta_init ≤ 0.
        CoefficientSingularityError: Si M₀ s'annule sur l'intervalle.
        BarrierViolationError: Si η atteint 0 numériquement.
    """
    if eta_init <= 0.0:
        raise InvalidArgumentError(f"η initial strictement positif requis (reçu {eta_init}).")
    M0 = as_callable(M0)
    Omega0_sq = as_callable(Omega0_sq)
    dM0 = _derivative_rule(M0, dM0)
    _check_mass(M0, t_span)

    logger.info(
        f"Intégration d'Ermakov-Pinney sur {t_span} (η₀={eta0}, η={eta_init}, η̇={etadot_init}, tol={tol:.1e})"
    )

    def rhs(t, y):
        eta, v = y
        m = float(M0(t))
        if m == 0.0:
            raise CoefficientSingularityError(f"M₀(t) = 0 à t={t}", reached_time=float(t))
        return np.array(
            [
                v,
                -(float(dM0(t)) / m) * v
                - float(Omega0_sq(t)) * eta
                + eta0**2 / (m**2 * eta**3),
            ]
        )

    def barrier(t, y):
        return y[0] - BARRIER_FRACTION * eta_init

    barrier.terminal = True
    barrier.direction = -1

    trajectory = integrate_ode(
        rhs, [eta_init, etadot_init], t_span, rel_tol=tol, abs_tol=tol * 1e-2, events=[barrier]
    )
    if trajectory.events:
        reached = trajectory.events[0]
        logger.error(f"η s'est effondré vers 0 à t={reached:.10g} : tolérance trop lâche ?")
        raise BarrierViolationError(
            f"Violation de la barrière répulsive η⁻³ à t={reached:.10g}.",
            reached_time=reached,
        )

    def evaluator(t):
        y = np.asarray(trajectory(t))
        return y[..., 0], y[..., 1]

    return EPSolution(
        eta0=eta0,
        provenance="numeric",
        domain=(trajectory.t_start, trajectory.t_end),
        evaluator=evaluator,
        trajectory=trajectory,
    )


def default_initial_conditions(
    M0, Omega0_sq, t_start: float, eta0: float = 1.0
) -> tuple[float, float]:
    """(η, η̇) = (√η₀·(M₀Ω₀)^{-1/2}, 0) au début de l'intervalle (point fixe à coefficients gelés)."""
    m = float(as_callable(M0)(t_start))
    om2 = float(as_callable(Omega0_sq)(t_start))
    if m * np.sqrt(max(om2, 0.0)) <= 0.0:
        raise InvalidArgumentError(
            f"Conditions initiales par défaut indéfinies : M₀={m}, Ω₀²={om2} à t={t_start}"
        )
    return float(np.sqrt(eta0) * (m * np.sqrt(om2)) ** -0.5), 0.0


def g_from_eta(sol: EPSolution, M0, t) -> GCoefficients:
    """
    g₁ = η², g₃ = −M₀ηη̇, g₂ = M₀²η̇² + η₀²/η².

    Args:
        sol (EPSolution): Solution d'EP.
        M0: Masse effective.
        t: Instant(s) du domaine de la solution.

    Returns:
        GCoefficients: Coefficients (scalaires ou tableaux).
    """
    eta, etadot = sol(t)
    m = np.asarray(as_callable(M0)(t), dtype=float)
    return GCoefficients(
        g1=eta**2,
        g2=m**2 * etadot**2 + sol.eta0**2 / eta**2,
        g3=-m * eta * etadot,
        eta0=sol.eta0,
    )


class LRResidual(NamedTuple):
    t: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray

    @property
    def max(self) -> float:
        return float(max(np.max(np.abs(self.r1)), np.max(np.abs(self.r2)), np.max(np.abs(self.r3))))


def _grid_derivative(values: np.ndarray, h: float, order: int) -> np.ndarray:
    """Différences centrées sur les points intérieurs (ordre 2 ou 4)."""
    if order == 2:
        return (values[2:] - values[:-2]) / (2.0 * h)
    if order == 4:
        return (-values[4:] + 8.0 * values[3:-1] - 8.0 * values[1:-3] + values[:-4]) / (12.0 * h)
    raise InvalidArgumentError(f"Ordre de différences finies non supporté : {order}")


def lr_residual(
    t: np.ndarray, g: GCoefficients, M0, Omega0_sq, order: int = 4
) -> LRResidual:
    """
    Résidus des équations d'invariance sur une grille uniforme.

    r₁ = ġ₁ + (2/M₀)g₃, r₂ = ġ₂ − 2M₀Ω₀²g₃, r₃ = ġ₃ − M₀Ω₀²g₁ + g₂/M₀.

    Args:
        t (np.ndarray): Grille uniforme.
        g (GCoefficients): Séries g₁, g₂, g₃ sur la grille.
        M0, Omega0_sq: Coefficients de l'oscillateur.
        order (int): Ordre des différences centrées (2 ou 4).

    Returns:
        LRResidual: Résidus sur les points intérieurs.
    """
    t = np.asarray(t, dtype=float)
    steps = np.diff(t)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise InvalidArgumentError("lr_residual requiert une grille uniforme.")
    h = steps[0]
    cut = order // 2
    inner = t[cut:-cut]

    g1, g2, g3 = (np.asarray(v, dtype=float) for v in (g.g1, g.g2, g.g3))
    m = np.asarray(as_callable(M0)(inner), dtype=float)
    om2 = np.asarray(as_callable(Omega0_sq)(inner), dtype=float)
    g1i, g2i, g3i = g1[cut:-cut], g2[cut:-cut], g3[cut:-cut]

    r1 = _grid_derivative(g1, h, order) + (2.0 / m) * g3i
    r2 = _grid_derivative(g2, h, order) - 2.0 * m * om2 * g3i
    r3 = _grid_derivative(g3, h, order) - m * om2 * g1i + g2i / m
    return LRResidual(inner, r1, r2, r3)


def trajectory_frame(sol: EPSolution, M0, times) -> pd.DataFrame:
    """Tableau t, eta, etadot, g1, g2, g3, residual (résidu d'Ermakov)."""
    times = np.asarray(times, dtype=float)
    eta, etadot = sol(times)
    g = g_from_eta(sol, M0, times)
    return pd.DataFrame(
        {
            "t": times,
            "eta": eta,
            "etadot": etadot,
            "g1": g.g1,
            "g2": g.g2,
            "g3": g.g3,
            "residual": g.ermakov_residual,
        }
    )
