"""
Signaux temporels de l'amplificateur et classification du régime PT.

Ce module contient :

* `ParameterSignal` : une fonction réelle du temps, décrite par un descripteur
  JSON (constant, cosinus, loi de puissance "toy", tableau interpolé, affine).
* `AmplifierSpec` : les quatre signaux ω(t), α(t), β(t), m(t) de l'Hamiltonien.
* `equivalent_form()` : masse M, fréquence Ω² et couplages ν± équivalents.
* `pt_unbroken()` / `pt_region_scan()` : critère trace/déterminant et région
  de symétrie PT non brisée dans le plan (α, β).
* `modulated_spec()` : amplificateur obtenu par modulation d'un oscillateur.
* `evenness_defect()` : diagnostic de parité des signaux en t.

Les signaux sont évalués à la demande : chaque étape échantillonne sur sa
propre grille.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from src.exceptions import (
    DegenerateMassError,
    InvalidArgumentError,
    ParameterDomainError,
)

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

SIGNAL_KINDS = ("constant", "cosine", "toy", "table", "affine")
ANALYTIC_KINDS = ("constant", "cosine", "toy", "affine")
MODULATION_WARNING_THRESHOLD = 0.2
PT_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class ParameterSignal:
    """
    Signal réel t ↦ s(t) sur un domaine déclaré.

    Attributes:
        kind (str): "constant", "cosine", "toy", "table" ou "affine".
        params (dict): Paramètres du descripteur JSON associé.
        domain (tuple[float, float]): Domaine (t_min, t_max) de validité.
    """

    kind: str
    params: dict
    domain: tuple[float, float] = (-np.inf, np.inf)
    _spline: Optional[CubicSpline] = field(init=False, default=None, repr=False)

    def __post_init__(self):
        if self.kind not in SIGNAL_KINDS:
            raise InvalidArgumentError(
                f"Type de signal inconnu : '{self.kind}'. Types attendus : {SIGNAL_KINDS}"
            )
        if not self.domain[0] < self.domain[1]:
            raise InvalidArgumentError(f"Domaine vide : {self.domain}")
        if self.kind == "table":
            t = np.asarray(self.params["t"], dtype=float)
            v = np.asarray(self.params["v"], dtype=float)
            if t.shape != v.shape or t.size < 2:
                raise InvalidArgumentError(
                    "Un signal tabulé requiert deux listes de même longueur (≥ 2)."
                )
            if not np.all(np.isfinite(v)):
                raise InvalidArgumentError("Valeurs tabulées non finies.")
            object.__setattr__(self, "_spline", CubicSpline(t, v, extrapolate=False))

    @property
    def has_analytic_derivative(self) -> bool:
        if self.kind == "affine":
            return self.params["base"].has_analytic_derivative
        return self.kind in ANALYTIC_KINDS

    def _check_domain(self, t: np.ndarray) -> None:
        if np.any(t < self.domain[0]) or np.any(t > self.domain[1]):
            raise ParameterDomainError(
                f"Instant hors du domaine {self.domain} du signal '{self.kind}' : {t}"
            )

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        self._check_domain(t_arr)
        p = self.params
        if self.kind == "constant":
            value = np.full_like(t_arr, float(p["value"]))
        elif self.kind == "cosine":
            value = p.get("offset", 0.0) + p["amp"] * np.cos(
                p["freq"] * t_arr + p.get("phase", 0.0)
            )
        elif self.kind == "toy":
            value = p["coeff"] * np.power(t_arr, p["power"])
        elif self.kind == "table":
            value = self._spline(t_arr)
        else:
            value = p.get("offset", 0.0) + p.get("scale", 1.0) * p["base"](t_arr)
        return value[()] if np.ndim(value) == 0 else value

    def derivative(self, t):
        """
        Dérivée temporelle du signal.

        Analytique pour les types constant, cosinus, toy et affine ; dérivée
        de la spline cubique pour un tableau.
        """
        t_arr = np.asarray(t, dtype=float)
        self._check_domain(t_arr)
        p = self.params
        if self.kind == "constant":
            value = np.zeros_like(t_arr)
        elif self.kind == "cosine":
            value = -p["amp"] * p["freq"] * np.sin(p["freq"] * t_arr + p.get("phase", 0.0))
        elif self.kind == "toy":
            value = p["coeff"] * p["power"] * np.power(t_arr, p["power"] - 1.0)
        elif self.kind == "table":
            value = self._spline(t_arr, 1)
        else:
            value = p.get("scale", 1.0) * p["base"].derivative(t_arr)
        return value[()] if np.ndim(value) == 0 else value

    def to_descriptor(self) -> dict:
        """Descripteur JSON du signal (inverse de `signal_from_descriptor`)."""
        desc: dict[str, Any] = {"kind": self.kind}
        for key, value in self.params.items():
            if isinstance(value, ParameterSignal):
                desc[key] = value.to_descriptor()
            elif isinstance(value, np.ndarray):
                desc[key] = value.tolist()
            else:
                desc[key] = value
        return desc


def constant(value: float) -> ParameterSignal:
    return ParameterSignal("constant", {"value": float(value)})


def cosine(
    amp: float, freq: float, phase: float = 0.0, offset: float = 0.0
) -> ParameterSignal:
    return ParameterSignal(
        "cosine", {"amp": amp, "freq": freq, "phase": phase, "offset": offset}
    )


def toy(coeff: float, power: float) -> ParameterSignal:
    """Loi de puissance coeff·t^power, définie pour t > 0."""
    return ParameterSignal(
        "toy", {"coeff": coeff, "power": power}, domain=(np.nextafter(0.0, 1.0), np.inf)
    )


def table(t, v) -> ParameterSignal:
    """Signal tabulé interpolé par spline cubique, sans extrapolation."""
    t = np.asarray(t, dtype=float)
    return ParameterSignal(
        "table", {"t": t, "v": np.asarray(v, dtype=float)}, domain=(float(t[0]), float(t[-1]))
    )


def affine(base: ParameterSignal, offset: float = 0.0, scale: float = 1.0) -> ParameterSignal:
    return ParameterSignal(
        "affine", {"base": base, "offset": offset, "scale": scale}, domain=base.domain
    )


def signal_from_descriptor(descriptor: dict) -> ParameterSignal:
    """
    Construit un signal depuis son descripteur JSON.

    Args:
        descriptor (dict): Par exemple {"kind": "cosine", "amp": 0.1, "freq": 2.0}.

    Returns:
        ParameterSignal: Le signal correspondant.

    Raises:
        InvalidArgumentError: Type inconnu ou champs manquants.
    """
    kind = descriptor.get("kind")
    try:
        if kind == "constant":
            return constant(descriptor["value"])
        if kind == "cosine":
            return cosine(
                descriptor["amp"],
                descriptor["freq"],
                descriptor.get("phase", 0.0),
                descriptor.get("offset", 0.0),
            )
        if kind == "toy":
            return toy(descriptor["coeff"], descriptor["power"])
        if kind == "table":
            return table(descriptor["t"], descriptor["v"])
        if kind == "affine":
            return affine(
                signal_from_descriptor(descriptor["base"]),
                descriptor.get("offset", 0.0),
                descriptor.get("scale", 1.0),
            )
    except KeyError as e:
        raise InvalidArgumentError(
            f"Champ manquant {e} dans le descripteur de signal '{kind}'."
        ) from e
    raise InvalidArgumentError(f"Type de signal inconnu : '{kind}'")


def evenness_defect(signal: ParameterSignal, n: int = 201) -> Optional[float]:
    """
    Écart maximal |s(t) − s(−t)| sur la partie symétrique du domaine.

    Renvoie None si le domaine ne contient pas de partie symétrique autour de 0
    (cas du modèle jouet défini pour t > 0). Un domaine infini est sondé sur [−100, 100].
    """
    t_min, t_max = signal.domain
    if not (t_min < 0.0 < t_max):
        logger.info(
            f"Domaine {signal.domain} sans partie symétrique : parité non évaluable."
        )
        return None
    half = min(-t_min, t_max, 100.0)
    t = np.linspace(0.0, half, n)
    return float(np.max(np.abs(signal(t) - signal(-t))))


@dataclass(frozen=True, eq=False)
class AmplifierSpec:
    """
    Paramètres temporels de l'Hamiltonien Ĥ = ω(â†â + 1/2) + αâ² + βâ†² (ħ = 1).

    Le domaine commun est l'intersection des domaines des quatre signaux ;
    la positivité de m(t) et ω(t) est vérifiée à chaque évaluation.
    """

    omega: ParameterSignal
    alpha: ParameterSignal
    beta: ParameterSignal
    mass: ParameterSignal

    @property
    def domain(self) -> tuple[float, float]:
        signals = (self.omega, self.alpha, self.beta, self.mass)
        lo = max(s.domain[0] for s in signals)
        hi = min(s.domain[1] for s in signals)
        return lo, hi

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise InvalidArgumentError(
                f"Les signaux n'ont pas de domaine commun (intersection [{lo}, {hi}])."
            )

    def sample(self, t: float) -> tuple[float, float, float, float]:
        """
        Évalue (ω, α, β, m) à l'instant t.

        Raises:
            ParameterDomainError: Si t est hors du domaine commun ou si m(t) ≤ 0
                ou ω(t) ≤ 0.
        """
        lo, hi = self.domain
        if not lo <= t <= hi:
            raise ParameterDomainError(f"t={t} hors du domaine commun [{lo}, {hi}]")
        omega = float(self.omega(t))
        mass = float(self.mass(t))
        if omega <= 0.0 or mass <= 0.0:
            raise ParameterDomainError(
                f"ω(t) et m(t) doivent être positifs : ω={omega}, m={mass} à t={t}"
            )
        return omega, float(self.alpha(t)), float(self.beta(t)), mass

    @classmethod
    def from_constants(
        cls, omega: float, alpha: float, beta: float, mass: float = 1.0
    ) -> "AmplifierSpec":
        return cls(constant(omega), constant(alpha), constant(beta), constant(mass))

    @classmethod
    def from_descriptors(cls, descriptors: dict) -> "AmplifierSpec":
        return cls(
            omega=signal_from_descriptor(descriptors["omega"]),
            alpha=signal_from_descriptor(descriptors["alpha"]),
            beta=signal_from_descriptor(descriptors["beta"]),
            mass=signal_from_descriptor(descriptors["mass"]),
        )


@dataclass(frozen=True)
class EquivalentForm:
    """Ĥ = p̂²/2M + MΩ²x̂²/2 + (iν₋/2){x̂, p̂} avec ν± = α ± β."""

    M: float
    Omega2: float
    nu_plus: float
    nu_minus: float


def equivalent_form(spec: AmplifierSpec, t: float) -> EquivalentForm:
    """
    Masse, fréquence et couplages équivalents à l'instant t.

    M⁻¹ = (1 − ν₊/ω)m⁻¹, Ω² = ω² − ν₊², ν± = α ± β.

    Args:
        spec (AmplifierSpec): Paramètres de l'amplificateur.
        t (float): Instant d'évaluation.

    Returns:
        EquivalentForm: La forme équivalente.

    Raises:
        DegenerateMassError: Si ω(t) = ν₊(t) (masse infinie).
    """
    omega, alpha, beta, mass = spec.sample(t)
    nu_plus = alpha + beta
    nu_minus = alpha - beta
    denominator = omega - nu_plus
    if abs(denominator) <= 1e-14 * max(1.0, abs(omega)):
        raise DegenerateMassError(
            f"Masse équivalente infinie à t={t} : ω = ν₊ = {omega}"
        )
    return EquivalentForm(
        M=mass * omega / denominator,
        Omega2=omega**2 - nu_plus**2,
        nu_plus=nu_plus,
        nu_minus=nu_minus,
    )


def hamiltonian_entries(
    mass: float, omega: float, alpha: float, beta: float
) -> tuple[float, float, complex, complex]:
    """
    Coefficients (h11, h22, h12, h21) de la forme bilinéaire X†ĤX, X = (x̂, p̂).

    h11 = MΩ²/2 = mω(ω + ν₊)/2 et h22 = 1/(2M) = (ω − ν₊)/(2mω) restent finis
    sur la ligne de masse dégénérée ω = ν₊.
    """
    nu_plus = alpha + beta
    nu_minus = alpha - beta
    h11 = mass * omega * (omega + nu_plus) / 2.0
    h22 = (omega - nu_plus) / (2.0 * mass * omega)
    h12 = 0.5j * nu_minus
    return h11, h22, h12, h12


def pt_discriminant(h11: float, h22: float, h12: complex, h21: complex) -> float:
    """(Re τ)² − 4 Re Δ avec τ = h11 + h22 et Δ = h11·h22 − h12·h21."""
    tau = h11 + h22
    delta = h11 * h22 - h12 * h21
    return float(np.real(tau) ** 2 - 4.0 * np.real(delta))


def pt_unbroken(
    h11: float, h22: float, h12: complex, h21: complex, tol: float = PT_TOLERANCE
) -> bool:
    """
    Critère de symétrie PT non brisée.

    Le discriminant trace/déterminant doit être positif pour une masse effective
    positive (h22 > 0) et négatif pour une masse effective négative, soit
    ((Re τ)² − 4 Re Δ)·h22 ≥ 0.
    Pour m = ω = 1 le critère vaut exactement αβ(1 − α − β) ≥ 0.

    Args:
        h11, h22 (float): Coefficients diagonaux de la forme bilinéaire.
        h12, h21 (complex): Coefficients hors diagonale.
        tol (float): Tolérance absolue admettant les points du bord.

    Returns:
        bool: True si le spectre est réel (régime PT non brisé).
    """
    if not all(np.isfinite(v) for v in (h11, h22, h12, h21)):
        raise InvalidArgumentError("Coefficients non finis.")
    weighted = pt_discriminant(h11, h22, h12, h21) * float(np.real(h22))
    return bool(weighted >= -tol)


def pt_region_scan(
    alpha_range: tuple[float, float],
    beta_range: tuple[float, float],
    n: int,
    mass: float = 1.0,
    omega: float = 1.0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Grille booléenne du régime PT non brisé dans le plan (α, β).

    Args:
        alpha_range (tuple): Intervalle (α_min, α_max).
        beta_range (tuple): Intervalle (β_min, β_max).
        n (int): Nombre de points par axe (≥ 2).
        mass (float): Masse de l'oscillateur sous-jacent.
        omega (float): Fréquence de l'oscillateur sous-jacent.

    Returns:
        tuple: (alphas, betas, grille) avec grille[i, j] pour (alphas[i], betas[j]).
    """
    if n < 2:
        raise InvalidArgumentError(f"La grille requiert n ≥ 2 (reçu {n}).")
    alphas = np.linspace(alpha_range[0], alpha_range[1], n)
    betas = np.linspace(beta_range[0], beta_range[1], n)
    grid = np.empty((n, n), dtype=bool)
    for i, a in enumerate(alphas):
        for j, b in enumerate(betas):
            grid[i, j] = pt_unbroken(*hamiltonian_entries(mass, omega, a, b))
    logger.info(
        f"Région PT évaluée sur {n}×{n} points : {int(grid.sum())} points non brisés."
    )
    return alphas, betas, grid


def modulated_spec(
    m0: float, omega0: float, eps: float, f: ParameterSignal
) -> AmplifierSpec:
    """
    Amplificateur issu de la modulation m(t) = m0(1+εf), ω(t) = ω0(1+εf/2).

    Les couplages α(t) = β(t) = ω0·εf(t)/2 réalisent l'Hamiltonien modulé à
    l'ordre ε ; la spécification obtenue est hermitienne (ν₋ ≡ 0).
    """
    if abs(eps) > MODULATION_WARNING_THRESHOLD:
        logger.warning(
            f"Amplitude de modulation ε={eps} élevée : le développement au premier ordre n'est plus fiable."
        )
    coupling = affine(f, 0.0, omega0 * eps / 2.0)
    return AmplifierSpec(
        omega=affine(f, omega0, omega0 * eps / 2.0),
        alpha=coupling,
        beta=coupling,
        mass=affine(f, m0, m0 * eps),
    )


def as_callable(signal) -> Callable:
    """Accepte un ParameterSignal, un nombre ou une fonction du temps."""
    if isinstance(signal, ParameterSignal) or callable(signal):
        return signal
    return constant(float(signal))
