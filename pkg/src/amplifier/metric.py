"""
Opérateur métrique ρ̂ = exp(Γ̂) et oscillateur hermitien associé.

La transformation de similarité agit sur le triplet de coefficients
(ω, α, β) par la matrice k̂ = e^K̂ avec

    K̂ = [[0, −4κ, 4κ], [2κ, −2κ₀, 0], [−2κ, 0, 2κ₀]],

dont les valeurs propres sont 0 et ±2θ, θ = √(κ₀² − 4κ²). La réalité du
coefficient d'amplification hermitisé impose la contrainte transcendante

    tanh(2θ)/θ = (β − α) / (2ωκ − (α + β)κ₀),

résolue en κ₀ pour un κ libre. L'oscillateur hermitien obtenu a pour masse
M₀ = mω/(ω₀ − 2α₀) et pour fréquence Ω₀² = ω₀² − 4α₀².
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from src.amplifier.signals import AmplifierSpec, hamiltonian_entries, pt_discriminant, pt_unbroken
from src.exceptions import (
    BracketError,
    BrokenPTError,
    DegenerateMassError,
    HermitizationError,
    InvalidArgumentError,
    NoMetricError,
)
from src.numerics.solvers import find_root

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

THETA_SERIES_THRESHOLD = 1e-4
SCAN_POINTS = 2000
HERMITIAN_TOL = 1e-15
BRANCH_JUMP_RTOL = 1e-3


@dataclass(frozen=True)
class MetricParams:
    """
    Paramètres (κ, κ₀, θ) de Γ̂.

    La métrique identité (Γ̂ = 0) est représentée par κ = κ₀ = θ = 0.
    """

    kappa: float
    kappa0: float
    theta: float

    def __post_init__(self):
        if self.is_identity:
            return
        if self.kappa0**2 <= 4.0 * self.kappa**2:
            raise InvalidArgumentError(
                f"κ₀² > 4κ² requis (κ={self.kappa}, κ₀={self.kappa0})."
            )
        expected = np.sqrt(self.kappa0**2 - 4.0 * self.kappa**2)
        if not np.isclose(self.theta, expected, rtol=1e-12, atol=0.0):
            raise InvalidArgumentError(f"θ incohérent : {self.theta} au lieu de {expected}")

    @property
    def is_identity(self) -> bool:
        return self.kappa == 0.0 and self.kappa0 == 0.0 and self.theta == 0.0

    @classmethod
    def from_kappas(cls, kappa: float, kappa0: float) -> "MetricParams":
        if kappa0**2 <= 4.0 * kappa**2:
            raise InvalidArgumentError(f"κ₀² > 4κ² requis (κ={kappa}, κ₀={kappa0}).")
        return cls(kappa, kappa0, float(np.sqrt(kappa0**2 - 4.0 * kappa**2)))

    @classmethod
    def identity(cls) -> "MetricParams":
        return cls(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class HermitizedCoeffs:
    """
    Coefficients de Ĥ_ρ = ω₀(â†â + 1/2) + α₀â² + β₀â†².

    `omega0` et `alpha0` viennent des formes réduites ; `omega0_matrix`,
    `alpha0_matrix` et `beta0` viennent du produit k̂·(ω, α, β)ᵀ.
    """

    omega0: float
    alpha0: float
    beta0: float
    omega0_matrix: float
    alpha0_matrix: float
    residual: float


@dataclass(frozen=True)
class HermitianOscillator:
    M0: float
    Omega0_sq: float
    inverted: bool = field(default=False)


def k_matrix(p: MetricParams) -> np.ndarray:
    """Matrice génératrice K̂ (réelle pour κ réel)."""
    k, k0 = p.kappa, p.kappa0
    return np.array(
        [
            [0.0, -4.0 * k, 4.0 * k],
            [2.0 * k, -2.0 * k0, 0.0],
            [-2.0 * k, 0.0, 2.0 * k0],
        ]
    )


def _series_coefficients(theta: float) -> tuple[float, float]:
    """sinh(2θ)/(2θ) et (cosh(2θ) − 1)/(4θ²) au quatrième ordre en θ."""
    z2 = (2.0 * theta) ** 2
    s1 = 1.0 + z2 / 6.0 + z2**2 / 120.0
    s2 = 0.5 + z2 / 24.0 + z2**2 / 720.0
    return s1, s2


def k_matrix_closed(p: MetricParams) -> np.ndarray:
    """
    Matrice k̂ = e^K̂ par ses neuf éléments en forme close.

    Sous θ < 1e-4 la singularité apparente en 1/θ² est levée par
    k̂ = I + s₁K̂ + s₂K̂², avec s₁, s₂ développés en série.

    Args:
        p (MetricParams): Paramètres de la métrique.

    Returns:
        np.ndarray: Matrice 3×3 réelle.
    """
    theta = p.theta
    if theta < THETA_SERIES_THRESHOLD:
        s1, s2 = _series_coefficients(theta)
        kk = k_matrix(p)
        return np.eye(3) + s1 * kk + s2 * (kk @ kk)

    k, k0 = p.kappa, p.kappa0
    c = np.cosh(2.0 * theta)
    s = np.sinh(2.0 * theta)
    t2 = theta**2
    ts = theta * s
    return np.array(
        [
            [
                (k0**2 - 4.0 * k**2 * c) / t2,
                -2.0 * k * (k0 - k0 * c + ts) / t2,
                -2.0 * k * (k0 - k0 * c - ts) / t2,
            ],
            [
                k * (k0 - k0 * c + ts) / t2,
                (-2.0 * k**2 + (k0**2 - 2.0 * k**2) * c - k0 * ts) / t2,
                2.0 * k**2 * (c - 1.0) / t2,
            ],
            [
                k * (k0 - k0 * c - ts) / t2,
                2.0 * k**2 * (c - 1.0) / t2,
                (-2.0 * k**2 + (k0**2 - 2.0 * k**2) * c + k0 * ts) / t2,
            ],
        ]
    )


def _tanh_ratio(theta):
    """tanh(2θ)/θ, prolongé par continuité en θ = 0."""
    theta = np.asarray(theta, dtype=float)
    small = theta < THETA_SERIES_THRESHOLD
    safe = np.where(small, 1.0, theta)
    value = np.where(small, 2.0 - 8.0 * theta**2 / 3.0, np.tanh(2.0 * safe) / safe)
    return value[()] if value.ndim == 0 else value


@dataclass(frozen=True)
class Kappa0Constraint:
    """
    F(κ₀) = tanh(2θ)/θ − (β − α)/(2ωκ − (α + β)κ₀) à (ω, α, β) fixés.

    Le pôle κ₀ = 2ωκ/(α + β) est exclu : F y vaut NaN.
    """

    omega: float
    alpha: float
    beta: float
    kappa: float

    @property
    def pole(self) -> Optional[float]:
        nu_plus = self.alpha + self.beta
        if nu_plus == 0.0:
            return None
        return 2.0 * self.omega * self.kappa / nu_plus

    @property
    def lower_bound(self) -> float:
        return 2.0 * abs(self.kappa)

    def __call__(self, kappa0):
        kappa0 = np.asarray(kappa0, dtype=float)
        theta = np.sqrt(np.maximum(kappa0**2 - 4.0 * self.kappa**2, 0.0))
        denominator = 2.0 * self.omega * self.kappa - (self.alpha + self.beta) * kappa0
        with np.errstate(divide="ignore", invalid="ignore"):
            rhs = np.where(
                denominator == 0.0, np.nan, (self.beta - self.alpha) / denominator
            )
        value = _tanh_ratio(theta) - rhs
        return value[()] if np.ndim(value) == 0 else value


def kappa0_constraint(spec: AmplifierSpec, kappa: float, t: float) -> Kappa0Constraint:
    """Contrainte transcendante en κ₀ aux paramètres de l'instant t."""
    omega, alpha, beta, _ = spec.sample(t)
    return Kappa0Constraint(omega=omega, alpha=alpha, beta=beta, kappa=kappa)


def _scan_brackets(constraint: Kappa0Constraint) -> tuple[list, dict]:
    """Encadrements de racines sur (2|κ|(1+1e-9), 100|κ|+100), pôle exclu."""
    lo = constraint.lower_bound * (1.0 + 1e-9)
    hi = 100.0 * abs(constraint.kappa) + 100.0
    offsets = np.geomspace(max(lo - constraint.lower_bound, 1e-12), hi - constraint.lower_bound, SCAN_POINTS)
    grid = constraint.lower_bound + offsets
    values = constraint(grid)
    pole = constraint.pole

    brackets = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
        if not (np.isfinite(fa) and np.isfinite(fb)):
            continue
        if pole is not None and a <= pole <= b:
            continue
        if fa == 0.0 or np.sign(fa) != np.sign(fb):
            brackets.append((float(a), float(b)))

    finite = values[np.isfinite(values)]
    report = {
        "kappa0_min": float(grid[0]),
        "kappa0_max": float(grid[-1]),
        "points": SCAN_POINTS,
        "pole": pole,
        "positive": int(np.sum(finite > 0)),
        "negative": int(np.sum(finite < 0)),
        "brackets": len(brackets),
    }
    return brackets, report


def solve_metric(
    spec: AmplifierSpec,
    kappa: float,
    t: float,
    tol: float = 1e-12,
    previous: Optional[float] = None,
) -> MetricParams:
    """
    Résout la contrainte transcendante pour κ₀.

    La plus petite racine au-dessus de 2|κ| est retenue ; si `previous` est
    fourni, la racine la plus proche de cette valeur est retenue à la place.

    Args:
        spec (AmplifierSpec): Paramètres de l'amplificateur.
        kappa (float): Paramètre libre κ (réel).
        t (float): Instant d'évaluation.
        tol (float): Tolérance sur κ₀.
        previous (float, optional): Racine de l'instant précédent.

    Returns:
        MetricParams: La métrique, identité si α = β.

    Raises:
        InvalidArgumentError: Si κ = 0 alors que α ≠ β.
        NoMetricError: Si aucun encadrement n'est trouvé.
    """
    omega, alpha, beta, _ = spec.sample(t)
    if abs(alpha - beta) <= HERMITIAN_TOL * max(1.0, abs(alpha), abs(beta)):
        logger.info(f"α = β à t={t} : Hamiltonien déjà hermitien, métrique identité.")
        return MetricParams.identity()
    if kappa == 0.0:
        raise InvalidArgumentError("κ ≠ 0 est requis lorsque α ≠ β.")

    constraint = Kappa0Constraint(omega, alpha, beta, kappa)
    brackets, report = _scan_brackets(constraint)
    if not brackets:
        logger.error(
            f"Aucune racine pour κ₀ à t={t} (ω={omega}, α={alpha}, β={beta}, κ={kappa}) : {report}"
        )
        raise NoMetricError(
            "Aucune racine admissible de la contrainte sur κ₀ : symétrie PT "
            "possiblement brisée ou κ hors de la plage balayée.",
            report=report,
        )

    roots = []
    for a, b in brackets:
        try:
            roots.append(find_root(constraint, a, b, tol))
        except BracketError:
            continue
        if previous is None:
            break
    if not roots:
        raise NoMetricError("Encadrements trouvés mais aucune racine confirmée.", report=report)

    kappa0 = roots[0] if previous is None else min(roots, key=lambda r: abs(r - previous))
    logger.debug(f"κ₀ = {kappa0:.12g} à t={t} ({len(brackets)} encadrement(s)).")
    return MetricParams.from_kappas(kappa, kappa0)


def solve_metric_series(
    spec: AmplifierSpec, kappa: float, times: Sequence[float], tol: float = 1e-12
) -> tuple[list[MetricParams], list[float]]:
    """
    Résout la métrique point par point, avec démarrage à chaud.

    Returns:
        tuple: (métriques par instant, instants où la branche de κ₀ saute).
    """
    metrics, jumps = [], []
    previous = None
    for t in times:
        params = solve_metric(spec, kappa, t, tol, previous=previous)
        if (
            previous is not None
            and not params.is_identity
            and abs(params.kappa0 - previous) > BRANCH_JUMP_RTOL * max(1.0, abs(previous))
        ):
            logger.warning(
                f"Saut de branche de κ₀ à t={t} : {previous:.10g} -> {params.kappa0:.10g}"
            )
            jumps.append(float(t))
        previous = None if params.is_identity else params.kappa0
        metrics.append(params)
    return metrics, jumps


def hermitized_coeffs(
    spec: AmplifierSpec, p: MetricParams, t: float, tol: float = 1e-6
) -> HermitizedCoeffs:
    """
    Coefficients de l'Hamiltonien hermitisé Ĥ_ρ = ρ̂Ĥρ̂⁻¹.

    ω₀ et α₀ proviennent des formes réduites ; le produit k̂·(ω, α, β)ᵀ fournit
    β₀ et le résidu d'hermiticité |α₀ − β₀*|.

    Raises:
        HermitizationError: Si le résidu dépasse `tol`.
    """
    omega, alpha, beta, _ = spec.sample(t)
    if p.is_identity:
        return HermitizedCoeffs(omega, alpha, beta, omega, alpha, abs(alpha - beta))

    k, k0, theta = p.kappa, p.kappa0, p.theta
    product = k_matrix_closed(p) @ np.array([omega, alpha, beta])

    if theta < THETA_SERIES_THRESHOLD:
        omega0, alpha0 = float(product[0]), float(product[1])
    else:
        c = np.cosh(2.0 * theta)
        ts = theta * np.tanh(2.0 * theta)
        t2 = theta**2
        omega0 = (
            k0 * (omega * k0 - 2.0 * k * (alpha + beta))
            + 2.0 * k * (k0 * (alpha + beta) + (beta - alpha) * ts - 2.0 * omega * k) * c
        ) / t2
        alpha0 = (
            k * (omega * k0 - 2.0 * k * (alpha + beta))
            + c * ((omega * k - alpha * k0) * (ts - k0) + 2.0 * k**2 * (beta - alpha))
        ) / t2

    residual = abs(alpha0 - np.conj(product[2]))
    if residual > tol:
        logger.error(
            f"Échec de l'hermitisation à t={t} : |α₀ − β₀*| = {residual:.3e} > {tol:.1e}"
        )
        raise HermitizationError(
            f"Résidu d'hermiticité {residual:.3e} supérieur à la tolérance {tol:.1e}.",
            residual=float(residual),
        )
    return HermitizedCoeffs(
        omega0=float(omega0),
        alpha0=float(alpha0),
        beta0=float(product[2]),
        omega0_matrix=float(product[0]),
        alpha0_matrix=float(product[1]),
        residual=float(residual),
    )


def hermitian_oscillator(
    c: HermitizedCoeffs, spec: AmplifierSpec, t: float
) -> HermitianOscillator:
    """
    Masse et fréquence effectives M₀ = mω/(ω₀ − 2α₀), Ω₀² = ω₀² − 4α₀².

    Raises:
        DegenerateMassError: Si ω₀ = 2α₀.
    """
    omega, _, _, mass = spec.sample(t)
    denominator = c.omega0 - 2.0 * c.alpha0
    if abs(denominator) <= 1e-14 * max(1.0, abs(c.omega0)):
        raise DegenerateMassError(f"Masse effective infinie à t={t} : ω₀ = 2α₀ = {c.omega0}")
    omega0_sq = c.omega0**2 - 4.0 * c.alpha0**2
    if omega0_sq < 0.0:
        logger.warning(f"Oscillateur inversé à t={t} : Ω₀² = {omega0_sq:.6g} < 0")
    return HermitianOscillator(
        M0=mass * omega / denominator, Omega0_sq=omega0_sq, inverted=omega0_sq < 0.0
    )


def hermitian_oscillator_series(
    spec: AmplifierSpec, kappa: float, times: Sequence[float], tol: float = 1e-12,
    hermiticity_tol: float = 1e-6,
) -> tuple[np.ndarray, np.ndarray, list[float]]:
    """
    Échantillonne M₀(t) et Ω₀²(t) par résolution ponctuelle de la métrique.

    Returns:
        tuple: (M₀, Ω₀², instants de saut de branche).
    """
    metrics, jumps = solve_metric_series(spec, kappa, times, tol)
    m0_values, om2_values = [], []
    for t, params in zip(times, metrics):
        coeffs = hermitized_coeffs(spec, params, t, hermiticity_tol)
        osc = hermitian_oscillator(coeffs, spec, t)
        m0_values.append(osc.M0)
        om2_values.append(osc.Omega0_sq)
    return np.array(m0_values), np.array(om2_values), jumps


def metric_report(
    spec: AmplifierSpec,
    kappa: float,
    t: float = 0.0,
    tol: float = 1e-12,
    hermiticity_tol: float = 1e-6,
) -> dict:
    """
    Enchaîne contrôle PT, métrique, hermitisation et oscillateur effectif.

    Returns:
        dict: κ, κ₀, θ, ω₀, α₀, β₀, résidu, M₀, Ω₀², drapeaux inverted/identity.

    Raises:
        BrokenPTError: Si la symétrie PT est brisée à l'instant t.
    """
    omega, alpha, beta, mass = spec.sample(t)
    entries = hamiltonian_entries(mass, omega, alpha, beta)
    if not pt_unbroken(*entries):
        discriminant = pt_discriminant(*entries)
        logger.error(
            f"Symétrie PT brisée à t={t} : α={alpha}, β={beta}, discriminant={discriminant:.6g}"
        )
        raise BrokenPTError(
            f"Symétrie PT brisée à t={t} (α={alpha}, β={beta}) : discriminant "
            f"{discriminant:.6g}, hors de la région αβ(1 − α − β) ≥ 0 (m = ω = 1)."
        )

    params = solve_metric(spec, kappa, t, tol)
    coeffs = hermitized_coeffs(spec, params, t, hermiticity_tol)
    osc = hermitian_oscillator(coeffs, spec, t)
    report = {
        "kappa": params.kappa if not params.is_identity else float(kappa),
        "kappa0": params.kappa0,
        "theta": params.theta,
        "omega0": coeffs.omega0,
        "alpha0": coeffs.alpha0,
        "beta0": coeffs.beta0,
        "residual": coeffs.residual,
        "M0": osc.M0,
        "Omega0_sq": osc.Omega0_sq,
        "inverted": osc.inverted,
        "identity": params.is_identity,
    }
    logger.info(f"Métrique résolue à t={t} : κ₀={params.kappa0:.10g}, θ={params.theta:.10g}")
    return report
