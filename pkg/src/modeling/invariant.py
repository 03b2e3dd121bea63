"""
Invariant de Lewis-Riesenfeld : forme quadratique, diagonalisation symplectique
et opérateurs d'échelle.

Les opérateurs sont représentés par leurs coefficients sur (x̂, p̂) : aucune
troncature d'espace de Fock.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.exceptions import DiagonalizationError, InvalidArgumentError
from src.modeling.ep_solver import GCoefficients

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class QuadForm2:
    """Ĥ_I = [[g₂, g₃], [g₃, g₁]] sur X = (x̂, p̂)."""

    g1: float
    g2: float
    g3: float

    def __post_init__(self):
        if self.g1 <= 0.0 or self.determinant <= 0.0:
            raise InvalidArgumentError(
                f"Forme quadratique non définie positive : g=({self.g1}, {self.g2}, {self.g3})"
            )

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.g2, self.g3], [self.g3, self.g1]], dtype=float)

    @property
    def determinant(self) -> float:
        return self.g1 * self.g2 - self.g3**2

    @classmethod
    def from_g(cls, g: GCoefficients) -> "QuadForm2":
        return cls(float(g.g1), float(g.g2), float(g.g3))


@dataclass(frozen=True)
class LadderCoeffs:
    """
    â₋ = u11·x̂ + u12·p̂ et â₊ = u11*·x̂ + u12*·p̂.

    Attributes:
        u11 (complex): Coefficient de x̂.
        u12 (complex): Coefficient de p̂.
        eta0 (float): Constante d'Ermakov.
    """

    u11: complex
    u12: complex
    eta0: float = 1.0

    @property
    def commutator(self) -> float:
        """[â₋, â₊] = i(u11·u12* − u11*·u12), égal à 1."""
        value = 1j * (self.u11 * np.conj(self.u12) - np.conj(self.u11) * self.u12)
        return float(value.real)

    @property
    def forward(self) -> np.ndarray:
        """Lignes (â₋, â₊) exprimées sur (x̂, p̂)."""
        return np.array(
            [[self.u11, self.u12], [np.conj(self.u11), np.conj(self.u12)]], dtype=complex
        )

    @property
    def inverse(self) -> np.ndarray:
        """
        Lignes (x̂, p̂) exprimées sur (â₋, â₊).

        x̂ = i(u12*·â₋ − u12·â₊), p̂ = i(u11·â₊ − u11*·â₋).
        """
        u11, u12 = self.u11, self.u12
        return np.array(
            [[1j * np.conj(u12), -1j * u12], [-1j * np.conj(u11), 1j * u11]], dtype=complex
        )


@dataclass(frozen=True)
class SymplecticPair:
    Q: np.ndarray
    Qinv: np.ndarray
    LambdaD: np.ndarray


def lambda_matrix(q: QuadForm2) -> np.ndarray:
    """
    Λ = iσ_y·Ĥ_I = [[g₃, g₁], [−g₂, −g₃]].

    Le polynôme caractéristique est λ² + (g₁g₂ − g₃²) : valeurs propres ±iη₀.
    """
    return 1j * SIGMA_Y @ q.matrix.astype(complex)


def ladder_coeffs(g: GCoefficients) -> LadderCoeffs:
    """
    u₋ = (g₃ − iη₀, g₁)/√(2η₀g₁).

    Args:
        g (GCoefficients): Coefficients scalaires de l'invariant.

    Returns:
        LadderCoeffs: Coefficients de l'opérateur d'annihilation.
    """
    g1, g3, eta0 = float(g.g1), float(g.g3), float(g.eta0)
    norm = np.sqrt(2.0 * eta0 * g1)
    return LadderCoeffs(u11=complex(g3 - 1j * eta0) / norm, u12=complex(g1) / norm, eta0=eta0)


def symplectic_diag(g: GCoefficients) -> SymplecticPair:
    """
    Diagonalise Λ par Q = (v₋, v₊), v₋ = −σ_y·u₋†, v₊ = v₋*.

    Returns:
        SymplecticPair: Q, Q⁻¹ = (u₋ ; u₋*) et Λ_D = diag(−iη₀, iη₀).

    Raises:
        DiagonalizationError: Si u₋·v₋ s'écarte de 1 de plus de 1e-10.
    """
    coeffs = ladder_coeffs(g)
    u_minus = np.array([coeffs.u11, coeffs.u12], dtype=complex)
    v_minus = -SIGMA_Y @ np.conj(u_minus)
    v_plus = np.conj(v_minus)

    normalization = complex(u_minus @ v_minus)
    if not abs(normalization - 1.0) <= NORMALIZATION_TOL:
        logger.error(f"Normalisation u₋v₋ = {normalization} ≠ 1 pour g={g}")
        raise DiagonalizationError(
            f"Normalisation biorthogonale violée : u₋v₋ = {normalization:.12g}",
            best_estimate=normalization,
        )

    Q = np.column_stack([v_minus, v_plus])
    Qinv = np.vstack([u_minus, np.conj(u_minus)])
    LambdaD = np.diag([-1j * coeffs.eta0, 1j * coeffs.eta0])
    return SymplecticPair(Q=Q, Qinv=Qinv, LambdaD=LambdaD)


def invariant_eigenvalue(n: int, eta0: float = 1.0) -> float:
    """εₙ = 2η₀(n + 1/2)."""
    if n < 0:
        raise InvalidArgumentError(f"Niveau négatif : {n}")
    return 2.0 * eta0 * (n + 0.5)


def invariant_reconstruction_check(g: GCoefficients) -> float:
    """
    Écart entre Î = 2η₀(â₊â₋ + 1/2) développé sur (x̂, p̂) et (g₂, g₁, g₃).

    â₊â₋ = |u11|²x̂² + |u12|²p̂² + Re(u11*u12){x̂, p̂} − Im(u11*u12) ; le terme
    constant doit compenser le 1/2 (Î n'a pas de terme constant).
    """
    c = ladder_coeffs(g)
    eta0 = c.eta0
    cross = np.conj(c.u11) * c.u12
    rebuilt_x2 = 2.0 * eta0 * abs(c.u11) ** 2
    rebuilt_p2 = 2.0 * eta0 * abs(c.u12) ** 2
    rebuilt_sym = 2.0 * eta0 * cross.real
    constant = 2.0 * eta0 * (0.5 - cross.imag)
    deviations = (
        abs(rebuilt_x2 - float(g.g2)),
        abs(rebuilt_p2 - float(g.g1)),
        abs(rebuilt_sym - float(g.g3)),
        abs(constant),
    )
    return float(max(deviations))
