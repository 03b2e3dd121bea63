"""
Hiérarchie des exceptions du projet.

Chaque famille correspond à un code de sortie de la ligne de commande :

* `ConfigError` : configuration invalide (code 2).
* `DomainError` et ses sous-classes : paramètres hors du domaine physique ou
  numérique (PT brisée, singularité, masse dégénérée...) (code 3).
* `AccuracyError` et ses sous-classes : une tolérance numérique n'a pas pu être
  atteinte (code 4).
"""

from typing import Any, Optional


class AmplifierError(Exception):
    """Classe de base de toutes les erreurs du projet."""

    exit_code = 1


class ConfigError(AmplifierError):
    """Configuration JSON absente, illisible ou invalide."""

    exit_code = 2


class DomainError(AmplifierError, ValueError):
    """Entrée hors du domaine de validité d'une opération."""

    exit_code = 3


class InvalidArgumentError(DomainError):
    pass


class BracketError(DomainError):
    """Aucun changement de signe sur l'intervalle fourni à la recherche de racine."""


class DegenerateMassError(DomainError):
    pass


class NoMetricError(DomainError):
    """
    Aucune racine admissible de la contrainte transcendante sur κ₀.

    Attributes:
        report (dict): Résumé du balayage (bornes, nombre de points, signes observés).
    """

    def __init__(self, message: str, report: Optional[dict] = None):
        super().__init__(message)
        self.report = report or {}


class BrokenPTError(DomainError):
    pass


class SingularityError(DomainError):
    """
    L'intégration s'est arrêtée avant la fin de l'intervalle demandé.

    Attributes:
        reached_time (float): Dernier instant atteint par l'intégrateur.
    """

    def __init__(self, message: str, reached_time: Optional[float] = None):
        super().__init__(message)
        self.reached_time = reached_time


class CoefficientSingularityError(SingularityError):
    pass


class BarrierViolationError(SingularityError):
    pass


class InvalidConstantError(DomainError):
    pass


class NonNormalizableError(DomainError):
    pass


class ParameterDomainError(DomainError):
    pass


class AccuracyError(AmplifierError):
    """
    Précision demandée non atteinte.

    Attributes:
        best_estimate: Meilleure estimation disponible au moment de l'échec.
    """

    exit_code = 4

    def __init__(self, message: str, best_estimate: Any = None):
        super().__init__(message)
        self.best_estimate = best_estimate


class ConvergenceError(AccuracyError):
    pass


class HermitizationError(AccuracyError):
    """Résidu d'hermiticité |α₀ − β₀*| supérieur à la tolérance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message, best_estimate=residual)
        self.residual = residual


class DiagonalizationError(AccuracyError):
    pass
