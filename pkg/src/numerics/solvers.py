"""
Recherche de racine et intégration d'EDO.

Fonctions principales :

* `find_root()`: racine d'une fonction scalaire sur un intervalle encadrant
  (méthode de Brent, bissection accélérée par sécante).
* `integrate_ode()`: intégration adaptative Runge-Kutta 5(4) renvoyant une
  `Trajectory` interpolée par Hermite cubique sur les pas acceptés.

Ces noyaux n'ont aucune connaissance du domaine physique ; ils ajoutent aux
routines SciPy la sémantique d'erreur du projet.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from src.exceptions import (
    BracketError,
    ConvergenceError,
    InvalidArgumentError,
    SingularityError,
)

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

MAX_ROOT_ITERATIONS = 200


def find_root(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12
) -> float:
    """
    Trouve une racine de `f` encadrée par [lo, hi].

    Args:
        f (Callable): Fonction scalaire continue sur [lo, hi].
        lo (float): Borne inférieure.
        hi (float): Borne supérieure.
        tol (float): Largeur maximale de l'encadrement final.

    Returns:
        float: La racine x* (|f(x*)| de l'ordre de |f'(x*)|·tol).

    Raises:
        InvalidArgumentError: Si tol ≤ 0 ou si les bornes ne sont pas finies.
        BracketError: Si f(lo) et f(hi) sont de même signe.
        ConvergenceError: Si 200 itérations ne suffisent pas.
    """
    if tol <= 0:
        raise InvalidArgumentError(f"La tolérance doit être positive (reçu {tol}).")
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise InvalidArgumentError(f"Bornes non finies : [{lo}, {hi}]")
    if lo > hi:
        lo, hi = hi, lo

    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return float(lo)
    if f_hi == 0.0:
        return float(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketError(
            f"Pas de changement de signe sur [{lo}, {hi}] : f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )

    try:
        root, info = brentq(
            f, lo, hi, xtol=tol, maxiter=MAX_ROOT_ITERATIONS, full_output=True
        )
    except RuntimeError as e:
        logger.error(f"Brent n'a pas convergé sur [{lo}, {hi}] : {e}", exc_info=True)
        raise ConvergenceError(
            f"Recherche de racine non convergée après {MAX_ROOT_ITERATIONS} itérations."
        ) from e

    logger.debug(
        f"Racine trouvée : x={root:.15g} en {info.iterations} itérations ({info.flag})"
    )
    return float(root)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Solution d'EDO échantillonnée sur les pas acceptés, avec sortie dense.

    Attributes:
        t (np.ndarray): Grille strictement croissante.
        y (np.ndarray): États, forme (len(t), dim).
        dydt (np.ndarray): Dérivées aux nœuds, utilisées par l'interpolant.
        events (list): Instants des événements déclenchés (éventuellement vide).
    """

    t: np.ndarray
    y: np.ndarray
    dydt: np.ndarray
    events: list = field(default_factory=list)
    _spline: CubicHermiteSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.t.ndim != 1 or len(self.t) < 2:
            raise InvalidArgumentError("Une trajectoire requiert au moins deux instants.")
        if not np.all(np.diff(self.t) > 0):
            raise InvalidArgumentError("La grille temporelle doit être strictement croissante.")
        if self.y.shape != self.dydt.shape or self.y.shape[0] != len(self.t):
            raise InvalidArgumentError("Dimensions incohérentes entre t, y et dydt.")
        self.t.setflags(write=False)
        self.y.setflags(write=False)
        self.dydt.setflags(write=False)
        object.__setattr__(
            self, "_spline", CubicHermiteSpline(self.t, self.y, self.dydt, axis=0)
        )

    @property
    def dim(self) -> int:
        return self.y.shape[1]

    @property
    def t_start(self) -> float:
        return float(self.t[0])

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    def __call__(self, t):
        """Évalue l'interpolant (refuse l'extrapolation)."""
        t_arr = np.asarray(t, dtype=float)
        span = 1e-12 * max(1.0, abs(self.t_end))
        if np.any(t_arr < self.t_start - span) or np.any(t_arr > self.t_end + span):
            raise InvalidArgumentError(
                f"Instant hors de la trajectoire [{self.t_start}, {self.t_end}] : {t}"
            )
        return self._spline(np.clip(t_arr, self.t_start, self.t_end))

    def derivative(self, t):
        t_arr = np.clip(np.asarray(t, dtype=float), self.t_start, self.t_end)
        return self._spline(t_arr, 1)


def integrate_ode(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0: Sequence[float],
    t_span: tuple[float, float],
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    events: Optional[list] = None,
) -> Trajectory:
    """
    Intègre y' = rhs(t, y) par Runge-Kutta emboîté d'ordre 5(4) (Dormand-Prince).

    L'intégration peut être rétrograde (t_span décroissant) ; la trajectoire
    renvoyée est toujours indexée par des instants croissants.

    Args:
        rhs (Callable): Champ de vecteurs, fini le long de la solution.
        y0 (Sequence[float]): État initial à t_span[0].
        t_span (tuple[float, float]): Intervalle non dégénéré.
        rel_tol (float): Tolérance relative locale.
        abs_tol (float): Tolérance absolue locale.
        events (list, optional): Événements au sens de `solve_ivp`.

    Returns:
        Trajectory: Solution avec sortie dense Hermite cubique.

    Raises:
        InvalidArgumentError: Si l'intervalle est dégénéré.
        SingularityError: Si le pas s'effondre avant la fin (porte l'instant atteint).
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if t0 == t1 or not (np.isfinite(t0) and np.isfinite(t1)):
        raise InvalidArgumentError(f"Intervalle d'intégration dégénéré : {t_span}")

    sol = solve_ivp(
        rhs,
        (t0, t1),
        np.asarray(y0, dtype=float),
        method="RK45",
        rtol=rel_tol,
        atol=abs_tol,
        events=events,
    )
    if sol.status == -1:
        reached = float(sol.t[-1])
        logger.error(
            f"Échec de l'intégration à t={reached:.10g} : {sol.message}"
        )
        raise SingularityError(
            f"Intégration interrompue à t={reached:.10g} ({sol.message})",
            reached_time=reached,
        )

    t = np.asarray(sol.t, dtype=float)
    y = np.asarray(sol.y, dtype=float).T
    if t1 < t0:
        t, y = t[::-1].copy(), y[::-1].copy()
    dydt = np.array([rhs(ti, yi) for ti, yi in zip(t, y)], dtype=float)

    fired = []
    if sol.t_events is not None:
        fired = [float(te) for arr in sol.t_events for te in arr]

    logger.debug(
        f"integrate_ode : {len(t)} pas acceptés sur [{t0}, {t1}], statut={sol.status}"
    )
    return Trajectory(t=t, y=y, dydt=dydt, events=fired)
