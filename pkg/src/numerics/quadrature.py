"""
Quadrature adaptative et polynômes d'Hermite.

Fonctions principales :

* `quad()`: intégrale d'une fonction scalaire (réelle ou complexe) par
  Gauss-Kronrod adaptatif, avec troncature des bornes infinies là où
  l'enveloppe de l'intégrande passe sous 1e-14.
* `quad_vector()`: même chose pour une intégrande vectorielle (une intégrale
  par composante, subdivision commune).
* `hermite()`: polynômes d'Hermite "physiciens" par récurrence à trois termes.
"""

import logging
import warnings
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from src.exceptions import AccuracyError, InvalidArgumentError

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

TAIL_THRESHOLD = 1e-14
DEFAULT_LIMIT = 200
_GROWTH = 1.5
_MAX_REACH = 1e6
VECTOR_ERROR_SLACK = 10.0


def _tail_cut(
    envelope: Callable[[float], float], start: float, direction: float
) -> float:
    """
    Point au-delà duquel l'enveloppe reste sous le seuil.

    L'enveloppe est échantillonnée géométriquement à partir de `start` ; le point
    de coupure est l'échantillon qui suit le dernier échantillon au-dessus du seuil.
    """
    offsets = [0.0]
    step = 0.25
    while step < _MAX_REACH:
        offsets.append(step)
        step *= _GROWTH
    offsets.append(_MAX_REACH)

    last_above = 0
    for i, off in enumerate(offsets):
        value = abs(envelope(start + direction * off))
        if not np.isfinite(value) or value >= TAIL_THRESHOLD:
            last_above = i
    if last_above == len(offsets) - 1:
        raise AccuracyError(
            "L'intégrande ne décroît pas sous le seuil de troncature avant "
            f"|x| = {_MAX_REACH:g}."
        )
    return start + direction * offsets[last_above + 1]


def _finite_bounds(
    f: Callable, a: float, b: float, envelope: Optional[Callable], center: float
) -> tuple[float, float]:
    env = envelope if envelope is not None else (lambda x: np.max(np.abs(f(x))))
    start = float(np.clip(center, a, b))
    lo = a if np.isfinite(a) else _tail_cut(env, start, -1.0)
    hi = b if np.isfinite(b) else _tail_cut(env, start, +1.0)
    return lo, hi


def quad(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float = 1e-10,
    envelope: Optional[Callable[[float], float]] = None,
    center: float = 0.0,
    limit: int = DEFAULT_LIMIT,
):
    """
    Intègre `f` sur [a, b] avec une erreur absolue ≤ tol.

    Args:
        f (Callable): Intégrande scalaire, réelle ou complexe.
        a (float): Borne inférieure (peut valoir -inf).
        b (float): Borne supérieure (peut valoir +inf), a < b.
        tol (float): Erreur absolue visée.
        envelope (Callable, optional): Majorant de |f| utilisé pour tronquer
            les bornes infinies ; par défaut |f| lui-même.
        center (float): Point de départ de l'échantillonnage des queues.
        limit (int): Nombre maximal de sous-intervalles.

    Returns:
        float | complex: L'estimation de l'intégrale.

    Raises:
        InvalidArgumentError: Si a ≥ b ou tol ≤ 0.
        AccuracyError: Si la subdivision ne converge pas ; la meilleure
            estimation est jointe à l'exception.
    """
    if not a < b:
        raise InvalidArgumentError(f"Bornes d'intégration invalides : [{a}, {b}]")
    if tol <= 0:
        raise InvalidArgumentError(f"La tolérance doit être positive (reçu {tol}).")

    lo, hi = _finite_bounds(f, a, b, envelope, center)
    is_complex = np.iscomplexobj(f(0.5 * (lo + hi)))

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, error = integrate.quad(
            f, lo, hi, epsabs=tol, epsrel=0.0, limit=limit, complex_func=is_complex
        )
    error = abs(error)
    flagged = [w for w in caught if issubclass(w.category, integrate.IntegrationWarning)]
    if flagged and error > tol:
        logger.error(
            f"Quadrature non convergée sur [{lo:.6g}, {hi:.6g}] : erreur estimée {error:.3e} > {tol:.1e}"
        )
        raise AccuracyError(
            f"Quadrature non convergée (erreur estimée {error:.3e}, tolérance {tol:.1e}).",
            best_estimate=value,
        )
    return value


def quad_vector(
    f: Callable[[float], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
    limit: int = DEFAULT_LIMIT,
) -> np.ndarray:
    """
    Intègre une fonction vectorielle (éventuellement complexe) sur [a, b] fini.

    Les parties réelle et imaginaire sont empilées pour `scipy.integrate.quad_vec`.

    Raises:
        InvalidArgumentError: Si les bornes ne sont pas finies et ordonnées.
        AccuracyError: Si l'erreur estimée dépasse VECTOR_ERROR_SLACK × tol.
            `quad_vec` ne signale pas l'arrêt sur la limite de subdivision ;
            l'estimation d'erreur inclut un terme d'arrondi proportionnel au
            nombre d'intervalles, d'où la marge.
    """
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise InvalidArgumentError(f"Bornes finies et ordonnées attendues : [{a}, {b}]")

    def stacked(x):
        v = np.asarray(f(x))
        return np.concatenate([v.real, v.imag])

    value, error = integrate.quad_vec(
        stacked, a, b, epsabs=tol, epsrel=0.0, norm="max", limit=limit
    )
    if error > VECTOR_ERROR_SLACK * tol:
        n = value.size // 2
        best = value[:n] + 1j * value[n:]
        raise AccuracyError(
            f"Quadrature vectorielle non convergée (erreur estimée {error:.3e}).",
            best_estimate=best,
        )
    n = value.size // 2
    return value[:n] + 1j * value[n:]


def hermite(n: int, x):
    """
    Polynôme d'Hermite Hₙ(x) par H_{k+1} = 2xH_k − 2kH_{k−1}.

    Accepte des scalaires ou des tableaux, réels ou complexes. En cas de
    dépassement de capacité la valeur est infinie (à la charge de l'appelant).
    """
    if n < 0:
        raise InvalidArgumentError(f"Degré négatif : {n}")
    x = np.asarray(x)
    h_prev = np.ones_like(x, dtype=np.result_type(x, float))
    h = h_prev if n == 0 else 2.0 * x
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, n):
            h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    h = np.asarray(h)
    return h[()] if h.ndim == 0 else h
