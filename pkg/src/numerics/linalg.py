"""
Exponentielle de petites matrices (3×3 pour la métrique).

La méthode est un "scaling and squaring" avec une série de Taylor tronquée :
la matrice est divisée par 2^s jusqu'à ce que sa norme 1 soit ≤ 0.5, la série
est sommée jusqu'à ce que le terme courant soit inférieur à 1e-18, puis le
résultat est élevé au carré s fois.
"""

import logging
import math

import numpy as np

from src.exceptions import InvalidArgumentError

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)

SCALING_THRESHOLD = 0.5
SERIES_CUTOFF = 1e-18
MAX_SERIES_TERMS = 60


def mat_exp(a: np.ndarray) -> np.ndarray:
    """
    Calcule e^A par scaling-and-squaring.

    Args:
        a (np.ndarray): Matrice carrée réelle ou complexe à entrées finies.

    Returns:
        np.ndarray: e^A, de même type (réel ou complexe) que l'entrée.

    Raises:
        InvalidArgumentError: Si la matrice n'est pas carrée ou contient des
            valeurs non finies.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"Matrice carrée attendue, forme reçue : {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError("La matrice contient des valeurs non finies.")

    dtype = np.complex128 if np.iscomplexobj(a) else np.float64
    a = a.astype(dtype)
    norm = np.linalg.norm(a, 1)

    squarings = 0
    if norm > SCALING_THRESHOLD:
        squarings = int(math.ceil(math.log2(norm / SCALING_THRESHOLD)))
    scaled = a / (2.0**squarings)

    identity = np.eye(a.shape[0], dtype=dtype)
    result = identity.copy()
    term = identity.copy()
    for k in range(1, MAX_SERIES_TERMS + 1):
        term = term @ scaled / k
        result = result + term
        if np.linalg.norm(term, 1) < SERIES_CUTOFF:
            break

    for _ in range(squarings):
        result = result @ result

    logger.debug(
        f"mat_exp : norme={norm:.3e}, élévations au carré={squarings}, termes={k}"
    )
    return result
