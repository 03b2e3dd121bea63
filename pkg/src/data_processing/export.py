"""
Écriture déterministe des résultats au format CSV.

Tous les flottants sont écrits avec 17 chiffres significatifs : une même
configuration produit des fichiers identiques octet pour octet.
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from src import config
from src.modeling.wigner import WignerGrid

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


def _prepare(path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_frame(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    """
    Écrit un DataFrame sans index.

    Raises:
        OSError: Si le fichier ne peut pas être écrit (le chemin est journalisé).
    """
    path = _prepare(path)
    try:
        df.to_csv(path, index=False, float_format=config.CSV_FLOAT_FORMAT, lineterminator="\n")
    except OSError:
        logger.error(f"Impossible d'écrire {path}", exc_info=True)
        raise
    logger.info(f"{len(df)} lignes écrites dans {path}")
    return path


def pt_region_frame(alphas: np.ndarray, betas: np.ndarray, grid: np.ndarray) -> pd.DataFrame:
    """Colonnes alpha, beta, unbroken ; α en boucle externe."""
    a, b = np.meshgrid(alphas, betas, indexing="ij")
    return pd.DataFrame({"alpha": a.ravel(), "beta": b.ravel(), "unbroken": grid.ravel()})


def wigner_filename(t: float) -> str:
    return f"wigner_t{t:g}.csv"


def write_wigner_grid(grid: WignerGrid, path: Union[str, Path]) -> Path:
    """En-tête "# t=<t> nx=<nx> np=<np>" puis lignes x,p,W (x externe, p interne)."""
    path = _prepare(path)
    x, p = np.meshgrid(grid.x, grid.p, indexing="ij")
    frame = pd.DataFrame({"x": x.ravel(), "p": p.ravel(), "W": grid.W.ravel()})
    stamp = "nan" if grid.t is None else f"{grid.t:.17g}"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(f"# t={stamp} nx={len(grid.x)} np={len(grid.p)}\n")
            frame.to_csv(handle, index=False, float_format=config.CSV_FLOAT_FORMAT, lineterminator="\n")
    except OSError:
        logger.error(f"Impossible d'écrire la grille de Wigner {path}", exc_info=True)
        raise
    logger.info(f"Grille de Wigner écrite dans {path}")
    return path


def read_wigner_grid(path: Union[str, Path]) -> tuple[dict, pd.DataFrame]:
    """Relit un fichier de grille : (en-tête décodé, DataFrame x, p, W)."""
    path = Path(path)
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().lstrip("#").split()
    meta = dict(item.split("=", 1) for item in header)
    return (
        {"t": float(meta["t"]), "nx": int(meta["nx"]), "np": int(meta["np"])},
        pd.read_csv(path, comment="#"),
    )
