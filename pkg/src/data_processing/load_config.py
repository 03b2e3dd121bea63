"""
Chargement et validation du document de configuration `RunConfig`.

Toute erreur de lecture, de syntaxe JSON ou de validation est convertie en
`ConfigError` (code de sortie 2 de la CLI) avant qu'un calcul ne démarre.
"""

import json
import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from src.amplifier.signals import AmplifierSpec
from src.api.schemas import RunConfig
from src.exceptions import ConfigError, DomainError

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


def load_run_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """
    Lit un fichier JSON et le valide.

    Args:
        path (str | Path, optional): Chemin du fichier ; sans chemin, la
            configuration par défaut (paramètres des figures) est renvoyée.

    Returns:
        RunConfig: Configuration validée.

    Raises:
        ConfigError: Fichier absent, JSON invalide ou schéma non respecté.
    """
    if path is None:
        logger.info("Aucun fichier de configuration : valeurs par défaut utilisées.")
        return RunConfig()

    path = Path(path)
    try:
        logger.info(f"Chargement de la configuration depuis {path}...")
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        logger.error(f"Fichier de configuration non trouvé : {path}")
        raise ConfigError(f"Fichier de configuration non trouvé : {path}") from e
    except json.JSONDecodeError as e:
        logger.error(f"JSON invalide dans {path} : {e}")
        raise ConfigError(f"JSON invalide dans {path} (ligne {e.lineno}) : {e.msg}") from e
    return parse_run_config(raw)


def parse_run_config(raw: dict) -> RunConfig:
    """Valide un dictionnaire déjà décodé."""
    try:
        cfg = RunConfig.model_validate(raw)
    except ValidationError as e:
        logger.error(f"Configuration invalide : {e.error_count()} erreur(s)")
        raise ConfigError(f"Configuration invalide :\n{e}") from e
    logger.info("Configuration validée avec succès.")
    return cfg


def build_amplifier_spec(cfg: RunConfig) -> AmplifierSpec:
    """Construit l'`AmplifierSpec` à partir de la section `amplifier`."""
    try:
        return AmplifierSpec.from_descriptors(cfg.amplifier.descriptors())
    except DomainError as e:
        raise ConfigError(f"Descripteur de signal invalide : {e}") from e
