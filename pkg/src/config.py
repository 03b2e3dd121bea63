# Dans src/config.py
import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent
DOCS_DIR = BASE_DIR / "docs"
OUTPUT_DIR = Path(os.getenv("PT_OUTPUT_DIR", str(BASE_DIR / "outputs")))

LOG_LEVEL = os.getenv("PT_LOG_LEVEL", "INFO").upper()
N_JOBS = int(os.getenv("PT_N_JOBS", "1"))

API_TITLE = "API de l'Amplificateur Paramétrique PT-Symétrique"
API_VERSION = "0.1.0"

# Tolérances numériques par défaut
ROOT_TOL = float(os.getenv("PT_ROOT_TOL", "1e-12"))
ODE_RTOL = float(os.getenv("PT_ODE_RTOL", "1e-10"))
ODE_ATOL = float(os.getenv("PT_ODE_ATOL", "1e-12"))
QUAD_TOL = float(os.getenv("PT_QUAD_TOL", "1e-10"))
HERMITICITY_TOL = float(os.getenv("PT_HERMITICITY_TOL", "1e-6"))
ORACLE_TOL = float(os.getenv("PT_ORACLE_TOL", "1e-6"))

# Format des flottants dans les CSV (17 chiffres significatifs, sortie déterministe)
CSV_FLOAT_FORMAT = "%.17g"

# Paramètres des figures de référence
DEFAULT_AMPLIFIER = {"omega": 1.0, "alpha": 0.1, "beta": 0.2, "mass": 1.0}
DEFAULT_KAPPA = 1.0
REFERENCE_KAPPA0 = 5.10208

DEFAULT_C1 = 4.0
DEFAULT_C2 = 4.0
DEFAULT_BRANCH = "1+"
DEFAULT_ETA0 = 1.0
TOY_T_START = 1.0
TOY_T_END = 10.0

DEFAULT_X0 = 5.0
DEFAULT_P0 = 5.0
WIGNER_TIMES = [0.1, 1.0, 2.0, 100.0, 1000.0]
WIGNER_GRID_SIZE = 101
ORACLE_GRID_SIZE = 41

PT_REGION_GRID_SIZE = 201
