"""
Module principal de l'API FastAPI de l'amplificateur paramétrique PT-symétrique.

Expose le contrôle de symétrie PT, la résolution de la métrique et le
diagnostic d'interférence de Wigner à l'origine pour le modèle jouet.
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, HTTPException, status

from src import config
from src.amplifier.metric import metric_report
from src.amplifier.signals import AmplifierSpec, hamiltonian_entries, pt_discriminant, pt_unbroken
from src.exceptions import AccuracyError, DomainError
from src.modeling.pipeline import TOY_DOMAIN, toy_pipeline
from src.modeling.wigner import CatSpec, origin_interference

from .schemas import (
    MetricSolveInput,
    MetricSolveOutput,
    PTCheckInput,
    PTCheckOutput,
    WignerOriginInput,
    WignerOriginOutput,
)

logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Journalise le démarrage et l'arrêt de l'application."""
    logger.info(f"Démarrage de l'application API : {config.API_TITLE} v{config.API_VERSION}")
    yield
    logger.info("Arrêt de l'application API.")


app = FastAPI(
    title=config.API_TITLE,
    version=config.API_VERSION,
    description="Calculs de l'amplificateur paramétrique PT-symétrique : région PT, métrique, Wigner.",
    lifespan=lifespan,
)


def _http_error(e: Exception, endpoint: str) -> HTTPException:
    """DomainError → 422, AccuracyError → 500."""
    if isinstance(e, DomainError):
        logger.warning(f"Entrée hors domaine sur {endpoint} : {e}")
        return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    if isinstance(e, AccuracyError):
        logger.error(f"Précision non atteinte sur {endpoint} : {e}")
        return HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))
    logger.error(f"Erreur inattendue dans l'endpoint {endpoint} : {e}", exc_info=True)
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail="Une erreur interne s'est produite lors du traitement de votre requête.",
    )


@app.get("/", tags=["Health Check"], summary="Vérification de l'état de l'API")
async def read_root():
    """Endpoint racine pour vérifier la disponibilité et la version de l'API."""
    return {
        "message": f"Bienvenue sur l'{config.API_TITLE} - v{config.API_VERSION}. Accédez à /docs pour la documentation interactive."
    }


@app.post("/pt-check", response_model=PTCheckOutput, tags=["PT"], summary="Régime PT non brisé ?")
async def pt_check(data: PTCheckInput):
    """Évalue le critère de symétrie PT pour des paramètres constants."""
    try:
        h11, h22, h12, h21 = hamiltonian_entries(data.mass, data.omega, data.alpha, data.beta)
        return PTCheckOutput(
            unbroken=pt_unbroken(h11, h22, h12, h21),
            discriminant=pt_discriminant(h11, h22, h12, h21),
            h11=h11,
            h22=h22,
        )
    except Exception as e:
        raise _http_error(e, "/pt-check")


@app.post(
    "/metric-solve", response_model=MetricSolveOutput, tags=["Métrique"], summary="Résoudre κ₀"
)
async def metric_solve(data: MetricSolveInput):
    """
    Résout la contrainte sur κ₀ et renvoie l'oscillateur hermitien effectif.

    Une symétrie PT brisée ou l'absence de racine renvoient 422.
    """
    try:
        spec = AmplifierSpec.from_descriptors(data.amplifier.descriptors())
        logger.info(f"Requête /metric-solve reçue : κ={data.kappa}, t={data.t}")
        return MetricSolveOutput(**metric_report(spec, data.kappa, data.t))
    except Exception as e:
        raise _http_error(e, "/metric-solve")


@app.post(
    "/wigner/origin",
    response_model=WignerOriginOutput,
    tags=["Wigner"],
    summary="W(0, 0) le long du modèle jouet",
)
async def wigner_origin(data: WignerOriginInput):
    """Interférence à l'origine de l'espace des phases pour chaque instant demandé."""
    try:
        span = (min(TOY_DOMAIN[0], min(data.times)), max(TOY_DOMAIN[1], max(data.times)))
        pipeline = toy_pipeline(data.c1, data.c2, data.branch, "smooth", span)
        cat = CatSpec(data.x0, data.p0)
        points = [
            {"t": t, "w00": origin_interference(complex(pipeline.mode(t)), cat, convention=data.convention)}
            for t in data.times
        ]
        logger.info(f"Requête /wigner/origin : {len(points)} instant(s) évalué(s)")
        return {"points": points}
    except Exception as e:
        raise _http_error(e, "/wigner/origin")
