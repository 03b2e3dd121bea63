from fastapi.testclient import TestClient
from unittest.mock import patch

from src import config
from src.api.main import app
from src.exceptions import AccuracyError

# Initialiser le TestClient
client = TestClient(app)

REFERENCE_AMPLIFIER = {"omega": 1.0, "alpha": 0.1, "beta": 0.2, "mass": 1.0}


def test_read_root():
    """Teste l'endpoint racine /."""
    response = client.get("/")
    assert response.status_code == 200
    expected_message = f"Bienvenue sur l'{config.API_TITLE} - v{config.API_VERSION}. Accédez à /docs pour la documentation interactive."
    assert response.json() == {"message": expected_message}


def test_pt_check_unbroken():
    """α=0.1, β=0.2 : régime non brisé, discriminant 4αβ."""
    response = client.post("/pt-check", json={"alpha": 0.1, "beta": 0.2})
    assert response.status_code == 200
    body = response.json()
    assert body["unbroken"] is True
    assert abs(body["discriminant"] - 0.08) < 1e-12


def test_pt_check_broken():
    response = client.post("/pt-check", json={"alpha": -0.1, "beta": 0.2})
    assert response.status_code == 200
    assert response.json()["unbroken"] is False


def test_pt_check_missing_field():
    """Champ requis manquant : 422 de validation."""
    response = client.post("/pt-check", json={"alpha": 0.1})
    assert response.status_code == 422


def test_pt_check_unknown_field():
    response = client.post("/pt-check", json={"alpha": 0.1, "beta": 0.2, "gamma": 1.0})
    assert response.status_code == 422


def test_metric_solve_reference():
    """ω=1, α=0.1, β=0.2, κ=1 : κ₀ ≈ 5.10208."""
    response = client.post("/metric-solve", json={"amplifier": REFERENCE_AMPLIFIER, "kappa": 1.0})
    assert response.status_code == 200
    body = response.json()
    assert abs(body["kappa0"] - config.REFERENCE_KAPPA0) < 1e-4
    assert body["identity"] is False
    assert body["residual"] < 1e-6


def test_metric_solve_hermitian_case():
    amplifier = dict(REFERENCE_AMPLIFIER, alpha=0.2)
    response = client.post("/metric-solve", json={"amplifier": amplifier})
    assert response.status_code == 200
    assert response.json()["identity"] is True


def test_metric_solve_broken_pt_returns_422():
    """Symétrie PT brisée : DomainError traduite en 422."""
    amplifier = dict(REFERENCE_AMPLIFIER, alpha=-0.1)
    response = client.post("/metric-solve", json={"amplifier": amplifier})
    assert response.status_code == 422
    assert "PT" in response.json()["detail"]


def test_metric_solve_zero_kappa_returns_422():
    response = client.post("/metric-solve", json={"amplifier": REFERENCE_AMPLIFIER, "kappa": 0.0})
    assert response.status_code == 422


def test_wigner_origin_points():
    response = client.post("/wigner/origin", json={"times": [1.0, 2.0, 100.0]})
    assert response.status_code == 200
    points = response.json()["points"]
    assert [p["t"] for p in points] == [1.0, 2.0, 100.0]
    assert all(p["w00"] > 0.0 for p in points)


def test_wigner_origin_rejects_non_positive_time():
    response = client.post("/wigner/origin", json={"times": [0.0, 1.0]})
    assert response.status_code == 422


@patch("src.api.main.origin_interference", side_effect=AccuracyError("quadrature simulée"))
def test_wigner_origin_accuracy_error_returns_500(mock_origin):
    """AccuracyError : 500 avec le message de l'erreur."""
    response = client.post("/wigner/origin", json={"times": [1.0]})
    assert response.status_code == 500
    assert response.json() == {"detail": "quadrature simulée"}
    mock_origin.assert_called_once()


@patch("src.api.main.origin_interference", side_effect=RuntimeError("boom"))
def test_wigner_origin_unexpected_error_returns_500(mock_origin):
    response = client.post("/wigner/origin", json={"times": [1.0]})
    assert response.status_code == 500
    assert response.json() == {
        "detail": "Une erreur interne s'est produite lors du traitement de votre requête."
    }
