import pytest
from fastapi.testclient import TestClient

import main
from schur_stability.config import get_settings

QUINTIC = ["1", "1/2", "0", "0", "-1/2", "-1/2"]


@pytest.fixture
def client():
    with TestClient(main.app) as test_client:
        yield test_client


def test_root_and_health(client):
    assert client.get("/").json()["status"] == "healthy"
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["settings"]["max_stages"] == 64


def test_health_reports_bad_configuration(client, monkeypatch):
    monkeypatch.setenv("SCHUR_WORKERS", "0")
    get_settings.cache_clear()
    response = client.get("/health")
    assert response.status_code == 503
    assert response.json()["status"] == "unhealthy"


def test_check(client):
    response = client.post("/stability/check", json={"coefficients": QUINTIC})
    assert response.status_code == 200
    body = response.json()
    assert body["verdict"] == "Certified"
    assert body["deciding_stage"] == 4
    limited = client.post("/stability/check", json={"coefficients": QUINTIC, "max_stages": 3}).json()
    assert limited["verdict"] == "Inconclusive"


def test_check_ascending_float(client):
    body = client.post(
        "/stability/check", json={"coefficients": ["0.4", "-0.3", "1"], "ascending": True, "backend": "float"}
    ).json()
    assert body["backend"] == "float"
    assert body["verdict"] == "Certified"


def test_trace(client):
    body = client.post("/stability/trace", json={"coefficients": QUINTIC, "stages": 5}).json()
    assert len(body["rows"]) == 6
    assert body["rows"][4]["l1_norm"] == "1 + 23/32 < 2"
    assert not body["rows"][5]["l1_norm"].endswith("< 2")


def test_jury_and_roots(client):
    jury = client.post("/stability/jury", json={"coefficients": QUINTIC}).json()
    assert jury["rows"][6] == ["63/256", "3/32", "-3/256"]
    roots = client.post("/stability/roots", json={"coefficients": ["1", "0", "1/4"]}).json()
    assert roots["schur_class"] == "Inside"
    assert roots["max_modulus"] == pytest.approx(0.5)


def test_cases(client):
    cournot = client.post("/cases/cournot", json={"lam": "1/2", "k": 2}).json()
    assert cournot["closed_form"] == "3/4"
    assert cournot["all_certified"]
    ricker = client.post("/cases/ricker", json={"r": "1", "a": "6/5", "b": "198/125"}).json()
    assert ricker["outcome"] == "StableSufficient"
    assert ricker["stage"] == 1


@pytest.mark.parametrize(
    "path, payload, code",
    [
        ("/stability/check", {"coefficients": ["0", "1"]}, "INVALID_INPUT"),
        ("/stability/check", {"coefficients": ["1", "abc"]}, "INVALID_INPUT"),
        ("/cases/cournot", {"lam": "2", "k": 1}, "INVALID_INPUT"),
        ("/cases/ricker", {"r": "1", "a": "0", "b": "1"}, "INVALID_CELL"),
    ],
)
def test_invalid_input(client, path, payload, code):
    response = client.post(path, json=payload)
    assert response.status_code == 400
    assert response.json()["error_code"] == code


def test_request_validation(client):
    assert client.post("/stability/check", json={"coefficients": ["1"]}).status_code == 422
    assert client.post("/stability/check", json={"coefficients": QUINTIC, "max_stages": -1}).status_code == 422


def test_error_bodies_follow_error_schema(client):
    schema = client.get("/openapi.json").json()
    assert set(schema["components"]["schemas"]["ErrorResponse"]["properties"]) == {"detail", "error_code"}
    check = schema["paths"]["/stability/check"]["post"]["responses"]["400"]
    assert check["content"]["application/json"]["schema"]["$ref"].endswith("/ErrorResponse")
    assert "400" in schema["paths"]["/cases/ricker"]["post"]["responses"]
    body = client.post("/stability/check", json={"coefficients": ["0", "1"]}).json()
    assert set(body) == {"detail", "error_code"}
