import pytest
from fastapi.testclient import TestClient

from gaugelab.api import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"


def test_list(client):
    names = {s["name"] for s in client.get("/scenarios").json()}
    assert "landau_gauge_pair" in names


def test_run(client):
    resp = client.post("/scenarios/soft_coulomb_bound_states/run", json={"params": {"n": 512}, "seed": 3})
    assert resp.status_code == 200
    body = resp.json()
    assert body["passed"] and body["seed"] == 3
    assert "oracle_fixture" in {c["id"] for c in body["claims"]}
    assert len(body["spectra"]["soft_coulomb"]) == 3


def test_unknown_scenario(client):
    assert client.post("/scenarios/none/run", json={}).status_code == 404


def test_bad_params(client):
    resp = client.post("/scenarios/soft_coulomb_bound_states/run", json={"params": {"zzz": 1}})
    assert resp.status_code == 422
