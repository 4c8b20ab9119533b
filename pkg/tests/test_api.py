"""
Tests for the HTTP API.
"""

import json

import numpy as np
import pytest
from fastapi.testclient import TestClient
from httpx import ASGITransport, AsyncClient

from trace_fields.formats import GroupFile
from trace_fields.main import app

from .conftest import REAL_LOXODROMIC

client = TestClient(app)


def _payload(matrices) -> dict:
    return json.loads(GroupFile.from_matrices(matrices).model_dump_json())


def test_health_endpoints():
    response = client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "healthy"
    assert body["checks"]["tolerances"]["status"] == "ok"
    assert client.get("/health/ready").json() == {"status": "ready"}
    assert client.get("/health/live").json() == {"status": "alive"}


def test_root():
    body = client.get("/").json()
    assert body["name"] == "Trace Fields"
    assert body["status"] == "running"


def test_commands_listing():
    body = client.get("/analysis/commands").json()
    assert "detect" in body["commands"]
    assert "sl2z" in body["corpora"]


def test_corpus_endpoint():
    response = client.get("/analysis/corpus/sl2z")
    assert response.status_code == 200
    group_file = GroupFile.model_validate(response.json())
    assert group_file.flags.assumed_discrete
    assert len(group_file.generators) == 2
    assert client.get("/analysis/corpus/nope").status_code == 404


def test_classify_endpoint():
    response = client.post("/analysis/classify", json=_payload([REAL_LOXODROMIC]))
    assert response.status_code == 200
    element = response.json()["result"]["elements"][0]
    assert element["tag"] == "Loxodromic"
    assert np.isclose(element["lam"], 2)


def test_domain_error_is_a_full_report():
    corpus = client.get("/analysis/corpus/sl2z").json()
    response = client.post("/analysis/so21", json=corpus, params={"max_length": 3})
    assert response.status_code == 422
    body = response.json()
    assert body["command"] == "so21"
    assert body["error"]["tag"] == "Reducible"


def test_request_errors():
    assert client.post("/analysis/frobnicate", json=_payload([REAL_LOXODROMIC])).status_code == 404
    assert client.post("/analysis/classify", json={"generators": [[[0, 0]]]}).status_code == 422
    response = client.post(
        "/analysis/classify", json=_payload([REAL_LOXODROMIC]), params={"max_length": 20}
    )
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_detect_endpoint_async():
    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as ac:
        corpus = (await ac.get("/analysis/corpus/so21-hidden")).json()
        response = await ac.post("/analysis/detect", json=corpus, params={"max_length": 4})
    assert response.status_code == 200
    assert response.json()["result"]["verdict"] == "RFuchsian"
