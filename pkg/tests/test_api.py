"""HTTP facade: endpoint contracts, error mapping, CLI parity."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from peerbargain.api import create_app
from peerbargain.dataset import builtin_us_dataset, serialize_dataset
from peerbargain.scenario import emit_report, parse_scenario_spec, run, sweep

SPEC_DIR = Path(__file__).resolve().parent.parent / "specs"


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


class TestHealth:
    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}

    def test_repeatable(self, client):
        assert client.get("/healthz").content == client.get("/healthz").content

    def test_unknown_path(self, client):
        response = client.get("/definitely/not/here")
        assert response.status_code == 404
        body = response.json()
        assert body["code"] == "not_found"


class TestDatasets:
    def test_listing(self, client):
        response = client.get("/api/v1/datasets")
        assert response.status_code == 200
        assert "us2013" in response.json()

    def test_full_dataset_matches_serializer(self, client):
        response = client.get("/api/v1/datasets/us2013")
        assert response.status_code == 200
        assert response.text == serialize_dataset(builtin_us_dataset())
        assert response.json()["isps"][0]["subscribers"] == 19_025_000

    def test_unknown_dataset(self, client):
        response = client.get("/api/v1/datasets/nope")
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"


class TestScenarioEndpoints:
    def test_run_matches_cli_bytes(self, client):
        body = json.loads((SPEC_DIR / "comcast-google-video.json").read_text())
        response = client.post("/api/v1/scenarios:run", json=body)
        assert response.status_code == 200
        expected = emit_report(run(parse_scenario_spec(body)), "json")
        assert response.text == expected

    def test_invalid_loyalty_names_field(self, client):
        body = json.loads((SPEC_DIR / "comcast-google-video.json").read_text())
        body["overrides"]["beta"] = 1.5
        response = client.post("/api/v1/scenarios:run", json=body)
        assert response.status_code == 422
        payload = response.json()
        assert payload["code"] == "validation_failed"
        assert any("spec.overrides.beta" in d for d in payload["details"])

    def test_sweep_row_count(self, client):
        body = json.loads((SPEC_DIR / "comcast-google-search-sweep.json").read_text())
        response = client.post("/api/v1/sweeps", json=body)
        assert response.status_code == 200
        assert len(response.json()["rows"]) == 6

    def test_price_table(self, client):
        body = json.loads((SPEC_DIR / "comcast-google-price-table.json").read_text())
        response = client.post("/api/v1/price-tables", json=body)
        assert response.status_code == 200
        assert response.json()["services"] == ["user_centric_video", "osn", "search", "gaming"]

    def test_timing(self, client):
        body = json.loads((SPEC_DIR / "comcast-google-timing.json").read_text())
        response = client.post("/api/v1/timing", json=body)
        assert response.status_code == 200
        assert len(response.json()["orderings"]) == 2

    def test_malformed_json(self, client):
        response = client.post(
            "/api/v1/scenarios:run",
            content=b"{ nope",
            headers={"content-type": "application/json"},
        )
        assert response.status_code == 400
        assert response.json()["code"] == "bad_request"

    def test_wrong_content_type(self, client):
        response = client.post(
            "/api/v1/scenarios:run",
            content=b"x=1",
            headers={"content-type": "application/x-www-form-urlencoded"},
        )
        assert response.status_code == 400

    def test_unknown_body_field(self, client):
        body = json.loads((SPEC_DIR / "comcast-google-video.json").read_text())
        body["bonus"] = True
        response = client.post("/api/v1/scenarios:run", json=body)
        assert response.status_code == 422
        assert any("spec.bonus" in d for d in response.json()["details"])

    def test_statelessness(self, client):
        body = json.loads((SPEC_DIR / "comcast-google-video.json").read_text())
        first = client.post("/api/v1/scenarios:run", json=body).content
        client.post("/api/v1/sweeps", json=json.loads((SPEC_DIR / "comcast-google-search-sweep.json").read_text()))
        second = client.post("/api/v1/scenarios:run", json=body).content
        assert first == second
