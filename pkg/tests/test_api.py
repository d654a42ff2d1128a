import pytest
from fastapi.testclient import TestClient

from planexplain.api import create_app
from planexplain.engine import Engine
from planexplain.fixtures import load_engine_config


@pytest.fixture()
def client():
    engine = Engine(load_engine_config())
    with TestClient(create_app(engine)) as tc:
        yield tc


def request_explanation(client, profile=1, observation=(3, 3)):
    resp = client.post(
        "/explanations", json={"profile": profile, "observation": list(observation)}
    )
    assert resp.status_code == 200, resp.text
    return resp.json()


class TestRead:
    def test_profiles(self, client):
        body = client.get("/profiles").json()
        assert [p["id"] for p in body] == [1, 2, 3]
        assert all(p["description"] for p in body)

    def test_policy_panel(self, client):
        body = client.get("/policies/1").json()
        assert body["profile"] == 1
        assert [3, 3] in [entry["observation"] for entry in body["choices"]]

    def test_beliefs(self, client):
        body = client.get("/beliefs/1", params={"obs": "3,3"}).json()
        assert [b["skill"] for b in body["beliefs"]] == ["attention", "understanding"]
        for b in body["beliefs"]:
            assert sum(b["posterior"]) == pytest.approx(1.0, abs=1e-9)

    def test_impossible_observation_is_422(self, client):
        assert client.get("/beliefs/1", params={"obs": "9,9"}).status_code == 422

    def test_plans_listed(self, client):
        body = client.get("/plans").json()
        assert body and body[0]["success_probability"] >= 0.95

    def test_counts(self, client):
        body = client.get("/counts").json()
        assert body["counts"]


class TestExplanationFlow:
    def test_round_trip(self, client):
        record = request_explanation(client)
        assert record["choices"] == [[1, 1], [2, 1], [3, 2]]
        resp = client.post(f"/explanations/{record['id']}/feedback", json={"verdict": "accepted"})
        assert resp.status_code == 200
        assert resp.json()["sequence"] == 1
        refreshed = client.get("/policies/1").json()
        assert refreshed["provenance"]["ledger_sequence"] == 1

    def test_double_feedback_is_409(self, client):
        record = request_explanation(client)
        first = client.post(f"/explanations/{record['id']}/feedback", json={"verdict": "accepted"})
        assert first.status_code == 200
        second = client.post(f"/explanations/{record['id']}/feedback", json={"verdict": "rejected"})
        assert second.status_code == 409

    def test_unknown_explanation_is_404(self, client):
        resp = client.post("/explanations/exp-404/feedback", json={"verdict": "accepted"})
        assert resp.status_code == 404

    def test_bad_verdict_is_422(self, client):
        record = request_explanation(client)
        resp = client.post(f"/explanations/{record['id']}/feedback", json={"verdict": "maybe"})
        assert resp.status_code == 422

    def test_unreachable_observation_is_404_or_422(self, client):
        resp = client.post("/explanations", json={"profile": 1, "observation": [9, 9]})
        assert resp.status_code in (404, 422)

    def test_events_feed(self, client):
        record = request_explanation(client)
        client.post(f"/explanations/{record['id']}/feedback", json={"verdict": "accepted"})
        events = client.get("/events").json()
        kinds = [e["kind"] for e in events]
        assert "explanation" in kinds and "feedback" in kinds
        last = events[-1]["sequence"]
        assert client.get("/events", params={"since": last}).json() == []


class TestWrites:
    def test_problem_ingest(self, client):
        resp = client.post("/problems", json={"text": "new problem statement"})
        assert resp.status_code == 200

    def test_plan_ingest_and_use(self, client):
        plan = {
            "version": 1,
            "id": "plan-web",
            "assignments": [{"agent": "a1", "task": "t1", "location": "A"}],
            "total_cost": 15.0,
            "success_probability": 0.97,
        }
        assert client.post("/plans", json=plan).status_code == 200
        ids = [p["id"] for p in client.get("/plans").json()]
        assert "plan-web" in ids

    def test_malformed_plan_is_422(self, client):
        assert client.post("/plans", json={"id": "nope"}).status_code == 422

    def test_cognitive_model_update(self, client):
        payload = {"joints": {"1,1": [[0.55, 0.05, 0.02], [0.12, 0.08, 0.03], [0.05, 0.05, 0.05]]}}
        assert client.post("/cognitive-model", json=payload).status_code == 200
        assert client.get("/policies/1").status_code == 200

    def test_invalid_cognitive_model_is_422(self, client):
        payload = {"joints": {"1,1": [[0.9, 0.9, 0.9], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]}}
        assert client.post("/cognitive-model", json=payload).status_code == 422
