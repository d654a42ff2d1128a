"""HTTP surface of the engine: profiles, plans, explanations, feedback,
policies, beliefs, cognitive-model updates, and the event feed."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .domain import DomainError, SchemaError, plan_to_dict
from .engine import Engine, FeedbackConflict, Trigger, TriggerError
from .ledger import LedgerError
from .policy import ImpossibleObservation, UnknownObservation
from .prompting import BackendError


class ExplanationRequest(BaseModel):
    profile: int
    observation: list[int] | None = None
    plan_id: str | None = None


class FeedbackRequest(BaseModel):
    verdict: str


class ProblemRequest(BaseModel):
    text: str


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="planexplain", version="0.1.0")
    app.state.engine = engine

    @app.get("/profiles")
    def profiles():
        return [
            {"id": p.id, "name": p.name, "description": p.description}
            for p in engine.model.profiles
        ]

    @app.post("/plans")
    def ingest_plan(plan: dict):
        try:
            engine.handle(Trigger(kind="context", payload={"context": "plan", "plan": plan}))
        except (SchemaError, DomainError, TriggerError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"status": "ok", "plan_id": plan.get("id")}

    @app.get("/plans")
    def plans():
        return [plan_to_dict(p) for _, p in sorted(engine.plans.items())]

    @app.post("/problems")
    def ingest_problem(req: ProblemRequest):
        engine.handle(Trigger(kind="context", payload={"context": "problem", "text": req.text}))
        return {"status": "ok"}

    @app.post("/explanations")
    def explain(req: ExplanationRequest):
        try:
            record = engine.explain(req.profile, req.observation, req.plan_id)
        except (UnknownObservation, KeyError) as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except (ImpossibleObservation, DomainError, TriggerError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except BackendError as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        return record.to_dict()

    @app.post("/explanations/{explanation_id}/feedback")
    def feedback(explanation_id: str, req: FeedbackRequest):
        try:
            event = engine.feedback(explanation_id, req.verdict)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except FeedbackConflict as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except LedgerError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"status": "ok", "sequence": event.sequence}

    @app.get("/policies/{profile}")
    def policy(profile: int):
        try:
            snapshot = engine.policy(profile)
        except (DomainError, IndexError) as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return snapshot.to_dict()

    @app.get("/beliefs/{profile}")
    def beliefs(profile: int, obs: str):
        try:
            observation = tuple(int(x) for x in obs.split(","))
            belief = engine.belief(profile, observation)
        except ImpossibleObservation as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except (DomainError, ValueError, IndexError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "profile": profile,
            "observation": list(observation),
            "beliefs": [
                {"skill": s.name, "levels": list(s.levels), "posterior": list(b)}
                for s, b in zip(engine.model.skills, belief)
            ],
        }

    @app.post("/cognitive-model")
    def update_cognitive_model(payload: dict):
        try:
            engine.handle(Trigger(kind="cognitive_prediction", payload=payload))
        except TriggerError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"status": "ok"}

    @app.get("/events")
    def events(since: int = 0):
        return engine.events(since)

    @app.get("/counts")
    def counts():
        return engine.ledger.export_counts()

    return app
