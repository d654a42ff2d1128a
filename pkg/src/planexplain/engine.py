"""Adaptation loop and engine state: monitor triggers, invalidate policies,
re-synthesize lazily, and serve explanations.

The engine is a single logical writer: every mutation (feedback, cognitive
model update, context change) is serialized through one lock, while reads
serve immutable snapshots. Policies are cached per profile and keyed by
(ledger sequence, cognitive model hash, utility params hash), so a stale
snapshot is never used to generate an explanation.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Mapping

from . import policy as policy_mod
from .domain import (
    CognitiveModel,
    CognitiveSkill,
    DomainError,
    Plan,
    PlannerInput,
    Profile,
    PromptCatalog,
    PromptSlot,
    SlotOption,
    canonical_json,
    plan_from_dict,
    plan_to_dict,
    planner_input_from_dict,
    planner_input_to_dict,
    validate_cognitive_model,
)
from .ledger import FeedbackEvent, FeedbackLedger
from .planning import reference_plan
from .policy import PolicySnapshot, posterior, prompt_options
from .prompting import (
    DEFAULT_TEMPLATE,
    ExplanationRecord,
    GenerationBackend,
    MockBackend,
    PromptContext,
    check_template,
    fill,
)
from .utility import UtilityParams


class TriggerError(ValueError):
    pass


class FeedbackConflict(ValueError):
    """Feedback already submitted for this explanation."""


@dataclass(frozen=True)
class Trigger:
    kind: str  # feedback | cognitive_prediction | context
    payload: Mapping[str, Any]
    received_at: str = ""

    def __post_init__(self):
        if self.kind not in ("feedback", "cognitive_prediction", "context"):
            raise TriggerError(f"unknown trigger kind {self.kind!r}")


@dataclass(frozen=True)
class EngineConfig:
    model: CognitiveModel
    catalog: PromptCatalog
    params: UtilityParams
    seeds: dict[tuple[int, int, int], tuple[int, int]]
    template: str
    backend: Mapping[str, Any]
    problem: str
    planner_input: PlannerInput | None

    @classmethod
    def from_dict(cls, obj: Mapping[str, Any]) -> "EngineConfig":
        profiles = tuple(
            Profile(id=p["id"], name=p["name"], description=p["description"])
            for p in obj["profiles"]
        )
        skills = tuple(
            CognitiveSkill(index=s["index"], name=s["name"], levels=tuple(s["levels"]))
            for s in obj["skills"]
        )
        joints = {}
        for key, table in obj["joints"].items():
            pid, k = (int(x) for x in key.split(","))
            joints[(pid, k)] = tuple(tuple(float(v) for v in row) for row in table)
        model = CognitiveModel(profiles=profiles, skills=skills, joints=joints)

        slots = []
        for s in obj["catalog"]["slots"]:
            options = tuple(
                SlotOption(
                    slot=s["index"],
                    index=o["index"],
                    prompt_text=o["prompt_text"],
                    alignment={k: frozenset(v) for k, v in o.get("alignment", {}).items()},
                )
                for o in s["options"]
            )
            slots.append(PromptSlot(index=s["index"], name=s["name"], options=options))
        catalog = PromptCatalog(slots=tuple(slots))

        seeds = {
            (c["profile"], c["slot"], c["option"]): (c["acceptances"], c["rejections"])
            for c in obj.get("seed_counts", [])
        }
        planner_input = None
        if obj.get("planner_input") is not None:
            planner_input = planner_input_from_dict(obj["planner_input"])
        return cls(
            model=model,
            catalog=catalog,
            params=UtilityParams.from_dict(obj.get("params", {})),
            seeds=seeds,
            template=obj.get("template") or DEFAULT_TEMPLATE,
            backend=obj.get("backend", {"kind": "mock"}),
            problem=obj.get("problem", ""),
            planner_input=planner_input,
        )

    @classmethod
    def load(cls, path: str | Path) -> "EngineConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def make_backend(spec: Mapping[str, Any]) -> GenerationBackend:
    kind = spec.get("kind", "mock")
    if kind == "mock":
        return MockBackend()
    if kind == "http":
        from .prompting import HttpBackend

        return HttpBackend(endpoint=spec["endpoint"], model=spec["model"])
    raise TriggerError(f"unknown backend kind {kind!r}")


class Engine:
    """Single-node explanation engine with lazy policy re-synthesis."""

    def __init__(
        self,
        config: EngineConfig,
        ledger_path: str | Path | None = None,
        backend: GenerationBackend | None = None,
        clock: Callable[[], str] = _utc_now,
    ):
        report = validate_cognitive_model(config.model)
        if not report.ok:
            raise DomainError(f"invalid cognitive model: {report.issues[0].message}")
        config.catalog.check_alignment(config.model.skills)
        check_template(config.template, config.catalog)

        self.config = config
        self.model = config.model
        self.catalog = config.catalog
        self.params = config.params
        self.template = config.template
        self.backend = backend or make_backend(config.backend)
        self.clock = clock

        valid_keys = [
            (p.id, s.index, o.index)
            for p in config.model.profiles
            for s in config.catalog.slots
            for o in s.options
        ]
        self.ledger = FeedbackLedger(valid_keys, seeds=config.seeds, path=ledger_path)

        self.problem = config.problem
        self.planner_input = config.planner_input
        self.plans: dict[str, Plan] = {}
        if config.planner_input is not None:
            for plan in reference_plan(config.planner_input):
                self.plans[plan.id] = plan
        self.explanations: dict[str, ExplanationRecord] = {}
        self.active_profile: int = config.model.profiles[0].id

        self._snapshots: dict[int, tuple[tuple, PolicySnapshot]] = {}
        self._events: list[dict] = []
        self._event_seq = 0
        self._explanation_seq = 0
        self._lock = threading.RLock()

    # -- knowledge accessors -------------------------------------------------

    def _snapshot_key(self) -> tuple:
        return (
            self.ledger.sequence,
            policy_mod.model_hash(self.model),
            policy_mod.params_hash(self.params),
        )

    def policy(self, profile: int, verify: bool = False) -> PolicySnapshot:
        """Current policy for a profile, re-synthesized if state moved on.

        With ``verify`` the backward-induction solver is run as well and must
        agree with the fast path.
        """
        with self._lock:
            key = self._snapshot_key()
            cached = self._snapshots.get(profile)
            if cached is not None and cached[0] == key:
                return cached[1]
            estimate = lambda p, q: float(self.ledger.estimate(profile, p, q))  # noqa: E731
            provenance = {
                "ledger_sequence": key[0],
                "model_hash": key[1],
                "params_hash": key[2],
            }
            snapshot = policy_mod.solve_decomposed(
                self.model, self.catalog, profile, estimate, self.params, provenance
            )
            if verify:
                check = policy_mod.solve_value_iteration(
                    self.model, self.catalog, profile, estimate, self.params, provenance
                )
                if check.choices != snapshot.choices or abs(check.value - snapshot.value) > 1e-9:
                    raise RuntimeError("solver cross-check failed: policies disagree")
            self._snapshots[profile] = (key, snapshot)
            self._record_event(
                "policy_synthesized",
                {"profile": profile, "value": snapshot.value, "provenance": provenance},
            )
            return snapshot

    def belief(self, profile: int, obs) -> tuple:
        return posterior(self.model, profile, tuple(obs))

    def default_observation(self, profile: int) -> tuple[int, ...]:
        """Most likely prediction vector under the profile's joint tables."""
        obs = []
        for skill in self.model.skills:
            table = self.model.joint(profile, skill.index)
            cols = [
                sum(table[i][j] for i in range(skill.num_levels))
                for j in range(skill.num_levels)
            ]
            obs.append(max(range(len(cols)), key=lambda j: (cols[j], -j)) + 1)
        return tuple(obs)

    def events(self, since: int = 0) -> list[dict]:
        with self._lock:
            return [e for e in self._events if e["sequence"] > since]

    def _record_event(self, kind: str, payload: Mapping[str, Any]) -> None:
        self._event_seq += 1
        self._events.append(
            {"sequence": self._event_seq, "kind": kind, "at": self.clock(), "payload": dict(payload)}
        )

    # -- execution -----------------------------------------------------------

    def explain(self, profile: int, obs=None, plan_id: str | None = None) -> ExplanationRecord:
        """Generate and persist a tailored explanation for one request."""
        observation = tuple(obs) if obs is not None else self.default_observation(profile)
        snapshot = self.policy(profile)
        choices = prompt_options(snapshot, observation)
        if plan_id is None:
            if not self.plans:
                raise TriggerError("no plans available; ingest a plan or planner input first")
            plan_id = sorted(self.plans)[0]
        plan = self.plans[plan_id]
        context = PromptContext(
            problem=self.problem or "(no problem description on file)",
            planner_input=(
                canonical_json(planner_input_to_dict(self.planner_input))
                if self.planner_input
                else "(no planner input on file)"
            ),
            plan=canonical_json(plan_to_dict(plan)),
        )
        prompt = fill(self.template, self.model.profile(profile), self.catalog, choices, context)
        text = self.backend.generate(prompt)  # may raise; nothing persisted then
        with self._lock:
            self._explanation_seq += 1
            record = ExplanationRecord(
                id=f"exp-{self._explanation_seq}",
                profile=profile,
                observation=observation,
                choices=choices,
                prompt=prompt,
                backend=self.backend.id,
                explanation=text,
                plan_id=plan_id,
                created_at=self.clock(),
                ledger_sequence=snapshot.provenance["ledger_sequence"],
            )
            self.explanations[record.id] = record
            self._record_event(
                "explanation",
                {
                    "id": record.id,
                    "profile": profile,
                    "observation": list(observation),
                    "choices": [list(pq) for pq in choices],
                },
            )
            return record

    def feedback(self, explanation_id: str, verdict: str) -> FeedbackEvent:
        with self._lock:
            record = self.explanations.get(explanation_id)
            if record is None:
                raise KeyError(f"unknown explanation {explanation_id}")
            if record.feedback is not None:
                raise FeedbackConflict(f"feedback already recorded for {explanation_id}")
            event = FeedbackEvent(
                sequence=self.ledger.sequence + 1,
                timestamp=self.clock(),
                profile=record.profile,
                shown=record.choices,
                verdict=verdict,
                explanation_id=explanation_id,
            )
            self.ledger.record(event)
            self.explanations[explanation_id] = ExplanationRecord(
                **{**record.__dict__, "feedback": verdict}
            )
            self._snapshots.pop(record.profile, None)
            self._record_event(
                "feedback",
                {"explanation_id": explanation_id, "profile": record.profile, "verdict": verdict},
            )
            return event

    # -- trigger handling (monitor/analyze/plan/execute) ----------------------

    def handle(self, trigger: Trigger) -> None:
        with self._lock:
            if trigger.kind == "feedback":
                self._handle_feedback(trigger.payload)
            elif trigger.kind == "cognitive_prediction":
                self._handle_cognitive_update(trigger.payload)
            else:
                self._handle_context(trigger.payload)

    def _handle_feedback(self, payload: Mapping[str, Any]) -> None:
        if "explanation_id" in payload:
            self.feedback(payload["explanation_id"], payload["verdict"])
            return
        # Batch form: explicit profile and shown options, repeated `count` times.
        try:
            profile = int(payload["profile"])
            shown = tuple((int(p), int(q)) for p, q in payload["shown"])
            verdict = payload["verdict"]
            count = int(payload.get("count", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise TriggerError(f"invalid feedback payload: {exc}") from exc
        for _ in range(count):
            event = FeedbackEvent(
                sequence=self.ledger.sequence + 1,
                timestamp=self.clock(),
                profile=profile,
                shown=shown,
                verdict=verdict,
                explanation_id=payload.get("explanation_id", ""),
            )
            self.ledger.record(event)
        self._snapshots.pop(profile, None)
        self._record_event(
            "feedback",
            {"profile": profile, "verdict": verdict, "count": count, "shown": [list(s) for s in shown]},
        )

    def _handle_cognitive_update(self, payload: Mapping[str, Any]) -> None:
        try:
            updates = payload["joints"]
        except KeyError as exc:
            raise TriggerError("cognitive_prediction payload needs 'joints'") from exc
        candidate = self.model
        for key, table in updates.items():
            pid, k = (int(x) for x in key.split(","))
            candidate = candidate.with_joint(pid, k, table)
        report = validate_cognitive_model(candidate)
        if not report.ok:
            # Reject the whole update; prior model and policies stay in force.
            issue = report.issues[0]
            raise TriggerError(f"rejected cognitive model update: {issue.path}: {issue.message}")
        self.model = candidate
        self._snapshots.clear()
        self._record_event("cognitive_model_updated", {"joints": sorted(updates)})

    def _handle_context(self, payload: Mapping[str, Any]) -> None:
        context = payload.get("context")
        if context == "profile":
            profile = int(payload["profile"])
            if not any(p.id == profile for p in self.model.profiles):
                raise TriggerError(f"unknown profile {profile}")
            self.active_profile = profile
            self._record_event("profile_changed", {"profile": profile})
        elif context == "plan":
            plan = plan_from_dict(payload["plan"])
            self.plans[plan.id] = plan
            self._snapshots.clear()
            self._record_event("plan_ingested", {"plan_id": plan.id})
        elif context == "problem":
            self.problem = payload["text"]
            self._record_event("problem_ingested", {"chars": len(self.problem)})
        else:
            raise TriggerError(f"unknown context sub-kind {context!r}")

    # -- scenario replay -----------------------------------------------------

    def run_scenario(self, script: Mapping[str, Any]) -> list[dict]:
        """Apply an ordered trigger script, recording each step's policy."""
        steps = script.get("steps")
        if steps is None:
            raise TriggerError("scenario script needs a 'steps' list")
        timeline = []
        if not steps:
            snapshot = self.policy(self.active_profile)
            return [
                {
                    "label": "bootstrap",
                    "profile": self.active_profile,
                    "value": snapshot.value,
                    "choices": None,
                    "observation": None,
                }
            ]
        for i, step in enumerate(steps):
            try:
                for t in step.get("triggers", []):
                    self.handle(Trigger(kind=t["kind"], payload=t["payload"]))
                request = step["request"]
                profile = int(request["profile"])
                obs = tuple(request["observation"]) if request.get("observation") else None
            except (KeyError, TypeError, ValueError, TriggerError) as exc:
                raise TriggerError(f"scenario step {i}: {exc}") from exc
            record = self.explain(profile, obs, request.get("plan_id"))
            snapshot = self.policy(profile)
            timeline.append(
                {
                    "label": step.get("label", f"step-{i}"),
                    "profile": profile,
                    "observation": list(record.observation),
                    "choices": [list(pq) for pq in record.choices],
                    "value": snapshot.value,
                    "explanation_id": record.id,
                }
            )
        return timeline
