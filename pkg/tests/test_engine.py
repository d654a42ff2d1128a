import random

import pytest

from planexplain.engine import Engine, FeedbackConflict, Trigger, TriggerError
from planexplain.fixtures import load_engine_config, load_scenario

EXPECTED_POLICIES = [
    [[1, 2], [2, 2], [3, 1]],
    [[1, 1], [2, 1], [3, 2]],
    [[1, 1], [2, 1], [3, 1]],
    [[1, 2], [2, 1], [3, 3]],
]


def fresh_engine(**kwargs):
    return Engine(load_engine_config(), **kwargs)


class TestPolicyService:
    def test_snapshot_cached_until_state_moves(self):
        engine = fresh_engine()
        first = engine.policy(1)
        assert engine.policy(1) is first
        engine.handle(
            Trigger(
                kind="feedback",
                payload={"profile": 1, "shown": [[1, 1], [2, 1], [3, 1]], "verdict": "accepted"},
            )
        )
        second = engine.policy(1)
        assert second is not first
        assert second.provenance["ledger_sequence"] == first.provenance["ledger_sequence"] + 1

    def test_other_profiles_keep_their_snapshots(self):
        engine = fresh_engine()
        engine.policy(2)
        engine.handle(
            Trigger(
                kind="feedback",
                payload={"profile": 1, "shown": [[1, 1], [2, 1], [3, 1]], "verdict": "rejected"},
            )
        )
        # profile 2 estimates are untouched; re-synthesis must not change choices
        again = engine.policy(2)
        assert again.choices == fresh_engine().policy(2).choices

    def test_verify_runs_both_solvers(self):
        engine = fresh_engine()
        for profile in (1, 2, 3):
            snap = engine.policy(profile, verify=True)
            assert snap.choices

    def test_default_observation_is_marginal_mode(self):
        engine = fresh_engine()
        assert engine.default_observation(1) == (3, 3)


class TestCognitiveUpdates:
    def test_malformed_update_rejected_atomically(self):
        engine = fresh_engine()
        before = engine.policy(1)
        with pytest.raises(TriggerError):
            engine.handle(
                Trigger(
                    kind="cognitive_prediction",
                    payload={"joints": {"1,1": [[0.9, 0.9, 0.9], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]}},
                )
            )
        assert engine.policy(1) is before

    def test_update_is_idempotent(self):
        engine = fresh_engine()
        payload = {
            "joints": {
                "1,1": [
                    [0.55, 0.05, 0.02],
                    [0.12, 0.08, 0.03],
                    [0.05, 0.05, 0.05],
                ]
            }
        }
        engine.handle(Trigger(kind="cognitive_prediction", payload=payload))
        first = engine.policy(1)
        engine.handle(Trigger(kind="cognitive_prediction", payload=payload))
        second = engine.policy(1)
        assert first.choices == second.choices
        assert first.value == second.value


class TestExplainAndFeedback:
    def test_explanation_is_deterministic_with_mock_backend(self):
        a = fresh_engine(clock=lambda: "2026-08-23T00:00:00+00:00").explain(1, (3, 3))
        b = fresh_engine(clock=lambda: "2026-08-23T00:00:00+00:00").explain(1, (3, 3))
        assert a.to_dict() == b.to_dict()

    def test_feedback_applies_to_all_shown_slots(self):
        engine = fresh_engine()
        record = engine.explain(1, (3, 3))
        before = {pq: engine.ledger.counts(1, *pq) for pq in record.choices}
        engine.feedback(record.id, "accepted")
        for pq in record.choices:
            a, r = engine.ledger.counts(1, *pq)
            assert (a, r) == (before[pq][0] + 1, before[pq][1])

    def test_double_feedback_conflicts(self):
        engine = fresh_engine()
        record = engine.explain(1, (3, 3))
        engine.feedback(record.id, "accepted")
        with pytest.raises(FeedbackConflict):
            engine.feedback(record.id, "rejected")

    def test_unknown_explanation_id(self):
        with pytest.raises(KeyError):
            fresh_engine().feedback("exp-404", "accepted")

    def test_events_feed_monotone_and_filterable(self):
        engine = fresh_engine()
        record = engine.explain(1, (3, 3))
        engine.feedback(record.id, "accepted")
        events = engine.events()
        sequences = [e["sequence"] for e in events]
        assert sequences == sorted(sequences)
        tail = engine.events(since=sequences[-2])
        assert len(tail) == 1 and tail[0]["kind"] == "feedback"

    def test_backend_failure_persists_nothing(self):
        class Boom:
            id = "boom"

            def generate(self, prompt):
                raise RuntimeError("backend down")

        engine = fresh_engine(backend=Boom())
        with pytest.raises(RuntimeError):
            engine.explain(1, (3, 3))
        assert not engine.explanations


class TestContext:
    def test_profile_switch(self):
        engine = fresh_engine()
        engine.handle(Trigger(kind="context", payload={"context": "profile", "profile": 3}))
        assert engine.active_profile == 3

    def test_unknown_profile_rejected(self):
        with pytest.raises(TriggerError):
            fresh_engine().handle(Trigger(kind="context", payload={"context": "profile", "profile": 9}))

    def test_plan_ingest(self):
        engine = fresh_engine()
        plan = {
            "version": 1,
            "id": "plan-extra",
            "assignments": [{"agent": "a1", "task": "t1", "location": "A"}],
            "total_cost": 12.0,
            "success_probability": 0.99,
        }
        engine.handle(Trigger(kind="context", payload={"context": "plan", "plan": plan}))
        assert "plan-extra" in engine.plans
        record = engine.explain(1, (3, 3), plan_id="plan-extra")
        assert record.plan_id == "plan-extra"

    def test_unknown_trigger_kind_rejected(self):
        with pytest.raises(TriggerError):
            Trigger(kind="mystery", payload={})


class TestScenario:
    def test_adaptation_timeline(self):
        timeline = fresh_engine().run_scenario(load_scenario())
        assert [step["choices"] for step in timeline] == EXPECTED_POLICIES

    def test_timeline_is_reproducible(self):
        a = fresh_engine().run_scenario(load_scenario())
        b = fresh_engine().run_scenario(load_scenario())
        keep = lambda t: [(s["label"], s["profile"], s["observation"], s["choices"]) for s in t]  # noqa: E731
        assert keep(a) == keep(b)

    def test_empty_script_bootstraps(self):
        timeline = fresh_engine().run_scenario({"steps": []})
        assert len(timeline) == 1 and timeline[0]["label"] == "bootstrap"

    def test_missing_steps_rejected(self):
        with pytest.raises(TriggerError):
            fresh_engine().run_scenario({})


class TestRecovery:
    def test_restart_replays_log(self, tmp_path):
        path = tmp_path / "events.jsonl"
        engine = fresh_engine(ledger_path=path)
        rng = random.Random(41)
        for _ in range(20):
            record = engine.explain(rng.randint(1, 3))
            engine.feedback(record.id, rng.choice(["accepted", "rejected"]))
        restarted = fresh_engine(ledger_path=path)
        assert restarted.ledger.all_counts() == engine.ledger.all_counts()
        assert restarted.ledger.sequence == engine.ledger.sequence
        for profile in (1, 2, 3):
            assert restarted.policy(profile).choices == engine.policy(profile).choices
