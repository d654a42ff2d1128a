import random
from fractions import Fraction

import pytest

from planexplain.fixtures import ADAPTATION_FEEDBACK_LOG
from planexplain.ledger import (
    FeedbackEvent,
    FeedbackLedger,
    LedgerError,
    SequenceConflict,
    fold_counts,
    posterior_mean,
    read_log,
    replay,
)

KEYS = [(1, p, q) for p in (1, 2) for q in (1, 2)]


def event(seq, verdict="accepted", shown=((1, 1), (2, 2)), profile=1):
    return FeedbackEvent(
        sequence=seq,
        timestamp=f"2026-08-23T12:00:{seq:02d}+00:00",
        profile=profile,
        shown=tuple(shown),
        verdict=verdict,
        explanation_id=f"exp-{seq}",
    )


class TestPosteriorMean:
    def test_uniform_prior_gives_half(self):
        assert posterior_mean(0, 0) == Fraction(1, 2)

    def test_published_counts_are_exact(self):
        assert posterior_mean(29, 8) == Fraction(30, 39)
        assert posterior_mean(34, 57) == Fraction(35, 93)

    def test_monotone_in_acceptances(self):
        rng = random.Random(7)
        for _ in range(200):
            a, r = rng.randint(0, 60), rng.randint(0, 60)
            assert posterior_mean(a + 1, r) > posterior_mean(a, r)
            assert posterior_mean(a, r + 1) < posterior_mean(a, r)

    def test_negative_counts_rejected(self):
        with pytest.raises(LedgerError):
            posterior_mean(-1, 0)


class TestLedger:
    def test_accept_increments_every_shown_option(self):
        ledger = FeedbackLedger(KEYS)
        ledger.record(event(1, "accepted"))
        assert ledger.counts(1, 1, 1) == (1, 0)
        assert ledger.counts(1, 2, 2) == (1, 0)
        assert ledger.counts(1, 1, 2) == (0, 0)

    def test_reject_increments_rejections(self):
        ledger = FeedbackLedger(KEYS)
        ledger.record(event(1, "rejected"))
        assert ledger.counts(1, 1, 1) == (0, 1)

    def test_sequence_gap_is_a_conflict(self):
        ledger = FeedbackLedger(KEYS)
        ledger.record(event(1))
        with pytest.raises(SequenceConflict):
            ledger.record(event(3))

    def test_duplicate_sequence_is_a_conflict(self):
        ledger = FeedbackLedger(KEYS)
        ledger.record(event(1))
        with pytest.raises(SequenceConflict):
            ledger.record(event(1, "rejected"))

    def test_unknown_key_rejected(self):
        ledger = FeedbackLedger(KEYS)
        with pytest.raises(LedgerError):
            ledger.record(event(1, shown=((1, 1), (2, 9))))

    def test_shown_must_cover_every_slot_once(self):
        with pytest.raises(LedgerError):
            event(1, shown=((1, 1), (1, 2)))

    def test_estimate_is_exact_fraction(self):
        ledger = FeedbackLedger(KEYS, seeds={(1, 1, 1): (29, 8)})
        assert ledger.estimate(1, 1, 1) == Fraction(30, 39)

    def test_fold_counts_matches_live(self):
        rng = random.Random(11)
        events = [
            event(i, rng.choice(["accepted", "rejected"]), ((1, rng.choice([1, 2])), (2, rng.choice([1, 2]))))
            for i in range(1, 40)
        ]
        ledger = FeedbackLedger(KEYS)
        for ev in events:
            ledger.record(ev)
        assert fold_counts(events) == ledger.all_counts()


class TestPersistence:
    def test_log_round_trip(self, tmp_path):
        path = tmp_path / "feedback.jsonl"
        ledger = FeedbackLedger(KEYS, path=path)
        ledger.record(event(1))
        ledger.record(event(2, "rejected"))
        reloaded = FeedbackLedger(KEYS, path=path)
        assert reloaded.sequence == 2
        assert reloaded.all_counts() == ledger.all_counts()

    def test_replay_matches_live(self, tmp_path):
        path = tmp_path / "feedback.jsonl"
        seeds = {(1, 1, 1): (3, 4)}
        ledger = FeedbackLedger(KEYS, seeds=seeds, path=path)
        rng = random.Random(3)
        for i in range(1, 30):
            ledger.record(event(i, rng.choice(["accepted", "rejected"])))
        recovered = replay(path, seeds=seeds)
        for key, value in ledger.all_counts().items():
            assert recovered.get(key, (0, 0)) == value

    def test_corrupt_line_reports_line_number(self, tmp_path):
        path = tmp_path / "feedback.jsonl"
        ledger = FeedbackLedger(KEYS, path=path)
        ledger.record(event(1))
        with open(path, "a") as fh:
            fh.write("{not json\n")
        with pytest.raises(LedgerError) as err:
            read_log(path)
        assert "line 2" in str(err.value)

    def test_bundled_log_moves_seed_to_published_counts(self):
        events = read_log(ADAPTATION_FEEDBACK_LOG)
        assert len(events) == 54
        counts = fold_counts(events, seeds={(1, 3, 2): (29, 8)})
        assert counts[(1, 3, 2)] == (34, 57)
