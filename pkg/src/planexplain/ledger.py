"""Append-only accept/reject feedback log and beta-binomial acceptance estimates.

Events are persisted as JSON lines (one event per line, UTF-8, newline
terminated) before the in-memory counters become visible. Counters can always
be rebuilt by replaying the log over the configured seed counts.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .domain import SCHEMA_VERSION, SchemaError

# Uniform Beta(1,1) prior: posterior mean 0.5 before any feedback.
PRIOR_A = 1
PRIOR_B = 1

CountKey = tuple[int, int, int]  # (profile, slot, option)


class LedgerError(ValueError):
    pass


class SequenceConflict(LedgerError):
    """Out-of-order or duplicate event sequence number."""


@dataclass(frozen=True)
class FeedbackEvent:
    sequence: int
    timestamp: str
    profile: int
    shown: tuple[tuple[int, int], ...]  # one (slot, option) per slot
    verdict: str  # "accepted" | "rejected"
    explanation_id: str

    def __post_init__(self):
        if self.verdict not in ("accepted", "rejected"):
            raise LedgerError(f"verdict must be accepted|rejected, got {self.verdict!r}")
        slots = [p for p, _ in self.shown]
        if sorted(slots) != list(range(1, len(slots) + 1)):
            raise LedgerError(f"shown options must cover every slot exactly once, got {slots}")

    def to_dict(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "sequence": self.sequence,
            "timestamp": self.timestamp,
            "profile": self.profile,
            "shown": [list(pq) for pq in self.shown],
            "verdict": self.verdict,
            "explanation_id": self.explanation_id,
        }

    @classmethod
    def from_dict(cls, obj: Mapping, path: str = "event") -> "FeedbackEvent":
        keys = {"version", "sequence", "timestamp", "profile", "shown", "verdict", "explanation_id"}
        missing = keys - obj.keys()
        if missing:
            raise SchemaError(f"{path}.{sorted(missing)[0]}", "missing required field")
        unknown = obj.keys() - keys
        if unknown:
            raise SchemaError(f"{path}.{sorted(unknown)[0]}", "unknown field")
        return cls(
            sequence=int(obj["sequence"]),
            timestamp=obj["timestamp"],
            profile=int(obj["profile"]),
            shown=tuple((int(p), int(q)) for p, q in obj["shown"]),
            verdict=obj["verdict"],
            explanation_id=obj["explanation_id"],
        )


def fold_counts(
    events: Iterable[FeedbackEvent],
    seeds: Mapping[CountKey, tuple[int, int]] | None = None,
) -> dict[CountKey, tuple[int, int]]:
    """Fold a sequence of events into (acceptances, rejections) per (n, p, q)."""
    counts: dict[CountKey, tuple[int, int]] = {k: tuple(v) for k, v in (seeds or {}).items()}
    for ev in events:
        for p, q in ev.shown:
            a, r = counts.get((ev.profile, p, q), (0, 0))
            if ev.verdict == "accepted":
                a += 1
            else:
                r += 1
            counts[(ev.profile, p, q)] = (a, r)
    return counts


def posterior_mean(acceptances: int, rejections: int) -> Fraction:
    """Beta(1,1) posterior mean of the acceptance probability, exact."""
    if acceptances < 0 or rejections < 0:
        raise LedgerError("counts must be non-negative")
    return Fraction(acceptances + PRIOR_A, acceptances + rejections + PRIOR_A + PRIOR_B)


class FeedbackLedger:
    """Single-writer feedback ledger with durable JSONL persistence.

    ``valid_keys`` is the universe of known (profile, slot, option) triples;
    estimates for keys outside it raise. ``seeds`` are bootstrap counts from
    prior operational knowledge and are not part of the event log.
    """

    def __init__(
        self,
        valid_keys: Iterable[CountKey],
        seeds: Mapping[CountKey, tuple[int, int]] | None = None,
        path: str | Path | None = None,
    ):
        self._valid = set(valid_keys)
        self._seeds = {k: tuple(v) for k, v in (seeds or {}).items()}
        unknown = set(self._seeds) - self._valid
        if unknown:
            raise LedgerError(f"seed counts for unknown keys: {sorted(unknown)}")
        self._path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._events: list[FeedbackEvent] = []
        self._counts = dict(self._seeds)
        if self._path is not None and self._path.exists():
            self._load()

    def _load(self) -> None:
        for ev in read_log(self._path):
            self._apply(ev)

    def _apply(self, event: FeedbackEvent) -> None:
        if event.sequence != self.sequence + 1:
            raise SequenceConflict(
                f"expected sequence {self.sequence + 1}, got {event.sequence}"
            )
        for p, q in event.shown:
            key = (event.profile, p, q)
            if key not in self._valid:
                raise LedgerError(f"unknown (profile, slot, option): {key}")
        self._events.append(event)
        for p, q in event.shown:
            key = (event.profile, p, q)
            a, r = self._counts.get(key, (0, 0))
            if event.verdict == "accepted":
                a += 1
            else:
                r += 1
            self._counts[key] = (a, r)

    @property
    def sequence(self) -> int:
        return self._events[-1].sequence if self._events else 0

    @property
    def events(self) -> tuple[FeedbackEvent, ...]:
        return tuple(self._events)

    def record(self, event: FeedbackEvent) -> dict[CountKey, tuple[int, int]]:
        """Durably append an event, then update and return the counts."""
        with self._lock:
            if event.sequence != self.sequence + 1:
                raise SequenceConflict(
                    f"expected sequence {self.sequence + 1}, got {event.sequence}"
                )
            if self._path is not None:
                line = json.dumps(event.to_dict(), sort_keys=True) + "\n"
                with open(self._path, "a", encoding="utf-8") as fh:
                    fh.write(line)
                    fh.flush()
                    os.fsync(fh.fileno())
            self._apply(event)
            return dict(self._counts)

    def counts(self, profile: int, slot: int, option: int) -> tuple[int, int]:
        key = (profile, slot, option)
        if key not in self._valid:
            raise LedgerError(f"unknown (profile, slot, option): {key}")
        return self._counts.get(key, (0, 0))

    def estimate(self, profile: int, slot: int, option: int) -> Fraction:
        """Posterior mean acceptance probability for one (n, p, q)."""
        a, r = self.counts(profile, slot, option)
        return posterior_mean(a, r)

    def all_counts(self) -> dict[CountKey, tuple[int, int]]:
        return {k: self._counts.get(k, (0, 0)) for k in self._valid}

    def export_counts(self) -> dict:
        return {
            "version": SCHEMA_VERSION,
            "sequence": self.sequence,
            "counts": [
                {"profile": n, "slot": p, "option": q, "acceptances": a, "rejections": r}
                for (n, p, q), (a, r) in sorted(self.all_counts().items())
            ],
        }


def read_log(path: str | Path) -> list[FeedbackEvent]:
    """Parse a JSONL event log; a corrupt line halts replay with its number."""
    events = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                ev = FeedbackEvent.from_dict(obj, path=f"line {lineno}")
            except (json.JSONDecodeError, SchemaError, LedgerError, TypeError) as exc:
                raise LedgerError(f"corrupt event at line {lineno}: {exc}") from exc
            if events and ev.sequence != events[-1].sequence + 1:
                raise SequenceConflict(
                    f"line {lineno}: expected sequence {events[-1].sequence + 1}, got {ev.sequence}"
                )
            events.append(ev)
    return events


def replay(
    path: str | Path,
    seeds: Mapping[CountKey, tuple[int, int]] | None = None,
) -> dict[CountKey, tuple[int, int]]:
    """Rebuild counts by folding the on-disk log over the seed counts."""
    return fold_counts(read_log(path), seeds)
