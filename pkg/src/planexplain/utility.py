"""Prospect-theoretic utilities and the option/state alignment coefficient.

An accepted prompt option is valued relative to a baseline ``b_min``, with
diminishing sensitivity to its acceptance probability (exponent ``alpha`` < 1)
and an alignment penalty ``kappa`` when the option does not suit the user's
hidden cognitive state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .domain import CognitiveSkill, DomainError, SkillVector, SlotOption


class Alignment(enum.Enum):
    MATCH = "match"
    OKAY = "okay"
    MISMATCH = "mismatch"


@dataclass(frozen=True)
class UtilityParams:
    b_min: float = 5.0
    b_max: float = 20.0
    alpha: float = 0.88
    kappa_match: float = 1.0
    kappa_okay: float = 0.75
    kappa_mismatch: float = 0.5

    def __post_init__(self):
        if not self.b_max > self.b_min >= 0:
            raise DomainError(f"need b_max > b_min >= 0, got ({self.b_min}, {self.b_max})")
        if not 0 < self.alpha <= 1:
            raise DomainError(f"alpha must be in (0,1], got {self.alpha}")
        if not 0 < self.kappa_mismatch <= self.kappa_okay <= self.kappa_match:
            raise DomainError("need 0 < kappa_mismatch <= kappa_okay <= kappa_match")
        if self.kappa_match != 1.0:
            raise DomainError("kappa_match must be 1.0 (no penalty on full alignment)")

    def kappa_for(self, alignment: Alignment) -> float:
        return {
            Alignment.MATCH: self.kappa_match,
            Alignment.OKAY: self.kappa_okay,
            Alignment.MISMATCH: self.kappa_mismatch,
        }[alignment]

    def to_dict(self) -> dict:
        return {
            "b_min": self.b_min,
            "b_max": self.b_max,
            "alpha": self.alpha,
            "kappa_match": self.kappa_match,
            "kappa_okay": self.kappa_okay,
            "kappa_mismatch": self.kappa_mismatch,
        }

    @classmethod
    def from_dict(cls, obj: Mapping) -> "UtilityParams":
        return cls(**obj)


def classify_alignment(
    option: SlotOption, skills: Sequence[CognitiveSkill], state: SkillVector
) -> Alignment:
    """Classify how well an option suits a hidden skill vector.

    Only skills named in the option's alignment data participate: match when
    every named skill is at an intended level, mismatch when none is, okay
    otherwise. An option naming no skills is a match by convention (it cannot
    conflict with any state).
    """
    by_name = {s.name: i for i, s in enumerate(skills)}
    named = 0
    hits = 0
    for skill_name, intended in option.alignment.items():
        if skill_name not in by_name:
            raise DomainError(
                f"option {option.id}: alignment references unknown skill {skill_name!r}"
            )
        named += 1
        if state[by_name[skill_name]] in intended:
            hits += 1
    if hits == named:
        return Alignment.MATCH
    if hits == 0:
        return Alignment.MISMATCH
    return Alignment.OKAY


def kappa(
    option: SlotOption,
    skills: Sequence[CognitiveSkill],
    state: SkillVector,
    params: UtilityParams,
) -> float:
    return params.kappa_for(classify_alignment(option, skills, state))


def utility(
    option: SlotOption,
    skills: Sequence[CognitiveSkill],
    state: SkillVector,
    r: float,
    params: UtilityParams,
) -> float:
    """b_min + kappa * (b_max - b_min) * r**alpha for one hidden state."""
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"acceptance probability must be in [0,1], got {r}")
    k = kappa(option, skills, state, params)
    return params.b_min + k * (params.b_max - params.b_min) * r**params.alpha


def expected_kappa(
    option: SlotOption,
    skills: Sequence[CognitiveSkill],
    belief: Mapping[SkillVector, float],
    params: UtilityParams,
) -> float:
    """Belief-weighted alignment coefficient."""
    return sum(p * kappa(option, skills, state, params) for state, p in belief.items())


def expected_utility(
    option: SlotOption,
    skills: Sequence[CognitiveSkill],
    belief: Mapping[SkillVector, float],
    r: float,
    params: UtilityParams,
    tol: float = 1e-9,
) -> float:
    """Belief-weighted utility over hidden skill vectors."""
    total = sum(belief.values())
    if abs(total - 1.0) > tol:
        raise DomainError(f"belief mass {total!r} != 1")
    return sum(p * utility(option, skills, state, r, params) for state, p in belief.items())
