"""Acceptance-maximizing policy synthesis for the explanation POMDP.

Two independent solution routes are shipped and cross-checked:

* ``solve_decomposed`` exploits the model shape (skills observed before any
  slot choice, rewards additive per slot) and picks each slot's option by
  direct argmax per observation.
* ``solve_value_iteration`` runs exact finite-horizon backward induction over
  the reachable belief tree, without assuming slotwise independence.

Both rank options by the scale-free gain score ``r**alpha * E[kappa]``, so
the synthesized policy map is invariant to the utility range (b_min, b_max).
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .domain import (
    CognitiveModel,
    DomainError,
    ObservationVector,
    PromptCatalog,
    SkillVector,
    check_vector,
)
from .utility import UtilityParams, expected_kappa


class ImpossibleObservation(DomainError):
    """An observed level has zero marginal probability under the model."""


class UnknownObservation(KeyError):
    """The observation is not in the policy map (zero probability at solve time)."""


Belief = tuple[tuple[float, ...], ...]  # per skill: posterior over true levels

Estimator = Callable[[int, int], float]  # (slot, option) -> acceptance probability


def posterior(model: CognitiveModel, profile: int, obs: ObservationVector) -> Belief:
    """Factorized Bayes posterior over true levels given predicted levels."""
    obs = check_vector(obs, model.skills, "observation")
    beliefs = []
    for skill, j in zip(model.skills, obs):
        table = model.joint(profile, skill.index)
        col = [table[i][j - 1] for i in range(skill.num_levels)]
        mass = sum(col)
        if mass <= 0.0:
            raise ImpossibleObservation(
                f"skill {skill.name}: predicted level {j} has zero marginal probability"
            )
        beliefs.append(tuple(v / mass for v in col))
    return tuple(beliefs)


def joint_belief(belief: Belief) -> dict[SkillVector, float]:
    """Expand per-skill posteriors into a distribution over skill vectors."""
    states = itertools.product(*(range(1, len(b) + 1) for b in belief))
    out = {}
    for state in states:
        p = 1.0
        for k, lv in enumerate(state):
            p *= belief[k][lv - 1]
        out[state] = p
    return out


@dataclass(frozen=True)
class PolicySnapshot:
    profile: int
    choices: Mapping[ObservationVector, tuple[tuple[int, int], ...]]
    argmax_sets: Mapping[ObservationVector, tuple[frozenset[int], ...]]
    value: float
    provenance: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "choices", dict(self.choices))
        object.__setattr__(self, "argmax_sets", dict(self.argmax_sets))
        object.__setattr__(self, "provenance", dict(self.provenance))

    def to_dict(self) -> dict:
        return {
            "profile": self.profile,
            "value": self.value,
            "choices": [
                {"observation": list(obs), "options": [list(pq) for pq in opts]}
                for obs, opts in sorted(self.choices.items())
            ],
            "provenance": dict(self.provenance),
        }


def model_hash(model: CognitiveModel) -> str:
    from .domain import canonical_json, cognitive_model_to_dict

    return hashlib.sha256(canonical_json(cognitive_model_to_dict(model)).encode()).hexdigest()


def params_hash(params: UtilityParams) -> str:
    return hashlib.sha256(json.dumps(params.to_dict(), sort_keys=True).encode()).hexdigest()


def _observation_distribution(model: CognitiveModel, profile: int):
    """All observation vectors with their probabilities, zero-mass ones included."""
    marginals = []
    for skill in model.skills:
        table = model.joint(profile, skill.index)
        cols = [
            sum(table[i][j] for i in range(skill.num_levels))
            for j in range(skill.num_levels)
        ]
        marginals.append(cols)
    for obs in itertools.product(*(range(1, len(m) + 1) for m in marginals)):
        p = 1.0
        for k, j in enumerate(obs):
            p *= marginals[k][j - 1]
        yield obs, p


def _slot_scores(catalog, skills, belief_dist, estimate, params):
    """Gain score per (slot, option) under a joint belief; shared by both solvers."""
    scores = {}
    for slot in catalog.slots:
        for opt in slot.options:
            r = float(estimate(slot.index, opt.index))
            ek = expected_kappa(opt, skills, belief_dist, params)
            scores[(slot.index, opt.index)] = r**params.alpha * ek
    return scores


def _argmax_options(slot, scores):
    values = [scores[(slot.index, opt.index)] for opt in slot.options]
    best = max(values)
    winners = frozenset(opt.index for opt, v in zip(slot.options, values) if v == best)
    return winners, best


def solve_decomposed(
    model: CognitiveModel,
    catalog: PromptCatalog,
    profile: int,
    estimate: Estimator,
    params: UtilityParams,
    provenance: Mapping[str, object] | None = None,
) -> PolicySnapshot:
    """Per-observation, per-slot argmax; fast path."""
    choices = {}
    argmax_sets = {}
    value = 0.0
    for obs, p_obs in _observation_distribution(model, profile):
        if p_obs <= 0.0:
            continue
        belief = joint_belief(posterior(model, profile, obs))
        scores = _slot_scores(catalog, model.skills, belief, estimate, params)
        picked = []
        sets = []
        obs_value = 0.0
        for slot in catalog.slots:
            winners, best = _argmax_options(slot, scores)
            q = min(winners)
            picked.append((slot.index, q))
            sets.append(winners)
            obs_value += params.b_min + (params.b_max - params.b_min) * best
        choices[obs] = tuple(picked)
        argmax_sets[obs] = tuple(sets)
        value += p_obs * obs_value
    return PolicySnapshot(
        profile=profile,
        choices=choices,
        argmax_sets=argmax_sets,
        value=value,
        provenance=dict(provenance or {}),
    )


def solve_value_iteration(
    model: CognitiveModel,
    catalog: PromptCatalog,
    profile: int,
    estimate: Estimator,
    params: UtilityParams,
    provenance: Mapping[str, object] | None = None,
) -> PolicySnapshot:
    """Exact backward induction over the reachable belief tree."""
    k = len(model.skills)
    choices: dict[ObservationVector, tuple] = {}
    argmax_sets: dict[ObservationVector, tuple] = {}

    def slot_stage_value(obs: ObservationVector) -> float:
        belief = joint_belief(posterior(model, profile, obs))
        scores = _slot_scores(catalog, model.skills, belief, estimate, params)
        # Backward over slot stages; later-stage value is independent of the
        # current choice, so each stage contributes its best immediate reward.
        value_to_go = 0.0
        picked = []
        sets = []
        for slot in reversed(catalog.slots):
            winners, best = _argmax_options(slot, scores)
            picked.append((slot.index, min(winners)))
            sets.append(winners)
            value_to_go = (params.b_min + (params.b_max - params.b_min) * best) + value_to_go
        choices[obs] = tuple(reversed(picked))
        argmax_sets[obs] = tuple(reversed(sets))
        return value_to_go

    def observe_stage_value(stage: int, prefix: tuple[int, ...]) -> float:
        if stage == k:
            return slot_stage_value(prefix)
        skill = model.skills[stage]
        table = model.joint(profile, skill.index)
        value = 0.0
        for j in range(1, skill.num_levels + 1):
            p_j = sum(table[i][j - 1] for i in range(skill.num_levels))
            if p_j <= 0.0:
                continue
            value += p_j * observe_stage_value(stage + 1, prefix + (j,))
        return value

    value = observe_stage_value(0, ())
    return PolicySnapshot(
        profile=profile,
        choices=choices,
        argmax_sets=argmax_sets,
        value=value,
        provenance=dict(provenance or {}),
    )


def prompt_options(snapshot: PolicySnapshot, obs: ObservationVector) -> tuple[tuple[int, int], ...]:
    """Slot choices for one observation; stable across calls."""
    key = tuple(obs)
    if key not in snapshot.choices:
        raise UnknownObservation(key)
    return snapshot.choices[key]
