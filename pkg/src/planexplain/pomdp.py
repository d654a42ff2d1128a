"""Profile POMDP assembly and PRISM-language export.

The model flow is a fixed sequence of steps: the first K steps draw each
skill's (true, predicted) levels jointly from the profile's table, the next P
steps are prompt-slot choice points carrying acceptance rewards, and a final
step is the terminal sink. Export is a pure function of the PomdpSpec: the
same input always yields identical bytes, so the text is golden-testable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping

from .domain import (
    CognitiveModel,
    DomainError,
    JointTable,
    PromptCatalog,
    SkillVector,
    validate_cognitive_model,
)
from .utility import UtilityParams, utility


class BuildError(ValueError):
    pass


@dataclass(frozen=True)
class PomdpSpec:
    profile: int
    num_profiles: int
    skills: tuple  # CognitiveSkill tuple (K entries, M levels each)
    slots: tuple  # PromptSlot tuple (P entries)
    joints: Mapping[int, JointTable]  # skill index -> joint table for the active profile
    rewards: Mapping[tuple[int, int, SkillVector], float]  # (p, q, U) -> utility
    params: UtilityParams

    @property
    def num_skills(self) -> int:
        return len(self.skills)

    @property
    def num_slots(self) -> int:
        return len(self.slots)

    @property
    def total_steps(self) -> int:
        """Flow steps K + P plus the terminal end state."""
        return self.num_skills + self.num_slots + 1


def build(
    model: CognitiveModel,
    catalog: PromptCatalog,
    estimate: Callable[[int, int], float],
    params: UtilityParams,
    profile: int,
) -> PomdpSpec:
    """Assemble the POMDP for one profile.

    ``estimate(p, q)`` supplies the current acceptance probability for each
    slot option of this profile.
    """
    report = validate_cognitive_model(model)
    if not report.ok:
        raise BuildError(f"invalid cognitive model: {report.issues[0].message}")
    if not any(p.id == profile for p in model.profiles):
        raise BuildError(f"unknown profile {profile}")
    catalog.check_alignment(model.skills)

    joints = {}
    for skill in model.skills:
        table = model.joint(profile, skill.index)
        if all(v == 0.0 for row in table for v in row):
            raise BuildError(f"skill {skill.name}: all-zero joint table for profile {profile}")
        joints[skill.index] = table

    level_ranges = [range(1, s.num_levels + 1) for s in model.skills]
    rewards = {}
    for slot in catalog.slots:
        for opt in slot.options:
            r = float(estimate(slot.index, opt.index))
            for state in itertools.product(*level_ranges):
                value = utility(opt, model.skills, state, r, params)
                if not params.b_min <= value <= params.b_max:
                    raise BuildError(f"reward for {opt.id} at {state} outside utility bounds")
                rewards[(slot.index, opt.index, state)] = value

    return PomdpSpec(
        profile=profile,
        num_profiles=len(model.profiles),
        skills=model.skills,
        slots=catalog.slots,
        joints=joints,
        rewards=rewards,
        params=params,
    )


def _fmt(value: float) -> str:
    """Shortest exact decimal form of a float; deterministic across runs."""
    text = repr(float(value))
    return text


def export_prism(spec: PomdpSpec) -> str:
    """Emit the POMDP as PRISM-language text, byte-stable for a given spec."""
    k = spec.num_skills
    p = spec.num_slots
    s_total = spec.total_steps
    lines = []
    out = lines.append

    out("pomdp")
    out("")
    preds = ", ".join(f"cogSkillPred_{i}" for i in range(1, k + 1))
    out("observables")
    out(f"\tstep{', ' + preds if preds else ''}")
    out("endobservables")
    out("")
    out(f"const int N_profiles = {spec.num_profiles};")
    out(f"const int profile = {spec.profile};")
    out(f"const int S_total = {s_total};")
    out("")
    out(f"formula done = (step = {s_total});")
    out("")

    # Flow control: one observation step per skill, one choice step per slot
    # (all options of a slot share its step guard), one terminal step.
    out("module Turn")
    out(f"\tstep : [1..{s_total}] init 1;")
    step = 1
    for skill in spec.skills:
        out(f"\t[ObserveCogSkill_{skill.index}] step={step} -> (step'={step + 1});")
        step += 1
    for slot in spec.slots:
        for opt in slot.options:
            out(f"\t[SelectPrompt_{slot.index}_{opt.index}] step={step} -> (step'={step + 1});")
        step += 1
    out(f"\t[finish] step={step} -> true;")
    out("endmodule")
    out("")

    for skill in spec.skills:
        m = skill.num_levels
        table = spec.joints[skill.index]
        out(f"// skill {skill.index}: {skill.name}")
        out(f"module CognitiveSkill_{skill.index}")
        out(f"\tcogSkill_{skill.index} : [1..{m}] init 1;")
        out(f"\tcogSkillPred_{skill.index} : [1..{m}] init 1;")
        branches = " + ".join(
            f"{_fmt(table[i - 1][j - 1])}:(cogSkill_{skill.index}'={i})&(cogSkillPred_{skill.index}'={j})"
            for i in range(1, m + 1)
            for j in range(1, m + 1)
        )
        out(f"\t[ObserveCogSkill_{skill.index}] profile={spec.profile} -> {branches};")
        out("endmodule")
        out("")

    out('rewards "acceptance"')
    level_ranges = [range(1, s.num_levels + 1) for s in spec.skills]
    for slot in spec.slots:
        for opt in slot.options:
            for state in itertools.product(*level_ranges):
                guard = " & ".join(
                    [f"profile={spec.profile}"]
                    + [f"cogSkill_{i + 1}={lv}" for i, lv in enumerate(state)]
                )
                value = spec.rewards[(slot.index, opt.index, state)]
                out(f"\t[SelectPrompt_{slot.index}_{opt.index}] {guard} : {_fmt(value)};")
    out("endrewards")
    out("")
    return "\n".join(lines)


def count_flow_steps(prism_text: str) -> int:
    """Count distinct flow steps guarded in the Turn module of exported text."""
    steps = set()
    in_turn = False
    for line in prism_text.splitlines():
        stripped = line.strip()
        if stripped == "module Turn":
            in_turn = True
            continue
        if in_turn and stripped == "endmodule":
            break
        if in_turn and stripped.startswith("["):
            guard = stripped.split("]", 1)[1].strip()
            token = guard.split()[0]
            if token.startswith("step="):
                steps.add(int(token.removeprefix("step=")))
    return len(steps)


def count_reward_entries(prism_text: str) -> int:
    """Count guarded entries inside the acceptance rewards block."""
    count = 0
    in_rewards = False
    for line in prism_text.splitlines():
        stripped = line.strip()
        if stripped.startswith('rewards "acceptance"'):
            in_rewards = True
            continue
        if in_rewards and stripped == "endrewards":
            break
        if in_rewards and stripped.startswith("[SelectPrompt_"):
            count += 1
    return count
