"""Shared domain types, validation, and canonical JSON (de)serialization.

All types here are immutable values. Serialization is canonical: sorted keys,
an explicit ``version`` field, and rejection of unknown fields, so that
serialized output is byte-stable and suitable for golden-file comparisons.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

SCHEMA_VERSION = 1

PROB_TOL = 1e-9


class DomainError(ValueError):
    """Raised when a value violates a domain invariant."""


class SchemaError(DomainError):
    """Raised when (de)serialization fails; carries the offending path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# ---------------------------------------------------------------------------
# Core value types


@dataclass(frozen=True)
class Profile:
    id: int
    name: str
    description: str

    def __post_init__(self):
        if self.id < 1:
            raise DomainError(f"profile id must be >= 1, got {self.id}")
        if not self.description:
            raise DomainError(f"profile {self.id}: description must be non-empty")


@dataclass(frozen=True)
class CognitiveSkill:
    """A named cognitive skill with discrete levels (1-based)."""

    index: int
    name: str
    levels: tuple[str, ...]

    def __post_init__(self):
        if self.index < 1:
            raise DomainError(f"skill index must be >= 1, got {self.index}")
        if len(self.levels) < 1:
            raise DomainError(f"skill {self.name}: needs at least one level")
        if len(set(self.levels)) != len(self.levels):
            raise DomainError(f"skill {self.name}: level labels must be unique")

    @property
    def num_levels(self) -> int:
        return len(self.levels)


# Joint table for one (profile, skill): rows are true levels, columns are
# predicted levels, entries are joint probabilities.
JointTable = tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class CognitiveModel:
    """Per-(profile, skill) joint probability tables over (true, predicted) levels."""

    profiles: tuple[Profile, ...]
    skills: tuple[CognitiveSkill, ...]
    joints: Mapping[tuple[int, int], JointTable]  # (profile id, skill index) -> table

    def __post_init__(self):
        ids = [p.id for p in self.profiles]
        if ids != list(range(1, len(ids) + 1)):
            raise DomainError(f"profile ids must be contiguous from 1, got {ids}")
        ks = [s.index for s in self.skills]
        if ks != list(range(1, len(ks) + 1)):
            raise DomainError(f"skill indices must be contiguous from 1, got {ks}")
        object.__setattr__(self, "joints", dict(self.joints))

    def joint(self, profile: int, skill: int) -> JointTable:
        return self.joints[(profile, skill)]

    def skill(self, index: int) -> CognitiveSkill:
        return self.skills[index - 1]

    def profile(self, pid: int) -> Profile:
        return self.profiles[pid - 1]

    def with_joint(self, profile: int, skill: int, table: JointTable) -> "CognitiveModel":
        joints = dict(self.joints)
        joints[(profile, skill)] = tuple(tuple(row) for row in table)
        return CognitiveModel(self.profiles, self.skills, joints)


@dataclass(frozen=True)
class ValidationIssue:
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.issues


def validate_cognitive_model(model: CognitiveModel) -> ValidationReport:
    """Check that every (profile, skill) joint table is a probability table."""
    issues = []
    for p in model.profiles:
        for s in model.skills:
            key = (p.id, s.index)
            path = f"joints[{p.id},{s.index}]"
            table = model.joints.get(key)
            if table is None:
                issues.append(ValidationIssue(path, "missing joint table"))
                continue
            m = s.num_levels
            if len(table) != m or any(len(row) != m for row in table):
                issues.append(ValidationIssue(path, f"table must be {m}x{m}"))
                continue
            bad = [
                (i, j)
                for i, row in enumerate(table)
                for j, v in enumerate(row)
                if not (0.0 <= v <= 1.0)
            ]
            if bad:
                issues.append(ValidationIssue(path, f"entries outside [0,1] at {bad}"))
                continue
            total = sum(v for row in table for v in row)
            if abs(total - 1.0) > PROB_TOL:
                issues.append(ValidationIssue(path, f"mass {total!r} != 1"))
    return ValidationReport(tuple(issues))


# ---------------------------------------------------------------------------
# Prompt catalog


@dataclass(frozen=True)
class SlotOption:
    """One selectable value for a prompt slot.

    ``alignment`` maps skill names to the set of true levels this option is
    intended for; it drives the match/okay/mismatch classification. Skills not
    named are neutral.
    """

    slot: int
    index: int
    prompt_text: str
    alignment: Mapping[str, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        if not self.prompt_text:
            raise DomainError(f"option ({self.slot},{self.index}): prompt_text must be non-empty")
        object.__setattr__(
            self, "alignment", {k: frozenset(v) for k, v in dict(self.alignment).items()}
        )

    @property
    def id(self) -> tuple[int, int]:
        return (self.slot, self.index)


@dataclass(frozen=True)
class PromptSlot:
    index: int
    name: str
    options: tuple[SlotOption, ...]

    def __post_init__(self):
        if len(self.options) < 2:
            raise DomainError(f"slot {self.name}: needs at least two options")
        got = [o.index for o in self.options]
        if got != list(range(1, len(got) + 1)):
            raise DomainError(f"slot {self.name}: option indices must be contiguous from 1")
        if any(o.slot != self.index for o in self.options):
            raise DomainError(f"slot {self.name}: option slot ids must match slot index")


@dataclass(frozen=True)
class PromptCatalog:
    slots: tuple[PromptSlot, ...]

    def __post_init__(self):
        got = [s.index for s in self.slots]
        if got != list(range(1, len(got) + 1)):
            raise DomainError(f"slot indices must be contiguous from 1, got {got}")

    def slot(self, p: int) -> PromptSlot:
        return self.slots[p - 1]

    def option(self, p: int, q: int) -> SlotOption:
        return self.slots[p - 1].options[q - 1]

    def option_ids(self):
        for s in self.slots:
            for o in s.options:
                yield o.id

    def check_alignment(self, skills: Sequence[CognitiveSkill]) -> None:
        """Reject alignment entries that reference unknown skills or levels."""
        by_name = {s.name: s for s in skills}
        for s in self.slots:
            for o in s.options:
                for skill_name, levels in o.alignment.items():
                    skill = by_name.get(skill_name)
                    if skill is None:
                        raise DomainError(
                            f"option {o.id}: alignment references unknown skill {skill_name!r}"
                        )
                    out = [lv for lv in levels if not 1 <= lv <= skill.num_levels]
                    if out:
                        raise DomainError(
                            f"option {o.id}: alignment levels {out} out of range for {skill_name}"
                        )


# Observation and hidden-state vectors: one 1-based level per skill.
ObservationVector = tuple[int, ...]
SkillVector = tuple[int, ...]


def check_vector(vec: Sequence[int], skills: Sequence[CognitiveSkill], what: str) -> tuple[int, ...]:
    if len(vec) != len(skills):
        raise DomainError(f"{what} must have length {len(skills)}, got {len(vec)}")
    for level, skill in zip(vec, skills):
        if not 1 <= level <= skill.num_levels:
            raise DomainError(f"{what}: level {level} out of range for skill {skill.name}")
    return tuple(vec)


# ---------------------------------------------------------------------------
# Planner input / plan


@dataclass(frozen=True)
class TaskSpec:
    id: str
    locations: tuple[str, ...]

    def __post_init__(self):
        if not self.locations:
            raise DomainError(f"task {self.id}: needs at least one location")


@dataclass(frozen=True)
class AgentCapability:
    task: str
    cost: float
    success_probability: float
    duration: float
    max_retries: int

    def __post_init__(self):
        if not 0.0 <= self.success_probability <= 1.0:
            raise DomainError(f"capability {self.task}: success probability outside [0,1]")
        if self.cost < 0:
            raise DomainError(f"capability {self.task}: cost must be >= 0")
        if self.max_retries < 0:
            raise DomainError(f"capability {self.task}: retries must be >= 0")


@dataclass(frozen=True)
class AgentSpec:
    id: str
    initial_location: str
    capabilities: tuple[AgentCapability, ...]

    def capability(self, task: str) -> AgentCapability | None:
        for c in self.capabilities:
            if c.task == task:
                return c
        return None


@dataclass(frozen=True)
class PlannerInput:
    locations: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]  # bidirectional
    agents: tuple[AgentSpec, ...]
    tasks: tuple[TaskSpec, ...]
    min_success_probability: float

    def __post_init__(self):
        if not 0.0 <= self.min_success_probability <= 1.0:
            raise DomainError("min_success_probability outside [0,1]")
        known = set(self.locations)
        for a, b in self.edges:
            if a not in known or b not in known:
                raise DomainError(f"edge ({a},{b}) references unknown location")
        task_ids = {t.id for t in self.tasks}
        for t in self.tasks:
            for loc in t.locations:
                if loc not in known:
                    raise DomainError(f"task {t.id}: unknown location {loc}")
        for ag in self.agents:
            if ag.initial_location not in known:
                raise DomainError(f"agent {ag.id}: unknown initial location")
            for c in ag.capabilities:
                if c.task not in task_ids:
                    raise DomainError(f"agent {ag.id}: capability for unknown task {c.task}")


@dataclass(frozen=True)
class Assignment:
    agent: str
    task: str
    location: str


@dataclass(frozen=True)
class Plan:
    id: str
    assignments: tuple[Assignment, ...]
    total_cost: float
    success_probability: float

    def __post_init__(self):
        if not 0.0 <= self.success_probability <= 1.0:
            raise DomainError(f"plan {self.id}: success probability outside [0,1]")
        if self.total_cost < 0:
            raise DomainError(f"plan {self.id}: cost must be >= 0")


# ---------------------------------------------------------------------------
# Canonical JSON codec


def canonical_json(payload: Mapping[str, Any]) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _require(obj: Mapping[str, Any], keys: set[str], path: str) -> None:
    missing = keys - obj.keys()
    if missing:
        raise SchemaError(f"{path}.{sorted(missing)[0]}", "missing required field")
    unknown = obj.keys() - keys
    if unknown:
        raise SchemaError(f"{path}.{sorted(unknown)[0]}", "unknown field")


def profile_to_dict(p: Profile) -> dict:
    return {"version": SCHEMA_VERSION, "id": p.id, "name": p.name, "description": p.description}


def profile_from_dict(obj: Mapping[str, Any], path: str = "profile") -> Profile:
    _require(obj, {"version", "id", "name", "description"}, path)
    return Profile(id=obj["id"], name=obj["name"], description=obj["description"])


def skill_to_dict(s: CognitiveSkill) -> dict:
    return {"version": SCHEMA_VERSION, "index": s.index, "name": s.name, "levels": list(s.levels)}


def skill_from_dict(obj: Mapping[str, Any], path: str = "skill") -> CognitiveSkill:
    _require(obj, {"version", "index", "name", "levels"}, path)
    return CognitiveSkill(index=obj["index"], name=obj["name"], levels=tuple(obj["levels"]))


def cognitive_model_to_dict(m: CognitiveModel) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "profiles": [profile_to_dict(p) for p in m.profiles],
        "skills": [skill_to_dict(s) for s in m.skills],
        "joints": {
            f"{pid},{k}": [list(row) for row in table]
            for (pid, k), table in sorted(m.joints.items())
        },
    }


def cognitive_model_from_dict(obj: Mapping[str, Any], path: str = "cognitive_model") -> CognitiveModel:
    _require(obj, {"version", "profiles", "skills", "joints"}, path)
    profiles = tuple(profile_from_dict(p, f"{path}.profiles[{i}]") for i, p in enumerate(obj["profiles"]))
    skills = tuple(skill_from_dict(s, f"{path}.skills[{i}]") for i, s in enumerate(obj["skills"]))
    joints = {}
    for key, table in obj["joints"].items():
        try:
            pid, k = (int(x) for x in key.split(","))
        except ValueError:
            raise SchemaError(f"{path}.joints.{key}", "key must be 'profile,skill'") from None
        joints[(pid, k)] = tuple(tuple(float(v) for v in row) for row in table)
    return CognitiveModel(profiles=profiles, skills=skills, joints=joints)


def option_to_dict(o: SlotOption) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "slot": o.slot,
        "index": o.index,
        "prompt_text": o.prompt_text,
        "alignment": {k: sorted(v) for k, v in sorted(o.alignment.items())},
    }


def option_from_dict(obj: Mapping[str, Any], path: str = "option") -> SlotOption:
    _require(obj, {"version", "slot", "index", "prompt_text", "alignment"}, path)
    return SlotOption(
        slot=obj["slot"],
        index=obj["index"],
        prompt_text=obj["prompt_text"],
        alignment={k: frozenset(v) for k, v in obj["alignment"].items()},
    )


def slot_to_dict(s: PromptSlot) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "index": s.index,
        "name": s.name,
        "options": [option_to_dict(o) for o in s.options],
    }


def slot_from_dict(obj: Mapping[str, Any], path: str = "slot") -> PromptSlot:
    _require(obj, {"version", "index", "name", "options"}, path)
    return PromptSlot(
        index=obj["index"],
        name=obj["name"],
        options=tuple(option_from_dict(o, f"{path}.options[{i}]") for i, o in enumerate(obj["options"])),
    )


def catalog_to_dict(c: PromptCatalog) -> dict:
    return {"version": SCHEMA_VERSION, "slots": [slot_to_dict(s) for s in c.slots]}


def catalog_from_dict(obj: Mapping[str, Any], path: str = "catalog") -> PromptCatalog:
    _require(obj, {"version", "slots"}, path)
    return PromptCatalog(
        slots=tuple(slot_from_dict(s, f"{path}.slots[{i}]") for i, s in enumerate(obj["slots"]))
    )


def planner_input_to_dict(pi: PlannerInput) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "locations": list(pi.locations),
        "edges": [list(e) for e in pi.edges],
        "agents": [
            {
                "id": a.id,
                "initial_location": a.initial_location,
                "capabilities": [
                    {
                        "task": c.task,
                        "cost": c.cost,
                        "success_probability": c.success_probability,
                        "duration": c.duration,
                        "max_retries": c.max_retries,
                    }
                    for c in a.capabilities
                ],
            }
            for a in pi.agents
        ],
        "tasks": [{"id": t.id, "locations": list(t.locations)} for t in pi.tasks],
        "min_success_probability": pi.min_success_probability,
    }


def planner_input_from_dict(obj: Mapping[str, Any], path: str = "planner_input") -> PlannerInput:
    _require(
        obj,
        {"version", "locations", "edges", "agents", "tasks", "min_success_probability"},
        path,
    )
    agents = []
    for i, a in enumerate(obj["agents"]):
        apath = f"{path}.agents[{i}]"
        _require(a, {"id", "initial_location", "capabilities"}, apath)
        caps = []
        for j, c in enumerate(a["capabilities"]):
            cpath = f"{apath}.capabilities[{j}]"
            _require(c, {"task", "cost", "success_probability", "duration", "max_retries"}, cpath)
            caps.append(
                AgentCapability(
                    task=c["task"],
                    cost=float(c["cost"]),
                    success_probability=float(c["success_probability"]),
                    duration=float(c["duration"]),
                    max_retries=int(c["max_retries"]),
                )
            )
        agents.append(AgentSpec(id=a["id"], initial_location=a["initial_location"], capabilities=tuple(caps)))
    tasks = []
    for i, t in enumerate(obj["tasks"]):
        tpath = f"{path}.tasks[{i}]"
        _require(t, {"id", "locations"}, tpath)
        tasks.append(TaskSpec(id=t["id"], locations=tuple(t["locations"])))
    return PlannerInput(
        locations=tuple(obj["locations"]),
        edges=tuple((e[0], e[1]) for e in obj["edges"]),
        agents=tuple(agents),
        tasks=tuple(tasks),
        min_success_probability=float(obj["min_success_probability"]),
    )


def plan_to_dict(p: Plan) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "id": p.id,
        "assignments": [
            {"agent": a.agent, "task": a.task, "location": a.location} for a in p.assignments
        ],
        "total_cost": p.total_cost,
        "success_probability": p.success_probability,
    }


def plan_from_dict(obj: Mapping[str, Any], path: str = "plan") -> Plan:
    _require(obj, {"version", "id", "assignments", "total_cost", "success_probability"}, path)
    assignments = []
    for i, a in enumerate(obj["assignments"]):
        apath = f"{path}.assignments[{i}]"
        _require(a, {"agent", "task", "location"}, apath)
        assignments.append(Assignment(agent=a["agent"], task=a["task"], location=a["location"]))
    return Plan(
        id=obj["id"],
        assignments=tuple(assignments),
        total_cost=float(obj["total_cost"]),
        success_probability=float(obj["success_probability"]),
    )
