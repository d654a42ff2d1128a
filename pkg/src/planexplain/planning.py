"""Natural-language problem to planner input, validity checks, and a naive
reference planner.

The reference planner stands in for an external black-box planner: it
exhaustively searches task-to-agent assignments among capable agents, scores
them with an independent-retry success model, and keeps every assignment that
meets the mission success threshold.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .domain import (
    Assignment,
    Plan,
    PlannerInput,
    SchemaError,
    planner_input_from_dict,
    planner_input_to_dict,
)
from .prompting import GenerationBackend

MOVE_COST_PER_EDGE = 10.0


class InfeasibleProblem(ValueError):
    def __init__(self, task: str):
        super().__init__(f"no agent capable of task {task}")
        self.task = task


def task_success(probability: float, max_retries: int) -> float:
    """Success over independent attempts: 1 - (1 - p)**(retries + 1)."""
    return 1.0 - (1.0 - probability) ** (max_retries + 1)


def shortest_hops(edges, start: str, goal: str) -> int:
    """Edge count of the shortest path over bidirectional edges."""
    if start == goal:
        return 0
    adj: dict[str, set[str]] = {}
    for a, b in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        node, dist = queue.popleft()
        for nxt in sorted(adj.get(node, ())):
            if nxt == goal:
                return dist + 1
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, dist + 1))
    raise ValueError(f"no path from {start} to {goal}")


def reference_plan(problem: PlannerInput) -> list[Plan]:
    """Exhaustively enumerate assignments meeting the success threshold.

    Each agent executes its assigned tasks sequentially in task order,
    travelling from its current location through each task location; movement
    costs a fixed amount per traversed edge. Durations are carried through
    elsewhere but do not enter the score.
    """
    capable: dict[str, list] = {}
    for task in problem.tasks:
        agents = [a for a in problem.agents if a.capability(task.id) is not None]
        if not agents:
            raise InfeasibleProblem(task.id)
        capable[task.id] = agents

    def assignments(idx: int, current: list):
        if idx == len(problem.tasks):
            yield tuple(current)
            return
        for agent in capable[problem.tasks[idx].id]:
            current.append(agent)
            yield from assignments(idx + 1, current)
            current.pop()

    plans = []
    seen = set()
    for combo in assignments(0, []):
        success = 1.0
        cost = 0.0
        position = {a.id: a.initial_location for a in problem.agents}
        plan_assignments = []
        for task, agent in zip(problem.tasks, combo):
            cap = agent.capability(task.id)
            success *= task_success(cap.success_probability, cap.max_retries)
            cost += cap.cost
            for loc in task.locations:
                cost += MOVE_COST_PER_EDGE * shortest_hops(problem.edges, position[agent.id], loc)
                position[agent.id] = loc
            plan_assignments.append(
                Assignment(agent=agent.id, task=task.id, location=task.locations[-1])
            )
        if success < problem.min_success_probability:
            continue
        key = tuple((a.agent, a.task) for a in plan_assignments)
        if key in seen:
            continue
        seen.add(key)
        plans.append((cost, success, plan_assignments))

    plans.sort(key=lambda item: (item[0], -item[1], tuple(a.agent for a in item[2])))
    return [
        Plan(
            id=f"plan-{i + 1}",
            assignments=tuple(pa),
            total_cost=cost,
            success_probability=success,
        )
        for i, (cost, success, pa) in enumerate(plans)
    ]


@dataclass(frozen=True)
class StageOneReport:
    parsable: bool
    processable: bool
    feasible: bool
    reasons: tuple[str, ...] = field(default=())
    plans: tuple[Plan, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "parsable": self.parsable,
            "processable": self.processable,
            "feasible": self.feasible,
            "reasons": list(self.reasons),
            "num_plans": len(self.plans),
        }


def validate(raw_text: str) -> StageOneReport:
    """Three-tier validity check: parsable, processable, feasible."""
    try:
        obj = json.loads(raw_text)
    except json.JSONDecodeError as exc:
        return StageOneReport(False, False, False, (f"not parsable: {exc}",))
    try:
        problem = planner_input_from_dict(obj)
    except (SchemaError, ValueError, TypeError, KeyError, IndexError) as exc:
        return StageOneReport(True, False, False, (f"not processable: {exc}",))
    try:
        plans = reference_plan(problem)
    except InfeasibleProblem as exc:
        return StageOneReport(True, True, False, (str(exc),))
    except ValueError as exc:
        return StageOneReport(True, True, False, (f"planning failed: {exc}",))
    if not plans:
        return StageOneReport(
            True,
            True,
            False,
            (f"no assignment reaches success probability {problem.min_success_probability}",),
        )
    return StageOneReport(True, True, True, (), tuple(plans))


@dataclass(frozen=True)
class GenerationResult:
    raw_text: str
    candidate: PlannerInput | None
    report: StageOneReport


def generate_planner_input(
    problem_text: str,
    example_text: str,
    instructions_text: str,
    backend: GenerationBackend,
) -> GenerationResult:
    """One-shot generation of a machine-readable planner input.

    The backend output is always retained verbatim for human review; the
    parsed candidate is attached only when the output is at least parsable
    and processable.
    """
    for name, text in (
        ("problem", problem_text),
        ("example", example_text),
        ("instructions", instructions_text),
    ):
        if not text.strip():
            raise ValueError(f"{name} text must be non-empty")
    prompt = (
        f"{instructions_text.rstrip()}\n\n"
        f"--- Example planner input ---\n{example_text.rstrip()}\n\n"
        f"--- Planning problem ---\n{problem_text.rstrip()}\n"
    )
    raw = backend.generate(prompt)
    report = validate(raw)
    candidate = None
    if report.processable:
        candidate = planner_input_from_dict(json.loads(raw))
    return GenerationResult(raw_text=raw, candidate=candidate, report=report)


def plans_to_json(plans) -> str:
    from .domain import canonical_json, plan_to_dict

    return canonical_json({"plans": [plan_to_dict(p) for p in plans], "version": 1})


def planner_input_to_json(problem: PlannerInput) -> str:
    from .domain import canonical_json

    return canonical_json(planner_input_to_dict(problem))
