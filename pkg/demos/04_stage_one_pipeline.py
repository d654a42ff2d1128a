"""
From problem text to validated plans
====================================

The stage-one pipeline: turn a natural-language planning problem into a
machine-readable planner input (here via the deterministic canned
backend), gate it through the parsable/processable/feasible tiers, and
enumerate plans with the reference planner.
"""

from planexplain.fixtures import (
    EXAMPLE_INPUT,
    INSTRUCTIONS,
    PROBLEM_TEXT,
    load_planner_input,
)
from planexplain.planning import (
    generate_planner_input,
    planner_input_to_json,
    reference_plan,
    validate,
)
from planexplain.prompting import CannedBackend

problem_text = PROBLEM_TEXT.read_text()
print(problem_text[:300], "...\n")

# A real deployment points this at an LLM endpoint; the canned backend
# returns a known-good answer so the pipeline itself stays observable.
backend = CannedBackend(planner_input_to_json(load_planner_input()))
result = generate_planner_input(
    problem_text, EXAMPLE_INPUT.read_text(), INSTRUCTIONS.read_text(), backend
)
report = result.report
print("parsable:   ", report.parsable)
print("processable:", report.processable)
print("feasible:   ", report.feasible)

# The reference planner enumerates every capable assignment, prices
# movement at a fixed cost per corridor edge, and keeps plans that clear
# the mission success threshold.
plans = reference_plan(result.candidate)
print(f"\n{len(plans)} plans clear the threshold; cheapest three:")
for plan in plans[:3]:
    route = ", ".join(f"{a.agent}:{a.task}@{a.location}" for a in plan.assignments)
    print(f"  {plan.id}: cost {plan.total_cost:.0f}, success {plan.success_probability:.4f}")
    print(f"    {route}")

# Feasibility is not a given: drop every agent able to do t4 and the
# validator names the uncoverable task.
import json

broken = json.loads(planner_input_to_json(load_planner_input()))
for agent in broken["agents"]:
    agent["capabilities"] = [c for c in agent["capabilities"] if c["task"] != "t4"]
bad = validate(json.dumps(broken))
print("\nmutated input feasible:", bad.feasible, "-", bad.reasons[0])
