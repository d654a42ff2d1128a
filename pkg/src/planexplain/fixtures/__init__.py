"""Bundled construction-scenario fixtures: engine config, adaptation
scenario, stage-one inputs, and golden files."""

from __future__ import annotations

import json
from pathlib import Path

FIXTURE_DIR = Path(__file__).parent

ENGINE_CONFIG = FIXTURE_DIR / "engine.json"
SCENARIO_ADAPTATION = FIXTURE_DIR / "scenario_adaptation.json"
PROBLEM_TEXT = FIXTURE_DIR / "problem_construction.txt"
EXAMPLE_INPUT = FIXTURE_DIR / "example_input.json"
INSTRUCTIONS = FIXTURE_DIR / "instructions.txt"
GOLDEN_PRISM = FIXTURE_DIR / "construction_profile1.prism"
ADAPTATION_FEEDBACK_LOG = FIXTURE_DIR / "adaptation_feedback.jsonl"


def load_engine_config():
    from ..engine import EngineConfig

    return EngineConfig.load(ENGINE_CONFIG)


def load_scenario() -> dict:
    with open(SCENARIO_ADAPTATION, encoding="utf-8") as fh:
        return json.load(fh)


def load_planner_input():
    from ..domain import planner_input_from_dict

    with open(ENGINE_CONFIG, encoding="utf-8") as fh:
        return planner_input_from_dict(json.load(fh)["planner_input"])
