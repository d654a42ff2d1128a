import json
from fractions import Fraction

import pytest

from planexplain.domain import (
    CognitiveModel,
    CognitiveSkill,
    DomainError,
    PlannerInput,
    Profile,
    PromptCatalog,
    PromptSlot,
    SchemaError,
    SlotOption,
    canonical_json,
    catalog_from_dict,
    catalog_to_dict,
    cognitive_model_from_dict,
    cognitive_model_to_dict,
    plan_from_dict,
    plan_to_dict,
    planner_input_from_dict,
    planner_input_to_dict,
    validate_cognitive_model,
)
from planexplain.fixtures import ENGINE_CONFIG


def two_level_skill():
    return CognitiveSkill(index=1, name="focus", levels=("low", "high"))


def model_with(table):
    return CognitiveModel(
        profiles=(Profile(id=1, name="p1", description="d"),),
        skills=(two_level_skill(),),
        joints={(1, 1): table},
    )


class TestModelValidation:
    def test_uniform_table_is_valid(self):
        report = validate_cognitive_model(model_with(((0.25, 0.25), (0.25, 0.25))))
        assert report.ok

    def test_mass_violation_locates_profile_and_skill(self):
        report = validate_cognitive_model(model_with(((0.4, 0.4), (0.2, 0.2))))
        assert not report.ok
        assert any("joints[1,1]" in i.path and "mass" in i.message for i in report.issues)

    def test_negative_entry_rejected(self):
        report = validate_cognitive_model(model_with(((-0.1, 0.6), (0.25, 0.25))))
        assert not report.ok

    def test_missing_joint_reported(self):
        model = CognitiveModel(
            profiles=(Profile(id=1, name="p1", description="d"),),
            skills=(two_level_skill(),),
            joints={},
        )
        report = validate_cognitive_model(model)
        assert any("missing joint table" in i.message for i in report.issues)

    def test_fixture_tables_sum_to_one_exactly(self):
        # oracle: exact rational sums over the literal JSON digits
        raw = json.loads(ENGINE_CONFIG.read_text())
        for key, table in raw["joints"].items():
            total = sum(Fraction(str(v)) for row in table for v in row)
            assert total == 1, f"joint {key} sums to {total}"


class TestContiguity:
    def test_profile_ids_must_start_at_one(self):
        with pytest.raises(DomainError):
            CognitiveModel(
                profiles=(Profile(id=2, name="p2", description="d"),),
                skills=(two_level_skill(),),
                joints={(2, 1): ((0.25, 0.25), (0.25, 0.25))},
            )

    def test_option_indices_must_be_contiguous(self):
        with pytest.raises(DomainError):
            PromptSlot(
                index=1,
                name="slot1",
                options=(
                    SlotOption(slot=1, index=1, prompt_text="a", alignment={}),
                    SlotOption(slot=1, index=3, prompt_text="b", alignment={}),
                ),
            )

    def test_slot_needs_two_options(self):
        with pytest.raises(DomainError):
            PromptSlot(
                index=1,
                name="slot1",
                options=(SlotOption(slot=1, index=1, prompt_text="a", alignment={}),),
            )


class TestSerialization:
    def test_cognitive_model_round_trip(self, config):
        payload = cognitive_model_to_dict(config.model)
        assert cognitive_model_from_dict(payload) == config.model

    def test_catalog_round_trip(self, config):
        payload = catalog_to_dict(config.catalog)
        assert catalog_from_dict(payload) == config.catalog

    def test_planner_input_round_trip(self, config):
        payload = planner_input_to_dict(config.planner_input)
        restored = planner_input_from_dict(payload)
        assert restored == config.planner_input

    def test_canonical_json_is_stable(self, config):
        payload = planner_input_to_dict(config.planner_input)
        assert canonical_json(payload) == canonical_json(json.loads(canonical_json(payload)))

    def test_unknown_field_rejected_with_path(self, config):
        payload = planner_input_to_dict(config.planner_input)
        payload["surprise"] = 1
        with pytest.raises(SchemaError) as err:
            planner_input_from_dict(payload)
        assert "surprise" in str(err.value)

    def test_missing_field_rejected_with_path(self, config):
        payload = planner_input_to_dict(config.planner_input)
        del payload["min_success_probability"]
        with pytest.raises(SchemaError) as err:
            planner_input_from_dict(payload)
        assert "min_success_probability" in str(err.value)

    def test_nested_error_names_inner_path(self, config):
        payload = planner_input_to_dict(config.planner_input)
        del payload["agents"][0]["capabilities"][0]["max_retries"]
        with pytest.raises(SchemaError) as err:
            planner_input_from_dict(payload)
        assert "max_retries" in str(err.value)

    def test_plan_round_trip(self):
        payload = {
            "version": 1,
            "id": "plan-1",
            "assignments": [{"agent": "a1", "task": "t1", "location": "A"}],
            "total_cost": 30.0,
            "success_probability": 0.99,
        }
        assert plan_to_dict(plan_from_dict(payload)) == payload


class TestPlannerInputInvariants:
    def test_edge_to_undeclared_location_rejected(self, config):
        payload = planner_input_to_dict(config.planner_input)
        payload["edges"].append(["A", "Z"])
        with pytest.raises((SchemaError, DomainError)):
            planner_input_from_dict(payload)

    def test_task_at_undeclared_location_rejected(self, config):
        payload = planner_input_to_dict(config.planner_input)
        payload["tasks"][0]["locations"] = ["Z"]
        with pytest.raises((SchemaError, DomainError)):
            planner_input_from_dict(payload)

    def test_capability_for_unknown_task_rejected(self, config):
        payload = planner_input_to_dict(config.planner_input)
        payload["agents"][0]["capabilities"][0]["task"] = "t99"
        with pytest.raises((SchemaError, DomainError)):
            planner_input_from_dict(payload)
