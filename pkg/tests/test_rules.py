"""Threshold rules: the case-study table, boundaries, config validation."""

import pytest

from farmgate.model import ActionId, ReasonerSource
from farmgate.ontology import bundled_data_path, load_bundled_ontology
from farmgate.reasoning.rules import (
    RuleConfigError,
    ThresholdRule,
    evaluate_rules,
    load_rules,
    rules_from_dict,
)

CASE_STUDY_VALUES = {
    "soil_moisture": 23.45,
    "temperature": 36.78,
    "light": 281.40,
    "ph": 5.90,
}


@pytest.fixture(scope="module")
def rules():
    ontology = load_bundled_ontology()
    return load_rules(bundled_data_path("rules.json"), ontology.quantities)


class TestEvaluate:
    def test_case_study_fires_all_four_actions(self, rules):
        recs = evaluate_rules(CASE_STUDY_VALUES, rules)
        assert {r.action_id for r in recs} == set(ActionId)
        assert all(r.confidence == 1.0 for r in recs)
        assert all(r.source is ReasonerSource.RULE for r in recs)
        by_action = {r.action_id: r for r in recs}
        assert "Soil moisture is 23.45%" in by_action[ActionId.IRRIGATE].explanation
        assert "Temperature is 36.78°C" in by_action[ActionId.ACTIVATE_COOLING].explanation
        assert "Light level is 281.40 Lux" in by_action[ActionId.GROW_LIGHTS_ON].explanation
        assert "Soil pH is 5.90" in by_action[ActionId.ADJUST_PH].explanation
        assert by_action[ActionId.IRRIGATE].condition == "Soil moisture less than 30%"

    def test_healthy_values_fire_nothing(self, rules):
        recs = evaluate_rules(
            {"soil_moisture": 50, "temperature": 20, "light": 500, "ph": 6.5}, rules
        )
        assert recs == []

    def test_boundaries_are_strict(self, rules):
        assert evaluate_rules({"soil_moisture": 30.0}, rules) == []
        assert evaluate_rules({"temperature": 35.0}, rules) == []
        assert evaluate_rules({"light": 300.0}, rules) == []
        # pH bounds are inside the range, so neither endpoint fires
        assert evaluate_rules({"ph": 6.0}, rules) == []
        assert evaluate_rules({"ph": 7.5}, rules) == []
        assert len(evaluate_rules({"ph": 5.999}, rules)) == 1
        assert len(evaluate_rules({"ph": 7.501}, rules)) == 1

    def test_missing_quantities_not_evaluated(self, rules):
        recs = evaluate_rules({"soil_moisture": 10.0}, rules)
        assert [r.action_id for r in recs] == [ActionId.IRRIGATE]


class TestConfig:
    def test_unknown_quantity_rejected_at_load(self):
        doc = {"rules": [{"action": "irrigate", "quantity": "frobnitz", "comparator": "lt",
                          "bound": 1, "condition": "c", "explanation_template": "{value}"}]}
        with pytest.raises(RuleConfigError):
            rules_from_dict(doc, {"soil_moisture"})

    def test_template_must_have_placeholder(self):
        with pytest.raises(RuleConfigError):
            ThresholdRule(ActionId.IRRIGATE, "soil_moisture", "lt", 30.0, "c", "no placeholder")

    def test_range_bound_shape_checked(self):
        with pytest.raises(RuleConfigError):
            ThresholdRule(ActionId.ADJUST_PH, "ph", "outside_range", 6.0, "c", "{value}")
        with pytest.raises(RuleConfigError):
            ThresholdRule(ActionId.ADJUST_PH, "ph", "outside_range", (7.5, 6.0), "c", "{value}")
        with pytest.raises(RuleConfigError):
            ThresholdRule(ActionId.IRRIGATE, "soil_moisture", "lt", (1.0, 2.0), "c", "{value}")

    def test_unknown_comparator_rejected(self):
        with pytest.raises(RuleConfigError):
            ThresholdRule(ActionId.IRRIGATE, "soil_moisture", "le", 30.0, "c", "{value}")
