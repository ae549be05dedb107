"""Aggregation semantics and the full engine over the case-study values."""

import pytest

from farmgate.model import ActionId, Recommendation, ReasonerSource
from farmgate.ontology import bundled_data_path, load_bundled_ontology
from farmgate.reasoning import (
    ReasoningEngine,
    SourceReading,
    aggregate,
    load_bayes,
    load_cases,
    load_fuzzy,
    load_rules,
)

CASE_STUDY_VALUES = {
    "soil_moisture": 23.45,
    "temperature": 36.78,
    "light": 281.40,
    "ph": 5.90,
}


@pytest.fixture(scope="module")
def engine():
    ontology = load_bundled_ontology()
    return ReasoningEngine(
        rules=load_rules(bundled_data_path("rules.json"), ontology.quantities),
        fuzzy_variables=load_fuzzy(bundled_data_path("fuzzy.json")),
        bayes_net=load_bayes(bundled_data_path("bayes.json")),
        ontology=ontology,
    )


def rec(action, confidence, source, explanation="x is 1.00"):
    return Recommendation(
        action_id=action,
        condition=f"{action.value} condition",
        explanation=explanation,
        confidence=confidence,
        source=source,
    )


class TestAggregate:
    def test_empty_inputs(self):
        assert aggregate([]) == []

    def test_max_merge_keeps_other_evidence_in_explanation(self):
        rule = rec(ActionId.IRRIGATE, 1.0, ReasonerSource.RULE, "Soil moisture is 23.45%")
        fuzzy = rec(ActionId.IRRIGATE, 0.2183, ReasonerSource.FUZZY, "membership 0.2183")
        merged = aggregate([rule, fuzzy])
        assert len(merged) == 1
        top = merged[0]
        assert top.confidence == 1.0
        assert top.source is ReasonerSource.RULE
        assert "Soil moisture is 23.45%" in top.explanation
        assert "membership 0.2183" in top.explanation  # fuzzy evidence retained
        assert top.alternatives == ()

    def test_two_actions_list_each_other_as_alternatives(self):
        irrigate = rec(ActionId.IRRIGATE, 0.9, ReasonerSource.RULE)
        cool = rec(ActionId.ACTIVATE_COOLING, 0.4, ReasonerSource.FUZZY)
        merged = aggregate([irrigate, cool])
        assert [r.action_id for r in merged] == [ActionId.IRRIGATE, ActionId.ACTIVATE_COOLING]
        assert merged[0].alternatives == ((ActionId.ACTIVATE_COOLING, 0.4),)
        assert merged[1].alternatives == ((ActionId.IRRIGATE, 0.9),)

    def test_deterministic_order_confidence_then_action(self):
        recs = [
            rec(ActionId.GROW_LIGHTS_ON, 0.5, ReasonerSource.RULE),
            rec(ActionId.ADJUST_PH, 0.5, ReasonerSource.RULE),
            rec(ActionId.IRRIGATE, 0.8, ReasonerSource.RULE),
        ]
        merged = aggregate(recs)
        assert [r.action_id for r in merged] == [
            ActionId.IRRIGATE,   # highest confidence first
            ActionId.ADJUST_PH,  # ties broken by action id
            ActionId.GROW_LIGHTS_ON,
        ]


class TestEngine:
    def test_case_study_yields_exactly_four_actions(self, engine):
        result = engine.evaluate(CASE_STUDY_VALUES)
        actions = [r.action_id for r in result.recommendations]
        assert set(actions) == set(ActionId)
        assert len(actions) == 4

    def test_irrigate_gets_rule_fuzzy_and_fusion_evidence(self, engine):
        result = engine.evaluate(CASE_STUDY_VALUES)
        sources = {r.source for r in result.evidence[ActionId.IRRIGATE]}
        assert ReasonerSource.RULE in sources
        assert ReasonerSource.FUZZY in sources
        assert ReasonerSource.DEMPSTER_SHAFER in sources

    def test_fuzzy_confidence_is_membership(self, engine):
        result = engine.evaluate({"soil_moisture": 23.45})
        fuzzy = [r for r in result.evidence[ActionId.IRRIGATE]
                 if r.source is ReasonerSource.FUZZY]
        assert len(fuzzy) == 1
        assert fuzzy[0].confidence == pytest.approx(0.21833, abs=1e-5)
        assert "23.45" in fuzzy[0].explanation

    def test_bayes_stays_quiet_when_adequate_most_probable(self, engine):
        # default priors make adequate the argmax, which maps to no action
        result = engine.evaluate({"temperature": 20.0})
        assert all(r.source is not ReasonerSource.BAYESIAN
                   for recs in result.evidence.values() for r in recs)

    def test_bayes_recommends_when_low_dominates(self):
        ontology = load_bundled_ontology()
        net = load_bayes(bundled_data_path("bayes.json"))
        dry_net = type(net)(
            nodes=dict(net.nodes),
            priors={"Weather": {"rain": 0.05, "no_rain": 0.95},
                    "Irrigation": {"on": 0.1, "off": 0.9}},
            cpt=dict(net.cpt),
            evidence={},
            actions=dict(net.actions),
        )
        engine = ReasoningEngine(bayes_net=dry_net, ontology=ontology)
        result = engine.evaluate({})
        assert [r.action_id for r in result.recommendations] == [ActionId.IRRIGATE]
        rec_ = result.recommendations[0]
        assert rec_.source is ReasonerSource.BAYESIAN
        assert "P(low)" in rec_.explanation

    def test_multiple_soil_sources_are_fused(self, engine):
        sources = {
            "soil_moisture": [
                SourceReading("SOIL7AGR", 23.45, 1.0),
                SourceReading("SOIL8AGR", 25.0, 0.8),
            ]
        }
        result = engine.evaluate({"soil_moisture": 23.45}, sources=sources)
        fusion = [r for r in result.evidence[ActionId.IRRIGATE]
                  if r.source is ReasonerSource.DEMPSTER_SHAFER]
        assert len(fusion) == 1
        assert "2 source(s) fused" in fusion[0].explanation
        assert 0.0 < fusion[0].confidence <= 1.0

    def test_conflicting_sources_suppress_fusion(self, engine):
        # one source certain Low, the other certain Adequate: K == 1
        sources = {
            "soil_moisture": [
                SourceReading("a", 0.0, 1.0),    # mu_low = 1
                SourceReading("b", 50.0, 1.0),   # mu_adequate = 1
            ]
        }
        result = engine.evaluate({"soil_moisture": 0.0}, sources=sources)
        fusion = [r for recs in result.evidence.values() for r in recs
                  if r.source is ReasonerSource.DEMPSTER_SHAFER]
        assert fusion == []

    def test_healthy_values_produce_nothing(self, engine):
        result = engine.evaluate({"soil_moisture": 50, "temperature": 20,
                                  "light": 500, "ph": 6.5})
        assert result.recommendations == ()

    def test_case_base_contributes_when_configured(self):
        ontology = load_bundled_ontology()
        engine = ReasoningEngine(
            ontology=ontology,
            case_base=load_cases(bundled_data_path("cases_demo.json"), ontology),
        )
        result = engine.evaluate(CASE_STUDY_VALUES)
        assert ActionId.IRRIGATE in result.evidence
        cbr = [r for r in result.evidence[ActionId.IRRIGATE]
               if r.source is ReasonerSource.CASE_BASED]
        assert len(cbr) == 1
        assert 0.0 < cbr[0].confidence < 1.0
