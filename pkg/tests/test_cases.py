"""Case-based retrieval: similarity metric, ranking, config validation."""

import pytest

from farmgate.model import ActionId
from farmgate.ontology import bundled_data_path
from farmgate.reasoning.cases import (
    Case,
    CaseBase,
    CaseConfigError,
    case_similarity,
    cases_from_dict,
    cbr_retrieve,
    load_cases,
)


class TestSimilarity:
    def test_exact_copy_scores_one_and_ranks_first(self, ontology):
        current = {"soil_moisture": 23.45, "temperature": 36.78}
        base = CaseBase(cases=(
            Case(readings={"soil_moisture": 60.0, "temperature": 20.0}, actions_taken=()),
            Case(readings=dict(current), actions_taken=(ActionId.IRRIGATE,)),
        ))
        ranked = cbr_retrieve(current, base, k=2, ontology=ontology)
        assert ranked[0][1] == pytest.approx(1.0)
        assert ranked[0][0].actions_taken == (ActionId.IRRIGATE,)

    def test_empty_base_returns_empty(self, ontology):
        assert cbr_retrieve({"soil_moisture": 10}, CaseBase(cases=()), 3, ontology) == []

    def test_hand_computed_scaled_distances(self, ontology):
        # soil_moisture range is [0, 100]: deltas of 10 and 50 scale to 0.1 and 0.5
        current = {"soil_moisture": 40.0}
        near = Case(readings={"soil_moisture": 50.0}, actions_taken=())
        far = Case(readings={"soil_moisture": 90.0}, actions_taken=(ActionId.IRRIGATE,))
        ranked = cbr_retrieve(current, CaseBase(cases=(far, near)), 2, ontology)
        assert ranked[0][0] is near
        assert ranked[0][1] == pytest.approx(1 / 1.1, abs=1e-12)
        assert ranked[1][1] == pytest.approx(1 / 1.5, abs=1e-12)

    def test_multi_quantity_distance_is_euclidean(self, ontology):
        # two axes each scaled to 0.3 -> distance sqrt(0.18)
        current = {"soil_moisture": 30.0, "humidity": 40.0}
        case = Case(readings={"soil_moisture": 60.0, "humidity": 70.0}, actions_taken=())
        expected = 1.0 / (1.0 + (0.3**2 + 0.3**2) ** 0.5)
        assert case_similarity(current, case, ontology) == pytest.approx(expected, abs=1e-12)

    def test_disjoint_quantities_not_comparable(self, ontology):
        case = Case(readings={"light": 100.0}, actions_taken=())
        assert case_similarity({"ph": 7.0}, case, ontology) is None
        assert cbr_retrieve({"ph": 7.0}, CaseBase(cases=(case,)), 1, ontology) == []

    def test_stable_on_ties(self, ontology):
        current = {"soil_moisture": 40.0}
        first = Case(readings={"soil_moisture": 50.0}, actions_taken=(ActionId.IRRIGATE,))
        second = Case(readings={"soil_moisture": 30.0}, actions_taken=(ActionId.ADJUST_PH,))
        ranked = cbr_retrieve(current, CaseBase(cases=(first, second)), 2, ontology)
        assert [c.actions_taken for c, _ in ranked] == [(ActionId.IRRIGATE,), (ActionId.ADJUST_PH,)]

    def test_k_must_be_positive(self, ontology):
        with pytest.raises(ValueError):
            cbr_retrieve({"ph": 7.0}, CaseBase(cases=()), 0, ontology)


class TestLoader:
    def test_demo_file_loads(self, ontology):
        base = load_cases(bundled_data_path("cases_demo.json"), ontology)
        assert len(base.cases) == 3
        assert ActionId.IRRIGATE in base.cases[0].actions_taken

    def test_unknown_quantity_rejected_with_ontology(self, ontology):
        doc = {"cases": [{"readings": {"frobnitz": 1.0}, "actions_taken": []}]}
        with pytest.raises(CaseConfigError):
            cases_from_dict(doc, ontology)

    def test_empty_readings_rejected(self):
        with pytest.raises(CaseConfigError):
            cases_from_dict({"cases": [{"readings": {}, "actions_taken": []}]})
