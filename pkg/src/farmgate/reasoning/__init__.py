"""Semantic reasoning layer: rules, fuzzy sets, evidence fusion, Bayesian
context, case retrieval, and the aggregating engine."""

from farmgate.reasoning.bayes import (
    BayesConfigError,
    BayesNet,
    InconsistentEvidenceError,
    bayes_from_dict,
    bn_query,
    load_bayes,
)
from farmgate.reasoning.cases import (
    Case,
    CaseBase,
    CaseConfigError,
    case_similarity,
    cases_from_dict,
    cbr_retrieve,
    load_cases,
)
from farmgate.reasoning.dempster import BBA, TotalConflictError, ds_combine, ds_combine_all
from farmgate.reasoning.engine import EngineResult, ReasoningEngine, SourceReading, aggregate
from farmgate.reasoning.fuzzy import (
    FuzzyClassification,
    FuzzyConfigError,
    FuzzySet,
    FuzzyVariable,
    fuzzy_classify,
    fuzzy_from_dict,
    fuzzy_membership,
    load_fuzzy,
)
from farmgate.reasoning.rules import (
    RuleConfigError,
    ThresholdRule,
    evaluate_rules,
    load_rules,
    rules_from_dict,
)

__all__ = [
    "BBA",
    "BayesConfigError",
    "BayesNet",
    "Case",
    "CaseBase",
    "CaseConfigError",
    "EngineResult",
    "FuzzyClassification",
    "FuzzyConfigError",
    "FuzzySet",
    "FuzzyVariable",
    "InconsistentEvidenceError",
    "ReasoningEngine",
    "RuleConfigError",
    "SourceReading",
    "ThresholdRule",
    "TotalConflictError",
    "aggregate",
    "bayes_from_dict",
    "bn_query",
    "case_similarity",
    "cases_from_dict",
    "cbr_retrieve",
    "ds_combine",
    "ds_combine_all",
    "evaluate_rules",
    "fuzzy_classify",
    "fuzzy_from_dict",
    "fuzzy_membership",
    "load_bayes",
    "load_cases",
    "load_fuzzy",
    "load_rules",
    "rules_from_dict",
]
