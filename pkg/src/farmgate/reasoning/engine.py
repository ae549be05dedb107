"""The uncertainty-aware inference engine: runs every configured reasoner
over the latest readings and aggregates their recommendations.

Per action, the aggregate keeps the highest confidence across sources,
appends the other sources' evidence to the winning explanation, and lists
every other candidate action (with its aggregated confidence) as an
alternative.  Output order is confidence-descending, then action id.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from farmgate.model import ActionId, Recommendation, ReasonerSource
from farmgate.ontology import Ontology
from farmgate.reasoning.bayes import SOIL_MOISTURE, BayesNet, bn_query
from farmgate.reasoning.cases import CaseBase, cbr_retrieve
from farmgate.reasoning.dempster import BBA, TotalConflictError, ds_combine_all
from farmgate.reasoning.fuzzy import FuzzyVariable
from farmgate.reasoning.rules import ThresholdRule, evaluate_rules

logger = logging.getLogger(__name__)

_SOURCE_ORDER = {source: index for index, source in enumerate(ReasonerSource)}


@dataclass(frozen=True)
class SourceReading:
    """One sensor's latest contribution to a quantity."""

    sensor: str
    value: float
    confidence: float


@dataclass(frozen=True)
class EngineResult:
    """Aggregated recommendations plus the per-action raw evidence."""

    recommendations: tuple[Recommendation, ...]
    evidence: Mapping[ActionId, tuple[Recommendation, ...]] = field(default_factory=dict)


def aggregate(inputs: Sequence[Recommendation]) -> list[Recommendation]:
    """Merge per-reasoner recommendations into one ranked entry per action."""
    by_action: dict[ActionId, list[Recommendation]] = {}
    for rec in inputs:
        by_action.setdefault(rec.action_id, []).append(rec)

    merged_confidence = {
        action: max(r.confidence for r in recs) for action, recs in by_action.items()
    }

    out: list[Recommendation] = []
    for action, recs in by_action.items():
        ranked = sorted(recs, key=lambda r: (-r.confidence, _SOURCE_ORDER[r.source]))
        winner = ranked[0]
        extras = "".join(
            f" | {r.source.value}: {r.explanation}" for r in ranked[1:]
        )
        alternatives = tuple(
            (other, merged_confidence[other])
            for other in sorted(
                (a for a in by_action if a != action),
                key=lambda a: (-merged_confidence[a], a.value),
            )
        )
        out.append(
            Recommendation(
                action_id=action,
                condition=winner.condition,
                explanation=winner.explanation + extras,
                confidence=merged_confidence[action],
                source=winner.source,
                alternatives=alternatives,
            )
        )
    out.sort(key=lambda r: (-r.confidence, r.action_id.value))
    return out


class ReasoningEngine:
    """Pure evaluator over immutable reasoner configuration."""

    def __init__(
        self,
        rules: Sequence[ThresholdRule] = (),
        fuzzy_variables: Sequence[FuzzyVariable] = (),
        bayes_net: BayesNet | None = None,
        case_base: CaseBase | None = None,
        ontology: Ontology | None = None,
        case_top_k: int = 3,
    ) -> None:
        self.rules = tuple(rules)
        self.fuzzy_variables = tuple(fuzzy_variables)
        self.bayes_net = bayes_net
        self.case_base = case_base
        self.ontology = ontology
        self.case_top_k = case_top_k

    def evaluate(
        self,
        values: Mapping[str, float],
        sources: Mapping[str, Sequence[SourceReading]] | None = None,
    ) -> EngineResult:
        """Run every reasoner over the latest value per quantity.

        ``sources`` optionally carries the per-sensor readings behind each
        quantity so evidence fusion can combine multiple sources; when
        absent, each quantity counts as a single fully-trusted source.
        """
        raw: list[Recommendation] = []
        raw.extend(evaluate_rules(values, self.rules))
        raw.extend(self._fuzzy_pass(values))
        raw.extend(self._dempster_pass(values, sources))
        raw.extend(self._bayes_pass())
        raw.extend(self._case_pass(values))

        evidence: dict[ActionId, tuple[Recommendation, ...]] = {}
        for rec in raw:
            evidence.setdefault(rec.action_id, ())
            evidence[rec.action_id] += (rec,)
        return EngineResult(recommendations=tuple(aggregate(raw)), evidence=evidence)

    # -- individual reasoners ---------------------------------------------

    def _fuzzy_pass(self, values: Mapping[str, float]) -> list[Recommendation]:
        out = []
        for var in self.fuzzy_variables:
            if var.quantity not in values:
                continue
            value = values[var.quantity]
            result = var.classify(value)
            action = var.actions.get(result.label)
            if action is None or result.membership <= 0.0:
                continue
            vector = ", ".join(f"{label}={mu:.4f}" for label, mu in result.memberships)
            condition = f"{var.quantity} classified {result.label}"
            out.append(
                Recommendation(
                    action_id=action,
                    condition=condition,
                    explanation=(
                        f"{condition}: {var.quantity} is {value:.2f} "
                        f"(membership {result.membership:.4f}; {vector})"
                    ),
                    confidence=min(result.membership, 1.0),
                    source=ReasonerSource.FUZZY,
                )
            )
        return out

    def _dempster_pass(
        self,
        values: Mapping[str, float],
        sources: Mapping[str, Sequence[SourceReading]] | None,
    ) -> list[Recommendation]:
        out = []
        for var in self.fuzzy_variables:
            readings = list((sources or {}).get(var.quantity, ()))
            if not readings and var.quantity in values:
                readings = [SourceReading("latest", values[var.quantity], 1.0)]
            if not readings:
                continue
            frame = tuple(s.label for s in var.sets)
            bbas = [self._reading_bba(var, frame, r) for r in readings]
            try:
                combined = ds_combine_all(bbas)
            except TotalConflictError:
                logger.debug("total conflict fusing %s sources; skipping", var.quantity)
                continue
            label, mass = combined.best_singleton()
            action = var.actions.get(label)
            if action is None or mass <= 0.0:
                continue
            value = values.get(var.quantity, readings[-1].value)
            condition = f"combined evidence says {var.quantity} is {label}"
            out.append(
                Recommendation(
                    action_id=action,
                    condition=condition,
                    explanation=(
                        f"{condition}: {var.quantity} is {value:.2f}; "
                        f"{len(readings)} source(s) fused, {combined.describe()}"
                    ),
                    confidence=min(mass, 1.0),
                    source=ReasonerSource.DEMPSTER_SHAFER,
                )
            )
        return out

    def _reading_bba(
        self, var: FuzzyVariable, frame: tuple[str, ...], reading: SourceReading
    ) -> BBA:
        """Mass (confidence x membership) on the classified label, remainder on the frame."""
        result = var.classify(reading.value)
        mass = max(0.0, min(1.0, reading.confidence * result.membership))
        if mass <= 0.0:
            return BBA.vacuous(frame)
        masses = {frozenset([result.label]): mass}
        if mass < 1.0:
            masses[frozenset(frame)] = 1.0 - mass
        return BBA.from_masses(frame, masses)

    def _bayes_pass(self) -> list[Recommendation]:
        net = self.bayes_net
        if net is None or not net.actions:
            return []
        distribution = bn_query(net, SOIL_MOISTURE, net.evidence)
        states = net.nodes[SOIL_MOISTURE]
        best = max(states, key=lambda s: (distribution[s], -states.index(s)))
        action = net.actions.get(best)
        if action is None:
            return []
        given = (
            ", ".join(f"{node}={state}" for node, state in sorted(net.evidence.items()))
            or "priors only"
        )
        summary = ", ".join(f"P({s})={distribution[s]:.3f}" for s in states)
        condition = f"soil moisture most probably {best}"
        return [
            Recommendation(
                action_id=action,
                condition=condition,
                explanation=f"{condition}: {summary} ({given})",
                confidence=min(distribution[best], 1.0),
                source=ReasonerSource.BAYESIAN,
            )
        ]

    def _case_pass(self, values: Mapping[str, float]) -> list[Recommendation]:
        if self.case_base is None or self.ontology is None or not values:
            return []
        retrieved = cbr_retrieve(values, self.case_base, self.case_top_k, self.ontology)
        best_by_action: dict[ActionId, float] = {}
        for case, similarity in retrieved:
            for action in case.actions_taken:
                best_by_action[action] = max(best_by_action.get(action, 0.0), similarity)
        snapshot = ", ".join(f"{q}={v:.2f}" for q, v in sorted(values.items()))
        out = []
        for action, similarity in best_by_action.items():
            condition = f"similar past case took {action.value}"
            out.append(
                Recommendation(
                    action_id=action,
                    condition=condition,
                    explanation=(
                        f"{condition}: similarity {similarity:.4f} to current ({snapshot})"
                    ),
                    confidence=min(similarity, 1.0),
                    source=ReasonerSource.CASE_BASED,
                )
            )
        return out
