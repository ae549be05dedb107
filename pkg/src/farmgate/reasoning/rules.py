"""Threshold rule engine: if-then rules over the latest value per quantity.

Comparisons are strict, exactly as the conditions read ("less than 30%",
"greater than 35°C"); range rules treat the bounds as inside the range, so
they fire only strictly outside.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from farmgate.model import ActionId, FarmgateError, Recommendation, ReasonerSource

COMPARATORS = ("lt", "gt", "outside_range")


class RuleConfigError(FarmgateError, ValueError):
    """A rule references an unknown quantity or is structurally malformed."""


@dataclass(frozen=True)
class ThresholdRule:
    """One if-then rule tying a quantity threshold to an action."""

    action: ActionId
    quantity: str
    comparator: str
    bound: float | tuple[float, float]
    condition: str
    explanation_template: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "action", ActionId(self.action))
        if self.comparator not in COMPARATORS:
            raise RuleConfigError(f"comparator must be one of {COMPARATORS}, got {self.comparator!r}")
        if self.comparator == "outside_range":
            if not isinstance(self.bound, tuple) or len(self.bound) != 2:
                raise RuleConfigError("outside_range needs a [lo, hi] bound")
            lo, hi = self.bound
            if not lo < hi:
                raise RuleConfigError(f"outside_range needs lo < hi, got [{lo}, {hi}]")
        elif isinstance(self.bound, tuple):
            raise RuleConfigError(f"comparator {self.comparator!r} needs a scalar bound")
        if "{value}" not in self.explanation_template:
            raise RuleConfigError("explanation_template must contain a {value} placeholder")
        if not self.condition:
            raise RuleConfigError("condition text must be non-empty")

    def fires(self, value: float) -> bool:
        if self.comparator == "lt":
            return value < self.bound
        if self.comparator == "gt":
            return value > self.bound
        lo, hi = self.bound
        return value < lo or value > hi

    def explain(self, value: float) -> str:
        rendered = self.explanation_template.replace("{value}", f"{value:.2f}")
        return f"{self.condition}: {rendered}"


def evaluate_rules(
    values: Mapping[str, float], rules: Sequence[ThresholdRule]
) -> list[Recommendation]:
    """One recommendation per satisfied rule, confidence 1.0.

    Rules whose quantity has no reading yet are simply not evaluated.
    """
    out: list[Recommendation] = []
    for rule in rules:
        if rule.quantity not in values:
            continue
        value = values[rule.quantity]
        if rule.fires(value):
            out.append(
                Recommendation(
                    action_id=rule.action,
                    condition=rule.condition,
                    explanation=rule.explain(value),
                    confidence=1.0,
                    source=ReasonerSource.RULE,
                )
            )
    return out


def rules_from_dict(doc: dict, known_quantities: Iterable[str]) -> tuple[ThresholdRule, ...]:
    known = set(known_quantities)
    if not isinstance(doc, dict) or "rules" not in doc:
        raise RuleConfigError("rules document must be an object with a 'rules' key")
    rules = []
    for spec in doc["rules"]:
        try:
            bound = spec["bound"]
            if isinstance(bound, (list, tuple)):
                bound = (float(bound[0]), float(bound[1]))
            else:
                bound = float(bound)
            rule = ThresholdRule(
                action=ActionId(spec["action"]),
                quantity=str(spec["quantity"]),
                comparator=str(spec["comparator"]),
                bound=bound,
                condition=str(spec["condition"]),
                explanation_template=str(spec["explanation_template"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, RuleConfigError):
                raise
            raise RuleConfigError(f"malformed rule {spec!r}: {exc}") from exc
        if rule.quantity not in known:
            raise RuleConfigError(f"rule {rule.action.value!r} uses unknown quantity {rule.quantity!r}")
        rules.append(rule)
    return tuple(rules)


def load_rules(path: str | Path, known_quantities: Iterable[str]) -> tuple[ThresholdRule, ...]:
    with open(path, encoding="utf-8") as fh:
        return rules_from_dict(json.load(fh), known_quantities)
