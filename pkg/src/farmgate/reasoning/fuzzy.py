"""Triangular fuzzy sets and classification.

A set is (a, b, c) with a <= b <= c: membership rises linearly from a to
the peak at b and falls to c.  Shoulder sets (a == b or b == c) take value
1 on the flat side, so (0, 0, 30) is a left shoulder and (60, 100, 100) a
right shoulder.  Classification picks the argmax membership, breaking ties
toward the set with the lowest center.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from farmgate.model import ActionId, FarmgateError


class FuzzyConfigError(FarmgateError, ValueError):
    """A fuzzy set or variable definition is malformed."""


@dataclass(frozen=True)
class FuzzySet:
    """One labelled triangular membership function."""

    label: str
    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if not (self.a <= self.b <= self.c):
            raise FuzzyConfigError(
                f"set {self.label!r} needs a <= b <= c, got ({self.a}, {self.b}, {self.c})"
            )
        if self.a == self.c:
            raise FuzzyConfigError(f"set {self.label!r} is degenerate: a == c == {self.a}")

    def membership(self, x: float) -> float:
        if self.a == self.b:  # left shoulder: flat at 1 for x <= b
            if x <= self.b:
                return 1.0
            if x >= self.c:
                return 0.0
            return (self.c - x) / (self.c - self.b)
        if self.b == self.c:  # right shoulder: flat at 1 for x >= b
            if x >= self.b:
                return 1.0
            if x <= self.a:
                return 0.0
            return (x - self.a) / (self.b - self.a)
        if x <= self.a or x >= self.c:
            return 0.0
        if x <= self.b:
            return (x - self.a) / (self.b - self.a)
        return (self.c - x) / (self.c - self.b)


def fuzzy_membership(x: float, fuzzy_set: FuzzySet) -> float:
    return fuzzy_set.membership(x)


@dataclass(frozen=True)
class FuzzyClassification:
    label: str
    membership: float
    memberships: tuple[tuple[str, float], ...]


def fuzzy_classify(x: float, sets: Sequence[FuzzySet]) -> FuzzyClassification:
    """Argmax membership with low-center tie-break; returns the full vector."""
    if not sets:
        raise ValueError("fuzzy_classify needs at least one set")
    memberships = tuple((s.label, s.membership(x)) for s in sets)
    best = max(zip(sets, memberships), key=lambda pair: (pair[1][1], -pair[0].b))
    return FuzzyClassification(
        label=best[0].label, membership=best[1][1], memberships=memberships
    )


@dataclass(frozen=True)
class FuzzyVariable:
    """Fuzzy sets over one quantity plus the per-label action mapping."""

    quantity: str
    sets: tuple[FuzzySet, ...]
    actions: Mapping[str, ActionId]

    def __post_init__(self) -> None:
        if not self.sets:
            raise FuzzyConfigError(f"variable {self.quantity!r} has no sets")
        labels = [s.label for s in self.sets]
        if len(set(labels)) != len(labels):
            raise FuzzyConfigError(f"variable {self.quantity!r} has duplicate set labels")
        unknown = set(self.actions) - set(labels)
        if unknown:
            raise FuzzyConfigError(f"actions reference unknown labels: {sorted(unknown)}")

    def classify(self, x: float) -> FuzzyClassification:
        return fuzzy_classify(x, self.sets)


def fuzzy_from_dict(doc: dict) -> tuple[FuzzyVariable, ...]:
    if not isinstance(doc, dict) or "variables" not in doc:
        raise FuzzyConfigError("fuzzy document must be an object with a 'variables' key")
    variables = []
    for var in doc["variables"]:
        try:
            sets = []
            actions: dict[str, ActionId] = {}
            for entry in var["sets"]:
                a, b, c = (float(x) for x in entry["shape"])
                fuzzy_set = FuzzySet(label=str(entry["label"]), a=a, b=b, c=c)
                sets.append(fuzzy_set)
                if entry.get("action"):
                    actions[fuzzy_set.label] = ActionId(entry["action"])
            variables.append(
                FuzzyVariable(quantity=str(var["quantity"]), sets=tuple(sets), actions=actions)
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FuzzyConfigError):
                raise
            raise FuzzyConfigError(f"malformed fuzzy variable {var!r}: {exc}") from exc
    return tuple(variables)


def load_fuzzy(path: str | Path) -> tuple[FuzzyVariable, ...]:
    with open(path, encoding="utf-8") as fh:
        return fuzzy_from_dict(json.load(fh))
