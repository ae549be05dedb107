"""Case-based retrieval: rank past situations by range-scaled similarity.

Similarity is ``1 / (1 + d)`` where ``d`` is the Euclidean distance over
the quantities shared between the query and the case, each axis scaled by
its ontology valid-range width.  Cases sharing no quantity with the query
cannot be compared and are excluded.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from farmgate.model import ActionId, FarmgateError
from farmgate.ontology import Ontology


class CaseConfigError(FarmgateError, ValueError):
    """A case references an unknown quantity or is malformed."""


@dataclass(frozen=True)
class Case:
    """A snapshot of readings and the actions that were taken then."""

    readings: Mapping[str, float]
    actions_taken: tuple[ActionId, ...]

    def __post_init__(self) -> None:
        readings = {str(q): float(v) for q, v in self.readings.items()}
        if not readings:
            raise CaseConfigError("a case needs at least one reading")
        object.__setattr__(self, "readings", readings)
        object.__setattr__(self, "actions_taken", tuple(ActionId(a) for a in self.actions_taken))


@dataclass(frozen=True)
class CaseBase:
    cases: tuple[Case, ...]


def case_similarity(
    current: Mapping[str, float], case: Case, ontology: Ontology
) -> float | None:
    """Range-scaled similarity in (0, 1]; None when nothing is comparable."""
    shared = [q for q in case.readings if q in current]
    if not shared:
        return None
    total = 0.0
    for quantity in shared:
        qd = ontology.quantities.get(quantity)
        if qd is None:
            raise CaseConfigError(f"case quantity {quantity!r} is not in the ontology")
        lo, hi = qd.valid_range
        scaled = (current[quantity] - case.readings[quantity]) / (hi - lo)
        total += scaled * scaled
    return 1.0 / (1.0 + math.sqrt(total))


def cbr_retrieve(
    current: Mapping[str, float],
    base: CaseBase,
    k: int,
    ontology: Ontology,
) -> list[tuple[Case, float]]:
    """Top-k most similar cases, descending similarity, stable on ties."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scored = []
    for index, case in enumerate(base.cases):
        similarity = case_similarity(current, case, ontology)
        if similarity is not None:
            scored.append((-similarity, index, case))
    scored.sort()
    return [(case, -neg) for neg, _index, case in scored[:k]]


def cases_from_dict(doc: dict, ontology: Ontology | None = None) -> CaseBase:
    if not isinstance(doc, dict) or "cases" not in doc:
        raise CaseConfigError("case document must be an object with a 'cases' key")
    cases = []
    for spec in doc["cases"]:
        try:
            case = Case(
                readings={str(q): float(v) for q, v in spec["readings"].items()},
                actions_taken=tuple(ActionId(a) for a in spec.get("actions_taken", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, CaseConfigError):
                raise
            raise CaseConfigError(f"malformed case {spec!r}: {exc}") from exc
        if ontology is not None:
            for quantity in case.readings:
                if quantity not in ontology.quantities:
                    raise CaseConfigError(f"case quantity {quantity!r} is not in the ontology")
        cases.append(case)
    return CaseBase(cases=tuple(cases))


def load_cases(path: str | Path, ontology: Ontology | None = None) -> CaseBase:
    with open(path, encoding="utf-8") as fh:
        return cases_from_dict(json.load(fh), ontology)
