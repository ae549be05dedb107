"""The shared ontology: canonical quantities, unit and field aliases, valid
ranges, and the job-code mapping used by annotation.

The ontology is loaded once from a JSON document and shared read-only; a
bundled agriculture ontology ships in ``farmgate.data``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Any, Mapping

from farmgate.model import FarmgateError


class OntologyError(FarmgateError, ValueError):
    """The ontology document violates a structural invariant."""


@dataclass(frozen=True)
class QuantityDef:
    """Definition of one canonical quantity."""

    name: str
    unit: str
    aliases: tuple[str, ...]
    meaning: str
    valid_range: tuple[float, float]
    job_codes: tuple[str, ...]

    def __post_init__(self) -> None:
        lo, hi = self.valid_range
        if not lo < hi:
            raise OntologyError(
                f"quantity {self.name!r}: valid_range min must be < max, got [{lo}, {hi}]"
            )

    def in_range(self, value: float) -> bool:
        lo, hi = self.valid_range
        return lo <= value <= hi

    def keywords(self) -> tuple[str, ...]:
        """Canonical keywords derived from the meaning text."""
        return tuple(w.lower() for w in self.meaning.split() if w.isalpha())


@dataclass(frozen=True)
class Ontology:
    """Immutable quantity catalog plus per-format field-name alias maps."""

    quantities: Mapping[str, QuantityDef]
    format_aliases: Mapping[str, Mapping[str, str]]
    _by_alias: Mapping[str, str] = field(default=None, repr=False, compare=False)
    _by_job: Mapping[str, str] = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_alias: dict[str, str] = {}
        by_job: dict[str, str] = {}
        for name, qd in self.quantities.items():
            if qd.name != name:
                raise OntologyError(f"quantity key {name!r} does not match definition {qd.name!r}")
            for alias in qd.aliases:
                key = alias.lower()
                if key in by_alias or key in self.quantities:
                    raise OntologyError(f"alias {alias!r} is not unique across quantities")
                by_alias[key] = name
            for job in qd.job_codes:
                if job in by_job:
                    raise OntologyError(f"job code {job!r} mapped to more than one quantity")
                by_job[job] = name
        object.__setattr__(self, "quantities", MappingProxyType(dict(self.quantities)))
        object.__setattr__(
            self,
            "format_aliases",
            MappingProxyType({f: MappingProxyType(dict(m)) for f, m in self.format_aliases.items()}),
        )
        object.__setattr__(self, "_by_alias", MappingProxyType(by_alias))
        object.__setattr__(self, "_by_job", MappingProxyType(by_job))

    def resolve_quantity(self, text: str) -> QuantityDef | None:
        """Map a quantity name or alias to its definition; None if unknown."""
        key = text.lower()
        if key in self.quantities:
            return self.quantities[key]
        name = self._by_alias.get(key)
        return self.quantities[name] if name else None

    def quantity_for_job(self, job_code: str) -> QuantityDef | None:
        name = self._by_job.get(job_code)
        return self.quantities[name] if name else None

    def normalize_unit(self, quantity: QuantityDef, unit_text: str) -> str | None:
        """Normalize a unit spelling within a quantity; None when incompatible."""
        if unit_text == quantity.unit or unit_text.lower() == quantity.unit.lower():
            return quantity.unit
        if unit_text.lower() in (a.lower() for a in quantity.aliases):
            return quantity.unit
        return None

    def canonical_field(self, fmt: str, name: str) -> str | None:
        """Map a source field name to a canonical wire field; None if unmappable."""
        from farmgate.model import WIRE_FIELDS

        if name in WIRE_FIELDS:
            return name
        return self.format_aliases.get(fmt, {}).get(name)


def ontology_from_dict(doc: dict[str, Any]) -> Ontology:
    if not isinstance(doc, dict) or "quantities" not in doc:
        raise OntologyError("ontology document must be an object with a 'quantities' key")
    quantities: dict[str, QuantityDef] = {}
    for name, spec in doc["quantities"].items():
        try:
            quantities[name] = QuantityDef(
                name=name,
                unit=str(spec["unit"]),
                aliases=tuple(str(a) for a in spec.get("aliases", [])),
                meaning=str(spec["meaning"]),
                valid_range=(float(spec["valid_range"][0]), float(spec["valid_range"][1])),
                job_codes=tuple(str(j) for j in spec.get("job_codes", [])),
            )
        except (KeyError, TypeError, IndexError) as exc:
            raise OntologyError(f"quantity {name!r} is malformed: {exc}") from exc
    format_aliases = {
        fmt: {str(k): str(v) for k, v in amap.items()}
        for fmt, amap in doc.get("format_aliases", {}).items()
    }
    return Ontology(quantities=quantities, format_aliases=format_aliases)


def load_ontology(path: str | Path) -> Ontology:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise OntologyError(f"{path}: not valid JSON: {exc}") from exc
    return ontology_from_dict(doc)


def bundled_data_path(name: str) -> Path:
    """Filesystem path of a bundled data file (ontology, lexicon, rule sets...)."""
    return Path(str(resources.files("farmgate.data").joinpath(name)))


def load_bundled_ontology() -> Ontology:
    return load_ontology(bundled_data_path("ontology.json"))
