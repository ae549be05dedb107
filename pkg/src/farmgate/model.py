"""Shared domain types: sensor identity, geolocation, raw and canonical
readings, and action recommendations.

Every type here is immutable after construction, validates its invariants in
``__post_init__``, and is safe to share across threads.  ``CanonicalRecord``
also owns the canonical wire form (a single-line flat JSON object) used by
transport frames, persistent logs, and the ingest endpoint.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any, Sequence


class FarmgateError(Exception):
    """Base class for all domain errors raised by this package."""


class MalformedSensorIdError(FarmgateError, ValueError):
    """Sensor id text does not split into job / number / application."""


_SENSOR_ID_RE = re.compile(r"^([A-Z]+)([0-9]+)([A-Z]+)$")
_CODE_RE = re.compile(r"^[A-Z]+$")
_QUANTITY_RE = re.compile(r"^[a-z][a-z0-9_]*$")
_KEYWORD_RE = re.compile(r"^[a-z0-9][a-z0-9_-]*$")

MAX_SENSOR_NUMBER = 9999

#: Field names of the canonical wire form, in serialization order.
WIRE_FIELDS = (
    "sensor_id",
    "quantity",
    "value",
    "unit",
    "timestamp",
    "lat",
    "lon",
    "description",
    "keywords",
    "confidence",
)


def _check_line_text(value: str, name: str) -> None:
    """Reject control characters in single-line text fields."""
    if not value:
        raise ValueError(f"{name} must be non-empty")
    for ch in value:
        if ord(ch) < 0x20 or ch == "\x7f":
            raise ValueError(f"{name} must not contain control characters")


def _check_free_text(value: str, name: str) -> None:
    """Free text may span lines but must stay XML/CSV-safe (no \\r, no other controls)."""
    for ch in value:
        if (ord(ch) < 0x20 and ch not in "\n\t") or ch == "\x7f":
            raise ValueError(f"{name} must not contain control characters other than newline/tab")


@dataclass(frozen=True)
class SensorId:
    """Three-part structured sensor identifier: job code, number, application code.

    Renders as the concatenation ``job + number + application`` with no zero
    padding, e.g. ``TEMP102SC``: a temperature sensor, id 102, smart-city
    application.
    """

    job: str
    number: int
    application: str

    def __post_init__(self) -> None:
        if not _CODE_RE.match(self.job):
            raise MalformedSensorIdError(f"job code must be uppercase alphabetic, got {self.job!r}")
        if not _CODE_RE.match(self.application):
            raise MalformedSensorIdError(
                f"application code must be uppercase alphabetic, got {self.application!r}"
            )
        if not isinstance(self.number, int) or isinstance(self.number, bool):
            raise MalformedSensorIdError(f"sensor number must be an int, got {self.number!r}")
        if not 1 <= self.number <= MAX_SENSOR_NUMBER:
            raise MalformedSensorIdError(
                f"sensor number must be in 1..{MAX_SENSOR_NUMBER}, got {self.number}"
            )

    @classmethod
    def parse(cls, text: str) -> "SensorId":
        """Parse ``TEMP102SC``-style text. Raises ``MalformedSensorIdError``.

        Leading zeros in the numeric segment are rejected so that
        ``render(parse(x)) == x`` holds for every accepted input.
        """
        if not isinstance(text, str) or not text:
            raise MalformedSensorIdError("sensor id must be non-empty text")
        m = _SENSOR_ID_RE.match(text)
        if m is None:
            raise MalformedSensorIdError(
                f"sensor id must be <JOB><number><APP>, e.g. TEMP102SC; got {text!r}"
            )
        job, digits, application = m.groups()
        if digits.startswith("0"):
            raise MalformedSensorIdError(f"sensor number must not have leading zeros: {text!r}")
        return cls(job=job, number=int(digits), application=application)

    def render(self) -> str:
        return f"{self.job}{self.number}{self.application}"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class GeoLocation:
    """WGS84 position of a sensor."""

    latitude: float
    longitude: float

    def __post_init__(self) -> None:
        lat = float(self.latitude)
        lon = float(self.longitude)
        if not math.isfinite(lat) or not -90.0 <= lat <= 90.0:
            raise ValueError(f"latitude must be in [-90, 90], got {self.latitude!r}")
        if not math.isfinite(lon) or not -180.0 <= lon <= 180.0:
            raise ValueError(f"longitude must be in [-180, 180], got {self.longitude!r}")
        object.__setattr__(self, "latitude", lat)
        object.__setattr__(self, "longitude", lon)


@dataclass(frozen=True)
class RawReading:
    """A voltage-domain sample as produced by the perception layer.

    ``voltage`` is the exact (noisy) analog value; ``adc_counts`` is its
    quantization under the sampling ADC's reference voltage and resolution,
    consistent within one count.
    """

    sensor_id: SensorId
    voltage: float
    adc_counts: int
    timestamp: int

    def __post_init__(self) -> None:
        v = float(self.voltage)
        if not math.isfinite(v) or v < 0.0:
            raise ValueError(f"voltage must be finite and >= 0, got {self.voltage!r}")
        if not isinstance(self.adc_counts, int) or isinstance(self.adc_counts, bool):
            raise ValueError(f"adc_counts must be an int, got {self.adc_counts!r}")
        if self.adc_counts < 0:
            raise ValueError(f"adc_counts must be >= 0, got {self.adc_counts}")
        if not isinstance(self.timestamp, int) or isinstance(self.timestamp, bool):
            raise ValueError(f"timestamp must be integer milliseconds, got {self.timestamp!r}")
        if self.timestamp < 0:
            raise ValueError(f"timestamp must be >= 0, got {self.timestamp}")
        object.__setattr__(self, "voltage", v)


class ActionId(str, Enum):
    """Actions the gateway can recommend to the operator."""

    IRRIGATE = "irrigate"
    ACTIVATE_COOLING = "activate_cooling"
    GROW_LIGHTS_ON = "grow_lights_on"
    ADJUST_PH = "adjust_ph"


class ReasonerSource(str, Enum):
    """Which reasoner produced a recommendation."""

    RULE = "rule"
    FUZZY = "fuzzy"
    DEMPSTER_SHAFER = "dempster_shafer"
    BAYESIAN = "bayesian"
    CASE_BASED = "case_based"


def _check_confidence(value: float, name: str = "confidence") -> float:
    c = float(value)
    if not math.isfinite(c) or not 0.0 <= c <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value!r}")
    return c


@dataclass(frozen=True)
class CanonicalRecord:
    """The shared intermediate form every payload is mapped into.

    This is the unit of transport and reasoning.  Quantity/unit consistency
    against the active ontology is enforced by the interop validator; this
    type enforces everything checkable without an ontology.
    """

    sensor_id: SensorId
    quantity: str
    value: float
    unit: str
    timestamp: int
    location: GeoLocation
    description: str
    keywords: tuple[str, ...]
    confidence: float

    def __post_init__(self) -> None:
        if not _QUANTITY_RE.match(self.quantity):
            raise ValueError(f"quantity must be a lowercase token, got {self.quantity!r}")
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError(f"value must be finite, got {self.value!r}")
        _check_line_text(self.unit, "unit")
        if not isinstance(self.timestamp, int) or isinstance(self.timestamp, bool):
            raise ValueError(f"timestamp must be integer milliseconds, got {self.timestamp!r}")
        if self.timestamp < 0:
            raise ValueError(f"timestamp must be >= 0, got {self.timestamp}")
        _check_free_text(self.description, "description")
        kws = tuple(self.keywords)
        for kw in kws:
            if not isinstance(kw, str) or not _KEYWORD_RE.match(kw):
                raise ValueError(f"keywords must be lowercase [a-z0-9_-] tokens, got {kw!r}")
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "keywords", kws)
        object.__setattr__(self, "confidence", _check_confidence(self.confidence))

    def to_wire(self) -> str:
        """Serialize to the canonical wire form: one flat ASCII JSON line."""
        obj = {
            "sensor_id": self.sensor_id.render(),
            "quantity": self.quantity,
            "value": self.value,
            "unit": self.unit,
            "timestamp": self.timestamp,
            "lat": self.location.latitude,
            "lon": self.location.longitude,
            "description": self.description,
            "keywords": list(self.keywords),
            "confidence": self.confidence,
        }
        return json.dumps(obj, ensure_ascii=True, separators=(",", ":"))

    @classmethod
    def from_wire(cls, text: str) -> "CanonicalRecord":
        """Parse the canonical wire form; strict inverse of :meth:`to_wire`."""
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"canonical wire form is not valid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise ValueError("canonical wire form must be a JSON object")
        return cls.from_wire_dict(obj)

    @classmethod
    def from_wire_dict(cls, obj: dict[str, Any]) -> "CanonicalRecord":
        """Build a record from an already-parsed flat wire object."""
        missing = [k for k in WIRE_FIELDS if k not in obj]
        extra = [k for k in obj if k not in WIRE_FIELDS]
        if missing:
            raise ValueError(f"canonical record missing fields: {', '.join(missing)}")
        if extra:
            raise ValueError(f"canonical record has unknown fields: {', '.join(sorted(extra))}")
        keywords = obj["keywords"]
        if not isinstance(keywords, (list, tuple)) or not all(isinstance(k, str) for k in keywords):
            raise ValueError("keywords must be a list of strings")
        return cls(
            sensor_id=SensorId.parse(_require_str(obj["sensor_id"], "sensor_id")),
            quantity=_require_str(obj["quantity"], "quantity"),
            value=_require_number(obj["value"], "value"),
            unit=_require_str(obj["unit"], "unit"),
            timestamp=_require_int(obj["timestamp"], "timestamp"),
            location=GeoLocation(
                latitude=_require_number(obj["lat"], "lat"),
                longitude=_require_number(obj["lon"], "lon"),
            ),
            description=_require_str(obj["description"], "description"),
            keywords=tuple(keywords),
            confidence=_require_number(obj["confidence"], "confidence"),
        )

    def to_wire_dict(self) -> dict[str, Any]:
        return json.loads(self.to_wire())


def _require_str(value: Any, name: str) -> str:
    if not isinstance(value, str):
        raise ValueError(f"{name} must be a string, got {type(value).__name__}")
    return value


def _require_number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{name} must be a number, got {type(value).__name__}")
    return float(value)


def _require_int(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer, got {type(value).__name__}")
    return value


@dataclass(frozen=True)
class Recommendation:
    """An action suggested by one reasoner (or the aggregate of several).

    ``alternatives`` lists the other candidate actions with their
    confidences; the explanation always embeds the measured value that
    triggered the condition.
    """

    action_id: ActionId
    condition: str
    explanation: str
    confidence: float
    source: ReasonerSource
    alternatives: tuple[tuple[ActionId, float], ...] = ()

    def __post_init__(self) -> None:
        action = ActionId(self.action_id)
        source = ReasonerSource(self.source)
        alts = []
        for entry in self.alternatives:
            alt_action, alt_conf = entry
            alts.append((ActionId(alt_action), _check_confidence(alt_conf, "alternative confidence")))
        object.__setattr__(self, "action_id", action)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "confidence", _check_confidence(self.confidence))
        object.__setattr__(self, "alternatives", tuple(alts))

    def to_dict(self) -> dict[str, Any]:
        return {
            "action_id": self.action_id.value,
            "condition": self.condition,
            "explanation": self.explanation,
            "confidence": self.confidence,
            "source": self.source.value,
            "alternatives": [[a.value, c] for a, c in self.alternatives],
        }

    @classmethod
    def from_dict(cls, obj: dict[str, Any]) -> "Recommendation":
        return cls(
            action_id=ActionId(obj["action_id"]),
            condition=str(obj["condition"]),
            explanation=str(obj["explanation"]),
            confidence=float(obj["confidence"]),
            source=ReasonerSource(obj["source"]),
            alternatives=tuple((ActionId(a), float(c)) for a, c in obj.get("alternatives", [])),
        )


def parse_sensor_id(text: str) -> SensorId:
    """Module-level alias for :meth:`SensorId.parse`."""
    return SensorId.parse(text)


def render_sensor_id(sensor_id: SensorId) -> str:
    """Module-level alias for :meth:`SensorId.render`."""
    return sensor_id.render()
