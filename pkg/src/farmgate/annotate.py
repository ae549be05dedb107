"""Real-time semantic annotation: voltage -> human-readable value, then
metadata enrichment (id decomposition, location, meaning) from the ontology.

No learning component: annotation is a pure, deterministic function of the
reading, the sensor spec, and the ontology, so it runs at line rate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from farmgate.model import CanonicalRecord, FarmgateError, RawReading
from farmgate.ontology import Ontology
from farmgate.simulate import SensorSpec


class SpecMismatchError(FarmgateError, ValueError):
    """The sensor spec does not belong to the reading's sensor."""


class UnknownJobError(FarmgateError, KeyError):
    """The sensor's job code has no ontology entry."""


@dataclass(frozen=True)
class AnnotatedRecord:
    """A canonical record together with its raw source and annotation cost."""

    canonical: CanonicalRecord
    raw: RawReading
    annotation_latency_us: int

    def __post_init__(self) -> None:
        if self.canonical.sensor_id != self.raw.sensor_id:
            raise ValueError("canonical and raw readings must come from the same sensor")
        if self.annotation_latency_us < 0:
            raise ValueError("annotation latency must be >= 0")


def calibrate(raw: RawReading, spec: SensorSpec) -> float:
    """Convert the reading's voltage to engineering units via the two-point map."""
    if spec.id != raw.sensor_id:
        raise SpecMismatchError(f"spec is for {spec.id}, reading is from {raw.sensor_id}")
    return spec.calibration.to_units(raw.voltage)


def annotate(raw: RawReading, spec: SensorSpec, ontology: Ontology) -> AnnotatedRecord:
    """Combine the calibrated value with its metadata into a canonical record.

    Quantity, unit, meaning, and keywords are resolved from the sensor's job
    code; location comes from the sensor spec; confidence starts at 1.0 and may be
    lowered by downstream stages.
    """
    started = time.perf_counter_ns()
    value = calibrate(raw, spec)
    quantity = ontology.quantity_for_job(raw.sensor_id.job)
    if quantity is None:
        raise UnknownJobError(f"job code {raw.sensor_id.job!r} has no ontology entry")
    canonical = CanonicalRecord(
        sensor_id=raw.sensor_id,
        quantity=quantity.name,
        value=value,
        unit=quantity.unit,
        timestamp=raw.timestamp,
        location=spec.location,
        description=quantity.meaning,
        keywords=quantity.keywords(),
        confidence=1.0,
    )
    latency_us = (time.perf_counter_ns() - started) // 1000
    return AnnotatedRecord(canonical=canonical, raw=raw, annotation_latency_us=int(latency_us))
