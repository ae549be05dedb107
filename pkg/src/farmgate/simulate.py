"""Perception-layer simulator: a configurable fleet of passive/active
sensors producing voltage-domain readings from replay scripts or periodic
generators.

Scenario files are plain CSV-style text with tag-prefixed rows::

    # comment
    duration,<ms>
    sensor,<id>,<kind>,<quantity>,<v0>,<y0>,<v1>,<y1>,<lat>,<lon>,<period_ms>,<noise_sd>
    generate,<sensor_id>,<base_value>
    sample,<timestamp_ms>,<sensor_id>,<true_value>

``sensor`` rows declare the fleet (two-point volts->units calibration,
location, sampling period, gaussian noise in engineering units).
``sample`` rows replay explicit readings; ``generate`` rows emit
``base_value`` every ``period_ms`` from t=0 until the scenario duration.
Malformed sample/generate rows are counted as dropped, never fatal.
"""

from __future__ import annotations

import csv
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from farmgate.model import FarmgateError, GeoLocation, RawReading, SensorId


class OutOfRangeError(FarmgateError, ValueError):
    """A true value maps outside the representable voltage range."""


class ScenarioError(FarmgateError, ValueError):
    """The scenario header block is unusable."""


@dataclass(frozen=True)
class AdcConfig:
    """ADC quantization model (defaults match a 10-bit, 5 V microcontroller)."""

    resolution_bits: int = 10
    reference_volts: float = 5.0

    def __post_init__(self) -> None:
        if self.resolution_bits < 1 or self.reference_volts <= 0:
            raise ValueError("ADC needs >= 1 bit of resolution and a positive reference voltage")

    @property
    def max_counts(self) -> int:
        return (1 << self.resolution_bits) - 1

    def quantize(self, volts: float) -> int:
        counts = round(volts / self.reference_volts * self.max_counts)
        return min(max(counts, 0), self.max_counts)


DEFAULT_ADC = AdcConfig()


@dataclass(frozen=True)
class Calibration:
    """Two-point linear map between volts and engineering units."""

    v0: float
    y0: float
    v1: float
    y1: float

    def __post_init__(self) -> None:
        if self.v0 == self.v1:
            raise ValueError("calibration voltage points must differ")
        if self.y0 == self.y1:
            raise ValueError("calibration unit points must differ")

    def to_units(self, volts: float) -> float:
        return self.y0 + (volts - self.v0) * (self.y1 - self.y0) / (self.v1 - self.v0)

    def to_volts(self, units: float) -> float:
        return self.v0 + (units - self.y0) * (self.v1 - self.v0) / (self.y1 - self.y0)


@dataclass(frozen=True)
class SensorSpec:
    """Static description of one simulated sensor."""

    id: SensorId
    kind: str  # "passive" | "active"
    quantity: str
    calibration: Calibration
    location: GeoLocation
    period_ms: int
    noise_sd: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("passive", "active"):
            raise ValueError(f"sensor kind must be passive or active, got {self.kind!r}")
        if self.period_ms <= 0:
            raise ValueError(f"period must be > 0 ms, got {self.period_ms}")
        if self.noise_sd < 0:
            raise ValueError(f"noise_sd must be >= 0, got {self.noise_sd}")


@dataclass(frozen=True)
class ScriptRow:
    timestamp: int
    sensor_id: SensorId
    true_value: float


@dataclass(frozen=True)
class Scenario:
    """A sensor fleet plus the scripted readings to replay."""

    sensors: tuple[SensorSpec, ...]
    script: tuple[ScriptRow, ...]
    duration_ms: int
    malformed_rows: int = 0

    def __post_init__(self) -> None:
        last_ts: dict[SensorId, int] = {}
        for row in self.script:
            prev = last_ts.get(row.sensor_id)
            if prev is not None and row.timestamp < prev:
                raise ScenarioError(
                    f"script timestamps must be non-decreasing per sensor; "
                    f"{row.sensor_id} goes {prev} -> {row.timestamp}"
                )
            last_ts[row.sensor_id] = row.timestamp

    def spec_for(self, sensor_id: SensorId) -> SensorSpec | None:
        for spec in self.sensors:
            if spec.id == sensor_id:
                return spec
        return None


@dataclass
class ScenarioSummary:
    emitted: int = 0
    dropped: int = 0


def sample(
    spec: SensorSpec,
    true_value: float,
    rng_seed: int | random.Random = 0,
    timestamp_ms: int = 0,
    adc: AdcConfig = DEFAULT_ADC,
) -> RawReading:
    """Produce one voltage-domain reading for a true engineering-units value.

    Gaussian noise (``spec.noise_sd``) is added in engineering units before
    the inverse calibration; the reading keeps the exact analog voltage and
    its ADC quantization.  Raises :class:`OutOfRangeError` when the value
    maps below 0 V or above the ADC reference.
    """
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    noisy = true_value + (rng.gauss(0.0, spec.noise_sd) if spec.noise_sd > 0 else 0.0)
    volts = spec.calibration.to_volts(noisy)
    if volts < 0.0 or volts > adc.reference_volts:
        raise OutOfRangeError(
            f"{spec.id}: value {noisy} maps to {volts:.4f} V, outside [0, {adc.reference_volts}] V"
        )
    return RawReading(
        sensor_id=spec.id,
        voltage=volts,
        adc_counts=adc.quantize(volts),
        timestamp=timestamp_ms,
    )


def run_scenario(
    scenario: Scenario,
    sink: Callable[[RawReading], None],
    seed: int = 0,
    adc: AdcConfig = DEFAULT_ADC,
    rate: float | None = None,
    should_stop: Callable[[], bool] | None = None,
) -> ScenarioSummary:
    """Replay a scenario into ``sink`` in global timestamp order.

    Deterministic for a given (scenario, seed) pair.  ``rate`` > 0 paces
    emission against the wall clock (1.0 = real time); ``None`` replays as
    fast as possible.  Rows whose values fall outside the representable
    voltage range are counted as dropped, as are rows that were malformed
    at load time.  ``should_stop`` is polled between rows (and while
    pacing) so a host can abort a long replay.
    """
    summary = ScenarioSummary(dropped=scenario.malformed_rows)
    rng = random.Random(seed)
    rows = sorted(scenario.script, key=lambda r: r.timestamp)
    start = time.monotonic()
    for row in rows:
        if should_stop is not None and should_stop():
            break
        spec = scenario.spec_for(row.sensor_id)
        if spec is None:
            summary.dropped += 1
            continue
        try:
            reading = sample(spec, row.true_value, rng, timestamp_ms=row.timestamp, adc=adc)
        except OutOfRangeError:
            summary.dropped += 1
            continue
        if rate is not None and rate > 0:
            target = start + (row.timestamp / 1000.0) / rate
            while True:
                delay = target - time.monotonic()
                if delay <= 0:
                    break
                if should_stop is not None and should_stop():
                    return summary
                time.sleep(min(delay, 0.1))
        sink(reading)
        summary.emitted += 1
    return summary


# ---------------------------------------------------------------------------
# Scenario file I/O
# ---------------------------------------------------------------------------


def load_scenario(path: str | Path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh)


def parse_scenario(lines: Iterable[str]) -> Scenario:
    sensors: list[SensorSpec] = []
    script: list[ScriptRow] = []
    generators: list[tuple[SensorId, float]] = []
    duration_ms = 0
    malformed = 0

    for row in csv.reader(lines):
        if not row or row[0].lstrip().startswith("#"):
            continue
        tag = row[0].strip()
        if tag == "sensor":
            sensors.append(_parse_sensor_row(row))
        elif tag == "duration":
            try:
                duration_ms = int(row[1])
            except (IndexError, ValueError) as exc:
                raise ScenarioError(f"bad duration row: {row!r}") from exc
        elif tag == "sample":
            parsed = _try_parse_sample(row)
            if parsed is None:
                malformed += 1
            else:
                script.append(parsed)
        elif tag == "generate":
            try:
                generators.append((SensorId.parse(row[1].strip()), float(row[2])))
            except (IndexError, ValueError):
                malformed += 1
        else:
            malformed += 1

    # Enforce per-sensor monotonicity on the authored order, before the
    # global sort below would silently repair it.
    last_ts: dict[SensorId, int] = {}
    for parsed_row in script:
        prev = last_ts.get(parsed_row.sensor_id)
        if prev is not None and parsed_row.timestamp < prev:
            raise ScenarioError(
                f"script timestamps must be non-decreasing per sensor; "
                f"{parsed_row.sensor_id} goes {prev} -> {parsed_row.timestamp}"
            )
        last_ts[parsed_row.sensor_id] = parsed_row.timestamp

    if not duration_ms:
        duration_ms = max((r.timestamp for r in script), default=0)

    by_id = {s.id: s for s in sensors}
    for sensor_id, base_value in generators:
        spec = by_id.get(sensor_id)
        if spec is None:
            malformed += 1
            continue
        t = 0
        while t <= duration_ms:
            script.append(ScriptRow(timestamp=t, sensor_id=sensor_id, true_value=base_value))
            t += spec.period_ms

    script.sort(key=lambda r: r.timestamp)
    return Scenario(
        sensors=tuple(sensors),
        script=tuple(script),
        duration_ms=duration_ms,
        malformed_rows=malformed,
    )


def _parse_sensor_row(row: list[str]) -> SensorSpec:
    if len(row) != 12:
        raise ScenarioError(f"sensor row needs 12 columns, got {len(row)}: {row!r}")
    try:
        return SensorSpec(
            id=SensorId.parse(row[1].strip()),
            kind=row[2].strip(),
            quantity=row[3].strip(),
            calibration=Calibration(
                v0=float(row[4]), y0=float(row[5]), v1=float(row[6]), y1=float(row[7])
            ),
            location=GeoLocation(float(row[8]), float(row[9])),
            period_ms=int(row[10]),
            noise_sd=float(row[11]),
        )
    except (ValueError, TypeError) as exc:
        raise ScenarioError(f"bad sensor row {row!r}: {exc}") from exc


def _try_parse_sample(row: list[str]) -> ScriptRow | None:
    if len(row) != 4:
        return None
    try:
        return ScriptRow(
            timestamp=int(row[1]),
            sensor_id=SensorId.parse(row[2].strip()),
            true_value=float(row[3]),
        )
    except (ValueError, TypeError):
        return None
