"""farmgate: a semantic IoT gateway for smart-farm telemetry.

Layers: simulated sensor fleet -> semantic annotation -> format-agnostic
canonicalization with synonym identification -> topic pub/sub transport ->
uncertainty-aware reasoning (rules, fuzzy, Dempster-Shafer, Bayesian,
case-based) -> operator HTTP service with an approve/override action loop.
"""

from farmgate.model import (
    ActionId,
    CanonicalRecord,
    FarmgateError,
    GeoLocation,
    MalformedSensorIdError,
    RawReading,
    Recommendation,
    ReasonerSource,
    SensorId,
)

__version__ = "0.1.0"

__all__ = [
    "ActionId",
    "CanonicalRecord",
    "FarmgateError",
    "GeoLocation",
    "MalformedSensorIdError",
    "RawReading",
    "Recommendation",
    "ReasonerSource",
    "SensorId",
    "__version__",
]
