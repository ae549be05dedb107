"""Shared test utilities: randomized-but-seeded record generation and
throwaway gateway configs wired to the bundled data files."""

import json
import random
import string
from pathlib import Path

from farmgate.model import CanonicalRecord, GeoLocation, SensorId
from farmgate.ontology import Ontology, bundled_data_path

_TEXT_POOL = [
    "ambient",
    "café",
    "reading",
    "a,b",
    'he said "ok"',
    "x=y",
    "p|q",
    "<tag> & more>",
    "line\nbreak",
    "tab\there",
    "ümlaut",
    "100%",
    "τ=3",
    "back\\slash",
]

_KEYWORD_ALPHABET = string.ascii_lowercase + string.digits + "_-"


def random_sensor_id(rng: random.Random) -> SensorId:
    return SensorId(
        job="".join(rng.choices(string.ascii_uppercase, k=rng.randint(2, 5))),
        number=rng.randint(1, 9999),
        application="".join(rng.choices(string.ascii_uppercase, k=rng.randint(2, 3))),
    )


def random_record(rng: random.Random, ontology: Ontology) -> CanonicalRecord:
    """A random record that passes ontology validation."""
    quantity = rng.choice(sorted(ontology.quantities))
    qd = ontology.quantities[quantity]
    lo, hi = qd.valid_range
    keywords = []
    for _ in range(rng.randint(0, 4)):
        first = rng.choice(string.ascii_lowercase + string.digits)
        rest = "".join(rng.choices(_KEYWORD_ALPHABET, k=rng.randint(0, 7)))
        keywords.append(first + rest)
    return CanonicalRecord(
        sensor_id=random_sensor_id(rng),
        quantity=quantity,
        value=rng.uniform(lo, hi),
        unit=qd.unit,
        timestamp=rng.randint(0, 2**45),
        location=GeoLocation(rng.uniform(-90, 90), rng.uniform(-180, 180)),
        description=" ".join(rng.choices(_TEXT_POOL, k=rng.randint(0, 5))) or "reading",
        keywords=tuple(keywords),
        confidence=rng.random(),
    )


def write_gateway_config(
    tmp_path: Path,
    scenario: str | None = "scenario_case_study.csv",
    data_dir: Path | None = None,
    **overrides,
) -> Path:
    """A config file in ``tmp_path`` pointing at the bundled data files."""
    doc = {
        "listen_port": 0,
        "data_dir": str(data_dir or tmp_path / "gw-data"),
        "ontology_path": str(bundled_data_path("ontology.json")),
        "lexicon_path": str(bundled_data_path("lexicon.json")),
        "rules_path": str(bundled_data_path("rules.json")),
        "fuzzy_path": str(bundled_data_path("fuzzy.json")),
        "bayes_path": str(bundled_data_path("bayes.json")),
        "ticket_ttl_ms": 600_000,
    }
    if scenario is not None:
        doc["scenario_path"] = str(bundled_data_path(scenario))
    doc.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return path
