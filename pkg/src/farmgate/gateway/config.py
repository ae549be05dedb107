"""Gateway configuration: one JSON document naming every data file.

Input paths resolve relative to the config file's directory and must exist
at startup (fail fast); ``data_dir`` is created when missing.  The
``FARMGATE_LISTEN_PORT`` and ``FARMGATE_DATA_DIR`` environment variables
override their config keys.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from farmgate.model import FarmgateError

ENV_LISTEN_PORT = "FARMGATE_LISTEN_PORT"
ENV_DATA_DIR = "FARMGATE_DATA_DIR"

DEFAULT_TICKET_TTL_MS = 600_000  # 10 minutes


class ConfigError(FarmgateError, ValueError):
    """The gateway configuration is unusable."""


@dataclass(frozen=True)
class GatewayConfig:
    listen_port: int
    data_dir: Path
    ontology_path: Path
    lexicon_path: Path
    rules_path: Path
    fuzzy_path: Path
    bayes_path: Path
    ticket_ttl_ms: int = DEFAULT_TICKET_TTL_MS
    scenario_path: Path | None = None
    cases_path: Path | None = None
    broker_port: int | None = None
    scenario_seed: int = 0
    scenario_rate: float | None = None

    def __post_init__(self) -> None:
        if not 0 <= self.listen_port <= 65535:
            raise ConfigError(f"listen_port must be in 0..65535, got {self.listen_port}")
        if self.ticket_ttl_ms <= 0:
            raise ConfigError(f"ticket_ttl_ms must be > 0, got {self.ticket_ttl_ms}")
        for name in ("ontology_path", "lexicon_path", "rules_path", "fuzzy_path", "bayes_path",
                     "scenario_path", "cases_path"):
            path: Path | None = getattr(self, name)
            if path is not None and not path.is_file():
                raise ConfigError(f"{name} does not exist: {path}")

    @property
    def readings_log(self) -> Path:
        return self.data_dir / "readings.log"

    @property
    def tickets_log(self) -> Path:
        return self.data_dir / "tickets.log"

    @property
    def errors_log(self) -> Path:
        return self.data_dir / "errors.log"


def load_config(path: str | Path) -> GatewayConfig:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return config_from_dict(doc, base_dir=path.parent)


def config_from_dict(doc: dict, base_dir: Path) -> GatewayConfig:
    def resolve(key: str, required: bool = True) -> Path | None:
        value = doc.get(key)
        if value is None:
            if required:
                raise ConfigError(f"config is missing required key {key!r}")
            return None
        return (base_dir / str(value)).resolve()

    listen_port = int(os.environ.get(ENV_LISTEN_PORT, doc.get("listen_port", 8080)))
    data_dir_raw = os.environ.get(ENV_DATA_DIR, doc.get("data_dir"))
    if data_dir_raw is None:
        raise ConfigError("config is missing required key 'data_dir'")
    # The data dir is an output location: resolve against the process CWD so
    # a bundled demo config never writes inside the package.
    data_dir = Path(data_dir_raw).expanduser().resolve()
    data_dir.mkdir(parents=True, exist_ok=True)

    rate = doc.get("scenario_rate")
    return GatewayConfig(
        listen_port=listen_port,
        data_dir=data_dir,
        ontology_path=resolve("ontology_path"),
        lexicon_path=resolve("lexicon_path"),
        rules_path=resolve("rules_path"),
        fuzzy_path=resolve("fuzzy_path"),
        bayes_path=resolve("bayes_path"),
        ticket_ttl_ms=int(doc.get("ticket_ttl_ms", DEFAULT_TICKET_TTL_MS)),
        scenario_path=resolve("scenario_path", required=False),
        cases_path=resolve("cases_path", required=False),
        broker_port=int(doc["broker_port"]) if "broker_port" in doc else None,
        scenario_seed=int(doc.get("scenario_seed", 0)),
        scenario_rate=float(rate) if rate is not None else None,
    )
