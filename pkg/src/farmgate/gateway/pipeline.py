"""The gateway pipeline: simulator -> annotation -> validation -> broker ->
reasoning -> tickets, with append-only persistence and crash recovery.

Every validated canonical record is appended to ``readings.log`` (one wire
line each) before being published; every ticket mutation is appended to
``tickets.log``.  On startup both logs are replayed, so a restart
reconstructs the pre-crash state without re-running any reasoning.
"""

from __future__ import annotations

import logging
import threading
from collections import Counter
from dataclasses import dataclass
from typing import IO

from farmgate.annotate import UnknownJobError, annotate
from farmgate.broker import Broker
from farmgate.gateway.config import GatewayConfig
from farmgate.gateway.tickets import DECISION_APPROVE, ActionTicket, TicketStore, now_ms
from farmgate.interop import ErrorLog, TranslationError, decode, validate
from farmgate.lexicon import load_lexicon
from farmgate.model import ActionId, CanonicalRecord, GeoLocation, RawReading, SensorId
from farmgate.ontology import load_ontology
from farmgate.reasoning import (
    ReasoningEngine,
    SourceReading,
    load_bayes,
    load_cases,
    load_fuzzy,
    load_rules,
)
from farmgate.simulate import Scenario, ScenarioSummary, load_scenario, run_scenario

logger = logging.getLogger(__name__)

#: Numeric actuation codes, also used as the actuation sensor number.
ACTION_CODES = {
    ActionId.IRRIGATE: 1,
    ActionId.ACTIVATE_COOLING: 2,
    ActionId.GROW_LIGHTS_ON: 3,
    ActionId.ADJUST_PH: 4,
}

REASONER_PATTERN = "farm/*/*/*"


@dataclass
class PipelineStats:
    ingested: int = 0
    rejected: int = 0
    reasoned: int = 0
    scenario: ScenarioSummary | None = None


class Gateway:
    """A running gateway instance; create, :meth:`start`, then :meth:`stop`."""

    def __init__(self, config: GatewayConfig) -> None:
        self.config = config
        self.ontology = load_ontology(config.ontology_path)
        self.lexicon = load_lexicon(config.lexicon_path)
        self.engine = ReasoningEngine(
            rules=load_rules(config.rules_path, self.ontology.quantities),
            fuzzy_variables=load_fuzzy(config.fuzzy_path),
            bayes_net=load_bayes(config.bayes_path),
            case_base=(
                load_cases(config.cases_path, self.ontology) if config.cases_path else None
            ),
            ontology=self.ontology,
        )
        self.scenario: Scenario | None = (
            load_scenario(config.scenario_path) if config.scenario_path else None
        )
        self.sensor_specs = {spec.id: spec for spec in (self.scenario.sensors if self.scenario else ())}

        self.broker = Broker()
        self.error_log = ErrorLog(config.errors_log)
        self.tickets = TicketStore(config.ticket_ttl_ms, log_path=config.tickets_log)
        self.stats = PipelineStats()
        self.started_at_ms = now_ms()

        self._ingest_lock = threading.Lock()
        self._readings: list[CanonicalRecord] = []
        self._readings_fh: IO[str] | None = None
        self._latest_by_quantity: dict[str, CanonicalRecord] = {}
        self._latest_by_sensor: dict[tuple[str, SensorId], CanonicalRecord] = {}

        self._stopping = threading.Event()
        self._scenario_done = threading.Event()
        self._threads: list[threading.Thread] = []
        self._api = None
        self._sub = None

        self._recover_readings()

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> "Gateway":
        from farmgate.gateway.api import GatewayApi  # local import breaks the cycle

        self._readings_fh = open(self.config.readings_log, "a", encoding="utf-8")
        self._sub = self.broker.subscribe(REASONER_PATTERN)
        reasoner = threading.Thread(target=self._reason_loop, name="farmgate-reasoner", daemon=True)
        reasoner.start()
        self._threads.append(reasoner)

        if self.config.broker_port is not None:
            host, port = self.broker.start_listener(port=self.config.broker_port)
            logger.info("broker frame listener on %s:%d", host, port)

        self._api = GatewayApi(self, port=self.config.listen_port)
        self._api.start()
        logger.info("gateway API on http://%s:%d", *self._api.address)

        if self.scenario is not None:
            replay = threading.Thread(target=self._scenario_loop, name="farmgate-scenario", daemon=True)
            replay.start()
            self._threads.append(replay)
        else:
            self._scenario_done.set()
        return self

    def stop(self) -> None:
        self._stopping.set()
        if self._api is not None:
            self._api.stop()
        for thread in self._threads:
            thread.join(timeout=5.0)
        self.broker.stop()
        with self._ingest_lock:
            if self._readings_fh is not None:
                self._readings_fh.close()
                self._readings_fh = None

    def drain(self, timeout: float = 10.0) -> bool:
        """Wait until the scenario finished and the reasoner caught up."""
        deadline = threading.Event()
        waited = 0.0
        while waited <= timeout:
            with self._ingest_lock:
                ingested = self.stats.ingested
            caught_up = self.stats.reasoned + (self._sub.dropped if self._sub else 0) >= ingested
            if self._scenario_done.is_set() and caught_up and (not self._sub or self._sub.qsize() == 0):
                return True
            deadline.wait(0.01)
            waited += 0.01
        return False

    @property
    def api_address(self) -> tuple[str, int]:
        if self._api is None:
            raise RuntimeError("gateway is not started")
        return self._api.address

    # -- ingest paths -------------------------------------------------------

    def ingest_record(self, record: CanonicalRecord) -> None:
        """Validate, persist, and publish one canonical record.

        Raises :class:`TranslationError` (also appended to the error log)
        when validation fails; the record is then never published.
        """
        problem = validate(record, self.ontology)
        if problem is not None:
            self.stats.rejected += 1
            self.error_log.append(problem)
            raise problem
        with self._ingest_lock:
            if self._readings_fh is not None:
                self._readings_fh.write(record.to_wire() + "\n")
                self._readings_fh.flush()
            self._readings.append(record)
            self.stats.ingested += 1
        self.broker.publish(record)

    def ingest_payload(self, payload: bytes, fmt: str = "json") -> CanonicalRecord:
        """Decode an external payload and feed it into the pipeline."""
        record = decode(payload, fmt, self.ontology, error_log=self.error_log)
        self.ingest_record(record)
        return record

    def readings(
        self, since: int | None = None, quantity: str | None = None
    ) -> list[CanonicalRecord]:
        """Persisted records, time-ascending; ``since`` is exclusive."""
        with self._ingest_lock:
            snapshot = list(self._readings)
        if since is not None:
            snapshot = [r for r in snapshot if r.timestamp > since]
        if quantity is not None:
            snapshot = [r for r in snapshot if r.quantity == quantity]
        snapshot.sort(key=lambda r: r.timestamp)
        return snapshot

    # -- decisions ----------------------------------------------------------

    def decide_ticket(self, ticket_id: str, decision: str, note: str = "") -> ActionTicket:
        ticket = self.tickets.decide(ticket_id, decision, note)
        if decision == DECISION_APPROVE:
            self._publish_actuation(ticket)
        return ticket

    def _publish_actuation(self, ticket: ActionTicket) -> None:
        """Approved actions are announced on farm/<app>/ACT/<code>."""
        quantity = self.ontology.quantity_for_job("ACT")
        if quantity is None:
            logger.warning("ontology has no ACT job code; actuation not published")
            return
        code = ACTION_CODES.get(ticket.recommendation.action_id, 9)
        record = CanonicalRecord(
            sensor_id=SensorId("ACT", code, self._application_code()),
            quantity=quantity.name,
            value=float(code),
            unit=quantity.unit,
            timestamp=now_ms(),
            location=self._home_location(),
            description=quantity.meaning,
            keywords=quantity.keywords() + (ticket.recommendation.action_id.value.replace("_", "-"),),
            confidence=1.0,
        )
        try:
            self.ingest_record(record)
        except TranslationError as exc:
            logger.warning("actuation record rejected: %s", exc)

    def _application_code(self) -> str:
        apps = Counter(spec.id.application for spec in self.sensor_specs.values())
        return apps.most_common(1)[0][0] if apps else "AGR"

    def _home_location(self) -> GeoLocation:
        for spec in self.sensor_specs.values():
            return spec.location
        return GeoLocation(0.0, 0.0)

    # -- pipeline threads ---------------------------------------------------

    def _scenario_loop(self) -> None:
        try:
            summary = run_scenario(
                self.scenario,
                self._ingest_raw,
                seed=self.config.scenario_seed,
                rate=self.config.scenario_rate,
                should_stop=self._stopping.is_set,
            )
            self.stats.scenario = summary
            logger.info("scenario finished: %d emitted, %d dropped", summary.emitted, summary.dropped)
        finally:
            self._scenario_done.set()

    def _ingest_raw(self, raw: RawReading) -> None:
        spec = self.sensor_specs.get(raw.sensor_id)
        if spec is None:
            logger.warning("no spec for %s; reading dropped", raw.sensor_id)
            return
        try:
            annotated = annotate(raw, spec, self.ontology)
        except UnknownJobError as exc:
            logger.warning("annotation failed: %s", exc)
            return
        try:
            self.ingest_record(annotated.canonical)
        except TranslationError:
            pass  # already logged to the error log

    def _reason_loop(self) -> None:
        last_sweep = 0.0
        while not (self._stopping.is_set() and self._sub.qsize() == 0):
            record = self._sub.get(timeout=0.05)
            if record is not None:
                try:
                    self._apply_record(record)
                except Exception:  # keep the reasoner alive: one bad record is not fatal
                    logger.exception("reasoning failed for %s", record.sensor_id)
                self.stats.reasoned += 1
            elif self._stopping.is_set():
                break
            clock = now_ms()
            if clock - last_sweep >= 1000:
                last_sweep = clock
                for expired in self.tickets.sweep():
                    logger.info("ticket %s expired undecided", expired.ticket_id)
        self.tickets.sweep()

    def _apply_record(self, record: CanonicalRecord) -> None:
        self._latest_by_sensor[(record.quantity, record.sensor_id)] = record
        self._latest_by_quantity[record.quantity] = record
        values = {q: r.value for q, r in self._latest_by_quantity.items()}
        sources: dict[str, list[SourceReading]] = {}
        for (quantity, sensor_id), latest in self._latest_by_sensor.items():
            sources.setdefault(quantity, []).append(
                SourceReading(sensor=str(sensor_id), value=latest.value, confidence=latest.confidence)
            )
        result = self.engine.evaluate(values, sources)
        for recommendation in result.recommendations:
            self.tickets.open_or_refresh(
                recommendation, result.evidence.get(recommendation.action_id, ())
            )

    # -- recovery -----------------------------------------------------------

    def _recover_readings(self) -> None:
        path = self.config.readings_log
        if not path.exists():
            return
        recovered = 0
        with open(path, encoding="utf-8") as fh:
            for line in fh.read().split("\n"):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = CanonicalRecord.from_wire(line)
                except ValueError:
                    logger.warning("skipping torn readings.log line")
                    continue
                self._readings.append(record)
                self._latest_by_sensor[(record.quantity, record.sensor_id)] = record
                self._latest_by_quantity[record.quantity] = record
                recovered += 1
        if recovered:
            logger.info("recovered %d readings from %s", recovered, path)


def run_pipeline(config: GatewayConfig) -> Gateway:
    """Build and start a gateway; the handle owns every thread it spawned."""
    return Gateway(config).start()
