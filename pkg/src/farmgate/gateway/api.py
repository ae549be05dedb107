"""Operator-facing HTTP/1.1 JSON API.

Endpoints::

    GET  /api/health                          -> {status, uptime_ms}
    GET  /api/sensors                         -> [sensor summaries]
    GET  /api/readings?since=<ts>&quantity=<q> -> [records], time-ascending
    GET  /api/recommendations?status=<s>      -> [tickets w/ evidence]
    POST /api/actions/<ticket_id>             -> decided ticket (409 on repeat)
    POST /api/ingest                          -> 202 after validation, 422 on failure

Responses carry permissive CORS headers so a dashboard served from another
origin can poll and decide.
"""

from __future__ import annotations

import json
import logging
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import TYPE_CHECKING, Any
from urllib.parse import parse_qs, urlsplit

from farmgate.gateway.tickets import (
    AlreadyDecidedError,
    InvalidDecisionError,
    UnknownTicketError,
    now_ms,
)
from farmgate.interop import TranslationError

if TYPE_CHECKING:
    from farmgate.gateway.pipeline import Gateway

logger = logging.getLogger(__name__)

MAX_BODY_BYTES = 1024 * 1024

_ACTION_PATH = re.compile(r"^/api/actions/([A-Za-z0-9_-]+)$")


class GatewayApi:
    """Threaded HTTP server bound to a gateway instance."""

    def __init__(self, gateway: "Gateway", host: str = "127.0.0.1", port: int = 8080) -> None:
        self._server = ThreadingHTTPServer((host, port), _Handler)
        self._server.daemon_threads = True
        self._server.gateway = gateway
        self.address: tuple[str, int] = self._server.server_address[:2]
        self._thread = threading.Thread(target=self._server.serve_forever, name="farmgate-api", daemon=True)

    def start(self) -> None:
        self._thread.start()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5.0)


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "farmgate"

    @property
    def gateway(self) -> "Gateway":
        return self.server.gateway

    # -- routing ------------------------------------------------------------

    def do_GET(self) -> None:  # noqa: N802 (http.server naming)
        url = urlsplit(self.path)
        query = parse_qs(url.query)
        try:
            if url.path == "/api/health":
                self._send(200, {
                    "status": "ok",
                    "uptime_ms": now_ms() - self.gateway.started_at_ms,
                })
            elif url.path == "/api/sensors":
                self._send(200, [self._sensor_summary(s) for s in
                                 self.gateway.sensor_specs.values()])
            elif url.path == "/api/readings":
                since = self._int_param(query, "since")
                quantity = query.get("quantity", [None])[0]
                records = self.gateway.readings(since=since, quantity=quantity)
                self._send(200, [r.to_wire_dict() for r in records])
            elif url.path == "/api/recommendations":
                status = query.get("status", [None])[0]
                tickets = self.gateway.tickets.list(status=status)
                self._send(200, [t.to_dict() for t in tickets])
            else:
                self._send(404, {"error": "not-found", "path": url.path})
        except ValueError as exc:
            self._send(422, {"error": "bad-request", "detail": str(exc)})

    def do_POST(self) -> None:  # noqa: N802
        url = urlsplit(self.path)
        action_match = _ACTION_PATH.match(url.path)
        try:
            if action_match:
                self._handle_decision(action_match.group(1))
            elif url.path == "/api/ingest":
                self._handle_ingest()
            else:
                self._send(404, {"error": "not-found", "path": url.path})
        except ValueError as exc:
            self._send(422, {"error": "bad-request", "detail": str(exc)})

    def do_OPTIONS(self) -> None:  # noqa: N802  (CORS preflight)
        self.send_response(204)
        self._cors_headers()
        self.send_header("Content-Length", "0")
        self.end_headers()

    # -- endpoint bodies ------------------------------------------------------

    def _handle_decision(self, ticket_id: str) -> None:
        body = self._read_json_body()
        decision = body.get("decision")
        note = str(body.get("note", ""))
        try:
            ticket = self.gateway.decide_ticket(ticket_id, str(decision), note)
        except UnknownTicketError:
            self._send(404, {"error": "unknown-ticket", "ticket_id": ticket_id})
        except AlreadyDecidedError as exc:
            self._send(409, {"error": "already-decided", "detail": str(exc),
                             "ticket": self.gateway.tickets.get(ticket_id).to_dict()})
        except InvalidDecisionError as exc:
            self._send(422, {"error": "invalid-decision", "detail": str(exc)})
        else:
            self._send(200, ticket.to_dict())

    def _handle_ingest(self) -> None:
        raw = self._read_body()
        try:
            record = self.gateway.ingest_payload(raw, fmt="json")
        except TranslationError as exc:
            self._send(422, {"error": "validation-failed", "detail": exc.to_dict()})
        else:
            self._send(202, {"accepted": True, "record": record.to_wire_dict()})

    def _sensor_summary(self, spec) -> dict[str, Any]:
        quantity = self.gateway.ontology.quantities.get(spec.quantity)
        return {
            "id": spec.id.render(),
            "kind": spec.kind,
            "quantity": spec.quantity,
            "unit": quantity.unit if quantity else "",
            "meaning": quantity.meaning if quantity else "",
            "lat": spec.location.latitude,
            "lon": spec.location.longitude,
            "period_ms": spec.period_ms,
            "noise_sd": spec.noise_sd,
        }

    # -- plumbing -------------------------------------------------------------

    def _int_param(self, query: dict, name: str) -> int | None:
        values = query.get(name)
        if not values:
            return None
        try:
            return int(values[0])
        except ValueError as exc:
            raise ValueError(f"query parameter {name!r} must be an integer") from exc

    def _read_body(self) -> bytes:
        length = int(self.headers.get("Content-Length", 0) or 0)
        if length > MAX_BODY_BYTES:
            raise ValueError(f"request body exceeds {MAX_BODY_BYTES} bytes")
        return self.rfile.read(length) if length else b""

    def _read_json_body(self) -> dict[str, Any]:
        raw = self._read_body()
        if not raw:
            return {}
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValueError(f"request body is not valid JSON: {exc}") from exc
        if not isinstance(body, dict):
            raise ValueError("request body must be a JSON object")
        return body

    def _send(self, status: int, payload: Any) -> None:
        data = json.dumps(payload, ensure_ascii=True).encode("utf-8")
        self.send_response(status)
        self._cors_headers()
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _cors_headers(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def log_message(self, fmt: str, *args) -> None:
        logger.debug("%s %s", self.address_string(), fmt % args)
