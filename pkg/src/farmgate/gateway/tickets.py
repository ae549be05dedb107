"""Action tickets: the gateway's unit of human decision.

At most one pending ticket exists per action; fresh recommendations for an
action refresh that ticket's payload instead of duplicating it.  Pending
tickets expire after the configured TTL.  Every mutation appends a full
ticket snapshot to an append-only JSON-lines log; replaying the log (last
snapshot per ticket wins) reconstructs the store exactly.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Iterable

from farmgate.model import ActionId, FarmgateError, Recommendation

STATUS_PENDING = "pending"
STATUS_APPROVED = "approved"
STATUS_OVERRIDDEN = "overridden"
STATUS_EXPIRED = "expired"

STATUSES = (STATUS_PENDING, STATUS_APPROVED, STATUS_OVERRIDDEN, STATUS_EXPIRED)

DECISION_APPROVE = "approve"
DECISION_OVERRIDE = "override"


class UnknownTicketError(FarmgateError, KeyError):
    """No ticket with that id."""


class AlreadyDecidedError(FarmgateError):
    """The ticket has left the pending state; decisions are final."""


class InvalidDecisionError(FarmgateError, ValueError):
    """The decision verb is not approve/override."""


def now_ms() -> int:
    return int(time.time() * 1000)


@dataclass(frozen=True)
class ActionTicket:
    """One pending-or-decided recommendation awaiting operator action."""

    ticket_id: str
    recommendation: Recommendation
    status: str = STATUS_PENDING
    created_at: int = 0
    decided_at: int | None = None
    operator_note: str = ""
    evidence: tuple[Recommendation, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown ticket status {self.status!r}")
        if (self.decided_at is None) != (self.status == STATUS_PENDING):
            raise ValueError("decided_at must be present exactly when the ticket is decided")
        object.__setattr__(self, "evidence", tuple(self.evidence))

    def to_dict(self) -> dict[str, Any]:
        return {
            "ticket_id": self.ticket_id,
            "status": self.status,
            "created_at": self.created_at,
            "decided_at": self.decided_at,
            "operator_note": self.operator_note,
            "recommendation": self.recommendation.to_dict(),
            "evidence": [rec.to_dict() for rec in self.evidence],
        }

    @classmethod
    def from_dict(cls, obj: dict[str, Any]) -> "ActionTicket":
        return cls(
            ticket_id=str(obj["ticket_id"]),
            recommendation=Recommendation.from_dict(obj["recommendation"]),
            status=str(obj["status"]),
            created_at=int(obj["created_at"]),
            decided_at=None if obj.get("decided_at") is None else int(obj["decided_at"]),
            operator_note=str(obj.get("operator_note", "")),
            evidence=tuple(Recommendation.from_dict(e) for e in obj.get("evidence", [])),
        )


class TicketStore:
    """Thread-safe ticket registry with TTL expiry and append-only persistence."""

    def __init__(
        self,
        ttl_ms: int,
        log_path: str | Path | None = None,
        clock: Callable[[], int] = now_ms,
    ) -> None:
        if ttl_ms <= 0:
            raise ValueError("ttl_ms must be > 0")
        self.ttl_ms = ttl_ms
        self.clock = clock
        self._log_path = Path(log_path) if log_path else None
        self._lock = threading.Lock()
        self._tickets: dict[str, ActionTicket] = {}
        self._counter = 0
        if self._log_path is not None and self._log_path.exists():
            self._recover()

    # -- lifecycle ----------------------------------------------------------

    def open_or_refresh(
        self,
        recommendation: Recommendation,
        evidence: Iterable[Recommendation] = (),
        now: int | None = None,
    ) -> tuple[ActionTicket, bool]:
        """Open a ticket for the action, or refresh the pending one.

        Returns ``(ticket, created)``; identical refreshes are no-ops so the
        log records state changes only.
        """
        now = self.clock() if now is None else now
        evidence = tuple(evidence)
        with self._lock:
            self._sweep_locked(now)
            existing = self._pending_for_action_locked(recommendation.action_id)
            if existing is not None:
                if existing.recommendation == recommendation and existing.evidence == evidence:
                    return existing, False
                updated = replace(existing, recommendation=recommendation, evidence=evidence)
                self._commit_locked(updated)
                return updated, False
            self._counter += 1
            ticket = ActionTicket(
                ticket_id=f"T{self._counter:06d}",
                recommendation=recommendation,
                status=STATUS_PENDING,
                created_at=now,
                evidence=evidence,
            )
            self._commit_locked(ticket)
            return ticket, True

    def decide(
        self, ticket_id: str, decision: str, note: str = "", now: int | None = None
    ) -> ActionTicket:
        """Apply approve/override; idempotence is the caller's 409 contract."""
        if decision not in (DECISION_APPROVE, DECISION_OVERRIDE):
            raise InvalidDecisionError(f"decision must be approve or override, got {decision!r}")
        now = self.clock() if now is None else now
        with self._lock:
            self._sweep_locked(now)
            ticket = self._tickets.get(ticket_id)
            if ticket is None:
                raise UnknownTicketError(ticket_id)
            if ticket.status != STATUS_PENDING:
                raise AlreadyDecidedError(f"ticket {ticket_id} is already {ticket.status}")
            status = STATUS_APPROVED if decision == DECISION_APPROVE else STATUS_OVERRIDDEN
            decided = replace(ticket, status=status, decided_at=now, operator_note=note)
            self._commit_locked(decided)
            return decided

    def sweep(self, now: int | None = None) -> list[ActionTicket]:
        """Expire pending tickets older than the TTL; returns those expired now."""
        now = self.clock() if now is None else now
        with self._lock:
            return self._sweep_locked(now)

    # -- queries ------------------------------------------------------------

    def get(self, ticket_id: str) -> ActionTicket:
        with self._lock:
            ticket = self._tickets.get(ticket_id)
        if ticket is None:
            raise UnknownTicketError(ticket_id)
        return ticket

    def list(self, status: str | None = None) -> list[ActionTicket]:
        with self._lock:
            self._sweep_locked(self.clock())
            tickets = sorted(self._tickets.values(), key=lambda t: t.ticket_id)
        if status is not None:
            tickets = [t for t in tickets if t.status == status]
        return tickets

    def __len__(self) -> int:
        with self._lock:
            return len(self._tickets)

    # -- internals ----------------------------------------------------------

    def _pending_for_action_locked(self, action: ActionId) -> ActionTicket | None:
        for ticket in self._tickets.values():
            if ticket.status == STATUS_PENDING and ticket.recommendation.action_id == action:
                return ticket
        return None

    def _sweep_locked(self, now: int) -> list[ActionTicket]:
        expired = []
        for ticket in list(self._tickets.values()):
            if ticket.status == STATUS_PENDING and now - ticket.created_at >= self.ttl_ms:
                stale = replace(
                    ticket, status=STATUS_EXPIRED, decided_at=now, operator_note="expired"
                )
                self._commit_locked(stale)
                expired.append(stale)
        return expired

    def _commit_locked(self, ticket: ActionTicket) -> None:
        self._tickets[ticket.ticket_id] = ticket
        if self._log_path is not None:
            line = json.dumps(ticket.to_dict(), ensure_ascii=True, separators=(",", ":"))
            with open(self._log_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()

    def _recover(self) -> None:
        with open(self._log_path, encoding="utf-8") as fh:
            for line in fh.read().split("\n"):
                line = line.strip()
                if not line:
                    continue
                try:
                    ticket = ActionTicket.from_dict(json.loads(line))
                except (ValueError, KeyError):
                    continue  # torn final line from a crash mid-write
                self._tickets[ticket.ticket_id] = ticket
        for ticket_id in self._tickets:
            if ticket_id.startswith("T") and ticket_id[1:].isdigit():
                self._counter = max(self._counter, int(ticket_id[1:]))
