"""Topic-addressed pub/sub transport for canonical records.

Topics follow ``farm/<application>/<job>/<number>``; subscription patterns
may wildcard the number (and, for gateway-internal fan-in, the application
and job segments too).  Delivery is at-most-once with per-publisher FIFO
order per subscriber; each subscriber owns a bounded queue that drops the
oldest record on overflow, favoring freshness.

The wire format is a 4-byte big-endian payload length followed by the
UTF-8 canonical wire form.  An optional loopback TCP listener speaks the
same frames: a client sends one newline-terminated topic pattern, then
receives every matching record as a frame.
"""

from __future__ import annotations

import logging
import socket
import struct
import threading
from collections import deque
from dataclasses import dataclass

from farmgate.model import CanonicalRecord, FarmgateError, SensorId

logger = logging.getLogger(__name__)

WILDCARD = "*"
TOPIC_ROOT = "farm"

_LENGTH = struct.Struct(">I")

#: Hard ceiling on frame payload size.
MAX_FRAME_PAYLOAD = 1024 * 1024

DEFAULT_QUEUE_CAPACITY = 1024


class MalformedPatternError(FarmgateError, ValueError):
    """Topic text does not follow farm/<app>/<job>/<number|*>."""


class TruncatedFrameError(FarmgateError, ValueError):
    """Frame bytes end before the declared payload length."""


class OversizeFrameError(FarmgateError, ValueError):
    """Declared payload length exceeds MAX_FRAME_PAYLOAD."""


@dataclass(frozen=True)
class Topic:
    """A concrete topic or a subscription pattern.

    ``number is None`` stands for the ``*`` wildcard; ``application`` and
    ``job`` may also be ``*`` so in-process consumers can fan in the whole
    stream.
    """

    application: str
    job: str
    number: int | None

    def __post_init__(self) -> None:
        for name, code in (("application", self.application), ("job", self.job)):
            if code != WILDCARD and not (code.isalpha() and code.isupper()):
                raise MalformedPatternError(
                    f"{name} segment must be an uppercase code or '*', got {code!r}"
                )
        if self.number is not None and not 1 <= self.number <= 9999:
            raise MalformedPatternError(f"number segment must be in 1..9999, got {self.number}")

    @classmethod
    def parse(cls, text: str) -> "Topic":
        parts = text.split("/")
        if len(parts) != 4 or parts[0] != TOPIC_ROOT:
            raise MalformedPatternError(
                f"topic must be {TOPIC_ROOT}/<application>/<job>/<number|*>, got {text!r}"
            )
        _, application, job, number_text = parts
        if number_text == WILDCARD:
            number = None
        elif number_text.isdigit() and not number_text.startswith("0"):
            number = int(number_text)
        else:
            raise MalformedPatternError(f"number segment must be digits or '*', got {number_text!r}")
        return cls(application=application, job=job, number=number)

    @classmethod
    def for_record(cls, record: CanonicalRecord) -> "Topic":
        return cls.for_sensor(record.sensor_id)

    @classmethod
    def for_sensor(cls, sensor_id: SensorId) -> "Topic":
        return cls(application=sensor_id.application, job=sensor_id.job, number=sensor_id.number)

    def render(self) -> str:
        number = WILDCARD if self.number is None else str(self.number)
        return f"{TOPIC_ROOT}/{self.application}/{self.job}/{number}"

    def matches(self, concrete: "Topic") -> bool:
        return (
            self.application in (WILDCARD, concrete.application)
            and self.job in (WILDCARD, concrete.job)
            and (self.number is None or self.number == concrete.number)
        )

    def __str__(self) -> str:
        return self.render()


# ---------------------------------------------------------------------------
# Frame codec
# ---------------------------------------------------------------------------


def frame_encode(record: CanonicalRecord) -> bytes:
    payload = record.to_wire().encode("utf-8")
    if len(payload) > MAX_FRAME_PAYLOAD:
        raise OversizeFrameError(f"payload is {len(payload)} bytes, limit {MAX_FRAME_PAYLOAD}")
    return _LENGTH.pack(len(payload)) + payload


def frame_decode(data: bytes) -> CanonicalRecord:
    """Decode exactly one frame; rejects truncated and oversize frames."""
    if len(data) < _LENGTH.size:
        raise TruncatedFrameError(f"frame header needs {_LENGTH.size} bytes, got {len(data)}")
    (length,) = _LENGTH.unpack_from(data)
    if length > MAX_FRAME_PAYLOAD:
        raise OversizeFrameError(f"declared payload {length} bytes, limit {MAX_FRAME_PAYLOAD}")
    expected = _LENGTH.size + length
    if len(data) < expected:
        raise TruncatedFrameError(f"frame needs {expected} bytes, got {len(data)}")
    if len(data) > expected:
        raise TruncatedFrameError(f"frame has {len(data) - expected} trailing bytes")
    return CanonicalRecord.from_wire(data[_LENGTH.size:].decode("utf-8"))


def read_frame(sock: socket.socket) -> CanonicalRecord | None:
    """Read one frame from a stream socket; None on clean EOF at a boundary."""
    header = _read_exact(sock, _LENGTH.size, allow_eof=True)
    if header is None:
        return None
    (length,) = _LENGTH.unpack(header)
    if length > MAX_FRAME_PAYLOAD:
        raise OversizeFrameError(f"declared payload {length} bytes, limit {MAX_FRAME_PAYLOAD}")
    payload = _read_exact(sock, length, allow_eof=False)
    return CanonicalRecord.from_wire(payload.decode("utf-8"))


def _read_exact(sock: socket.socket, count: int, allow_eof: bool) -> bytes | None:
    chunks = bytearray()
    while len(chunks) < count:
        chunk = sock.recv(count - len(chunks))
        if not chunk:
            if allow_eof and not chunks:
                return None
            raise TruncatedFrameError(f"stream ended after {len(chunks)} of {count} bytes")
        chunks.extend(chunk)
    return bytes(chunks)


# ---------------------------------------------------------------------------
# Broker
# ---------------------------------------------------------------------------


class Subscription:
    """A handle yielding matching records from subscription time onward."""

    def __init__(self, pattern: Topic, capacity: int) -> None:
        self.pattern = pattern
        self._queue: deque[CanonicalRecord] = deque()
        self._capacity = capacity
        self._cond = threading.Condition()
        self._closed = False
        self.dropped = 0
        self.delivered = 0

    def _offer(self, record: CanonicalRecord) -> bool:
        with self._cond:
            if self._closed:
                return False
            if len(self._queue) >= self._capacity:
                self._queue.popleft()
                self.dropped += 1
            self._queue.append(record)
            self.delivered += 1
            self._cond.notify()
            return True

    def get(self, timeout: float | None = None) -> CanonicalRecord | None:
        """Next record, blocking up to ``timeout``; None on timeout or close."""
        with self._cond:
            if not self._queue:
                self._cond.wait(timeout)
            if not self._queue:
                return None
            return self._queue.popleft()

    def get_nowait(self) -> CanonicalRecord | None:
        return self.get(timeout=0)

    def qsize(self) -> int:
        with self._cond:
            return len(self._queue)

    @property
    def closed(self) -> bool:
        return self._closed

    def close(self) -> None:
        with self._cond:
            self._closed = True
            self._cond.notify_all()


class Broker:
    """In-process pub/sub hub, safe for concurrent publishers and subscribers."""

    def __init__(self, queue_capacity: int = DEFAULT_QUEUE_CAPACITY) -> None:
        if queue_capacity < 1:
            raise ValueError("queue capacity must be >= 1")
        self._capacity = queue_capacity
        self._lock = threading.Lock()
        self._subscriptions: list[Subscription] = []
        self._listener: _LoopbackListener | None = None
        self.published = 0

    def subscribe(self, pattern: Topic | str) -> Subscription:
        topic = Topic.parse(pattern) if isinstance(pattern, str) else pattern
        sub = Subscription(topic, self._capacity)
        with self._lock:
            self._subscriptions.append(sub)
        return sub

    def unsubscribe(self, sub: Subscription) -> None:
        sub.close()
        with self._lock:
            if sub in self._subscriptions:
                self._subscriptions.remove(sub)

    def publish(self, record: CanonicalRecord) -> int:
        """Deliver to every matching subscriber; returns the delivered count."""
        concrete = Topic.for_record(record)
        with self._lock:
            targets = [s for s in self._subscriptions if not s.closed and s.pattern.matches(concrete)]
            self.published += 1
        delivered = 0
        for sub in targets:
            if sub._offer(record):
                delivered += 1
        return delivered

    def subscriber_count(self) -> int:
        with self._lock:
            return len(self._subscriptions)

    # -- optional TCP loopback listener ------------------------------------

    def start_listener(self, host: str = "127.0.0.1", port: int = 0) -> tuple[str, int]:
        """Start the loopback frame listener; returns the bound (host, port)."""
        if self._listener is not None:
            raise RuntimeError("listener already running")
        self._listener = _LoopbackListener(self, host, port)
        return self._listener.address

    def stop(self) -> None:
        if self._listener is not None:
            self._listener.stop()
            self._listener = None
        with self._lock:
            subs = list(self._subscriptions)
            self._subscriptions.clear()
        for sub in subs:
            sub.close()


class _LoopbackListener:
    """Serves broker subscriptions over loopback TCP using the frame format."""

    def __init__(self, broker: Broker, host: str, port: int) -> None:
        self._broker = broker
        self._server = socket.create_server((host, port))
        self._server.settimeout(0.2)
        self.address = self._server.getsockname()[:2]
        self._stopping = threading.Event()
        self._conns: set[socket.socket] = set()
        self._conn_lock = threading.Lock()
        self._thread = threading.Thread(target=self._accept_loop, name="farmgate-broker-tcp", daemon=True)
        self._thread.start()

    def _accept_loop(self) -> None:
        while not self._stopping.is_set():
            try:
                conn, _addr = self._server.accept()
            except socket.timeout:
                continue
            except OSError:
                break
            with self._conn_lock:
                self._conns.add(conn)
            threading.Thread(target=self._serve_client, args=(conn,), daemon=True).start()
        self._server.close()

    def _serve_client(self, conn: socket.socket) -> None:
        sub = None
        try:
            pattern_line = self._read_line(conn)
            sub = self._broker.subscribe(Topic.parse(pattern_line.strip()))
            while not self._stopping.is_set():
                record = sub.get(timeout=0.2)
                if record is None:
                    continue
                conn.sendall(frame_encode(record))
        except (MalformedPatternError, TruncatedFrameError, OSError) as exc:
            logger.debug("loopback client dropped: %s", exc)
        finally:
            if sub is not None:
                self._broker.unsubscribe(sub)
            with self._conn_lock:
                self._conns.discard(conn)
            conn.close()

    @staticmethod
    def _read_line(conn: socket.socket, limit: int = 256) -> str:
        buf = bytearray()
        while len(buf) < limit:
            ch = conn.recv(1)
            if not ch:
                raise TruncatedFrameError("client closed before sending a pattern line")
            if ch == b"\n":
                return buf.decode("utf-8")
            buf.extend(ch)
        raise MalformedPatternError("pattern line too long")

    def stop(self) -> None:
        self._stopping.set()
        with self._conn_lock:
            conns = list(self._conns)
        for conn in conns:
            try:
                conn.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            conn.close()
        self._thread.join(timeout=2.0)
