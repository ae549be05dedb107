"""Format-agnostic translation between payload formats and the canonical
intermediate form, with ontology-driven validation and error logging.

Supported formats:

* ``json``    — flat object; the canonical wire form itself is valid input.
* ``csv``     — header line plus one data row (RFC-4180 quoting).
* ``xmllite`` — a single ``<record>`` element with flat children, no
  attributes, no namespaces.
* ``kv``      — newline-separated ``key=value`` pairs; values escape
  backslash and newline.

Decoding maps source field names through the ontology's per-format alias
tables, normalizes quantity and unit spellings, and validates the result.
A payload that cannot be mapped or validated is never forwarded: the error
is appended to the error log and raised as :class:`TranslationError`.
"""

from __future__ import annotations

import csv
import io
import json
import threading
from pathlib import Path
from typing import Any, Callable

from farmgate.model import CanonicalRecord, FarmgateError, GeoLocation, SensorId, WIRE_FIELDS
from farmgate.ontology import Ontology

FORMATS = ("json", "csv", "xmllite", "kv")

#: Separator for the keywords list in single-cell formats (csv, kv, xmllite).
KEYWORD_SEP = "|"

STAGE_MAP = "map"
STAGE_VALIDATE = "validate"


class TranslationError(FarmgateError):
    """A payload failed mapping or validation and was not forwarded."""

    def __init__(self, stage: str, field: str, reason: str, source_format: str = "") -> None:
        if not reason:
            raise ValueError("TranslationError reason must be non-empty")
        self.stage = stage
        self.field = field
        self.reason = reason
        self.source_format = source_format
        super().__init__(f"{stage} error on field {field!r}: {reason}")

    def to_dict(self) -> dict[str, str]:
        return {
            "stage": self.stage,
            "field": self.field,
            "reason": self.reason,
            "source_format": self.source_format,
        }

    def to_line(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=True, separators=(",", ":"))

    @classmethod
    def from_line(cls, line: str) -> "TranslationError":
        obj = json.loads(line)
        return cls(obj["stage"], obj["field"], obj["reason"], obj.get("source_format", ""))


class ErrorLog:
    """Append-only error log: one serialized TranslationError per line."""

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, error: TranslationError) -> None:
        line = error.to_line()
        with self._lock, open(self.path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()

    def entries(self) -> list[TranslationError]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(TranslationError.from_line(line))
        return out

    def __len__(self) -> int:
        return len(self.entries())


# ---------------------------------------------------------------------------
# Field-map extraction per format
# ---------------------------------------------------------------------------


def _fields_from_json(text: str) -> dict[str, Any]:
    obj = json.loads(text)
    if not isinstance(obj, dict):
        raise ValueError("json payload must be an object")
    return obj


def _fields_from_csv(text: str) -> dict[str, str]:
    rows = list(csv.reader(io.StringIO(text, newline="")))
    rows = [r for r in rows if r]
    if len(rows) != 2:
        raise ValueError(f"csv payload must be a header line plus one data row, got {len(rows)} rows")
    header, data = rows
    if len(header) != len(data):
        raise ValueError(f"csv header has {len(header)} columns but row has {len(data)}")
    if len(set(header)) != len(header):
        raise ValueError("csv header has duplicate column names")
    return dict(zip(header, data))


_XML_ESCAPES = (("&", "&amp;"), ("<", "&lt;"), (">", "&gt;"))


def _xml_escape(text: str) -> str:
    for raw, esc in _XML_ESCAPES:
        text = text.replace(raw, esc)
    return text


def _xml_unescape(text: str) -> str:
    for raw, esc in reversed(_XML_ESCAPES):
        text = text.replace(esc, raw)
    return text


def _fields_from_xmllite(text: str) -> dict[str, str]:
    body = text.strip()
    if not body.startswith("<record>") or not body.endswith("</record>"):
        raise ValueError("xmllite payload must be a single <record> element")
    inner = body[len("<record>") : -len("</record>")]
    fields: dict[str, str] = {}
    pos = 0
    while pos < len(inner):
        if inner[pos].isspace():
            pos += 1
            continue
        if inner[pos] != "<":
            raise ValueError("xmllite: stray text between elements")
        close = inner.find(">", pos)
        if close < 0:
            raise ValueError("xmllite: unterminated tag")
        name = inner[pos + 1 : close]
        if not name or not name.replace("_", "").isalnum():
            raise ValueError(f"xmllite: bad element name {name!r} (attributes are not supported)")
        if name in fields:
            raise ValueError(f"xmllite: duplicate element {name!r}")
        end_tag = f"</{name}>"
        end = inner.find(end_tag, close + 1)
        if end < 0:
            raise ValueError(f"xmllite: element {name!r} is not closed")
        content = inner[close + 1 : end]
        if "<" in content:
            raise ValueError(f"xmllite: element {name!r} must not contain child elements")
        fields[name] = _xml_unescape(content)
        pos = end + len(end_tag)
    return fields


def _kv_escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\n", "\\n")


def _kv_unescape(value: str) -> str:
    out = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            if nxt == "n":
                out.append("\n")
                i += 2
                continue
            if nxt == "\\":
                out.append("\\")
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def _fields_from_kv(text: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        if "=" not in line:
            raise ValueError(f"kv line {lineno} has no '=' separator")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key in fields:
            raise ValueError(f"kv line {lineno}: duplicate key {key!r}")
        fields[key] = _kv_unescape(raw)
    return fields


_EXTRACTORS: dict[str, Callable[[str], dict[str, Any]]] = {
    "json": _fields_from_json,
    "csv": _fields_from_csv,
    "xmllite": _fields_from_xmllite,
    "kv": _fields_from_kv,
}


# ---------------------------------------------------------------------------
# decode / encode / validate
# ---------------------------------------------------------------------------


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")


def decode(
    payload: bytes | str,
    fmt: str,
    ontology: Ontology,
    error_log: ErrorLog | None = None,
) -> CanonicalRecord:
    """Translate a payload in any supported format into a validated record.

    Raises :class:`TranslationError` (after appending it to ``error_log``
    when one is given); the record is then never forwarded.
    """
    _check_format(fmt)
    try:
        return _decode_inner(payload, fmt, ontology)
    except TranslationError as err:
        if error_log is not None:
            error_log.append(err)
        raise


def _decode_inner(payload: bytes | str, fmt: str, ontology: Ontology) -> CanonicalRecord:
    if isinstance(payload, (bytes, bytearray)):
        try:
            text = payload.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise TranslationError(STAGE_MAP, "payload", f"payload is not UTF-8: {exc}", fmt) from exc
    else:
        text = payload
    try:
        raw_fields = _EXTRACTORS[fmt](text)
    except (ValueError, json.JSONDecodeError) as exc:
        raise TranslationError(STAGE_MAP, "payload", str(exc), fmt) from exc

    # Map every source field name onto the canonical schema.
    mapped: dict[str, Any] = {}
    for name, value in raw_fields.items():
        canonical = ontology.canonical_field(fmt, name)
        if canonical is None:
            raise TranslationError(STAGE_MAP, name, f"unmappable field {name!r}", fmt)
        if canonical in mapped:
            raise TranslationError(STAGE_MAP, name, f"duplicate mapping onto {canonical!r}", fmt)
        mapped[canonical] = value
    missing = [f for f in WIRE_FIELDS if f not in mapped]
    if missing:
        raise TranslationError(STAGE_MAP, missing[0], f"missing canonical field {missing[0]!r}", fmt)

    # Normalize quantity and unit spellings through the ontology.
    quantity_def = ontology.resolve_quantity(str(mapped["quantity"]))
    if quantity_def is not None:
        mapped["quantity"] = quantity_def.name
        unit = ontology.normalize_unit(quantity_def, str(mapped["unit"]))
        if unit is not None:
            mapped["unit"] = unit

    try:
        record = _record_from_fields(mapped, fmt)
    except (ValueError, TypeError) as exc:
        raise TranslationError(STAGE_VALIDATE, "record", str(exc), fmt) from exc

    problem = validate(record, ontology)
    if problem is not None:
        raise TranslationError(problem.stage, problem.field, problem.reason, fmt)
    return record


def _record_from_fields(fields: dict[str, Any], fmt: str) -> CanonicalRecord:
    if fmt == "json":
        keywords = fields["keywords"]
        if isinstance(keywords, str):
            keywords = [k for k in keywords.split(KEYWORD_SEP) if k]
        obj = dict(fields)
        obj["keywords"] = keywords
        return CanonicalRecord.from_wire_dict(obj)
    # Text formats carry every value as a string.
    keywords = tuple(k for k in str(fields["keywords"]).split(KEYWORD_SEP) if k)
    return CanonicalRecord(
        sensor_id=SensorId.parse(str(fields["sensor_id"])),
        quantity=str(fields["quantity"]),
        value=_parse_float(fields["value"], "value"),
        unit=str(fields["unit"]),
        timestamp=_parse_int(fields["timestamp"], "timestamp"),
        location=GeoLocation(
            latitude=_parse_float(fields["lat"], "lat"),
            longitude=_parse_float(fields["lon"], "lon"),
        ),
        description=str(fields["description"]),
        keywords=keywords,
        confidence=_parse_float(fields["confidence"], "confidence"),
    )


def _parse_float(value: Any, name: str) -> float:
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} is not a number: {value!r}") from exc


def _parse_int(value: Any, name: str) -> int:
    try:
        return int(str(value), 10)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} is not an integer: {value!r}") from exc


def validate(record: CanonicalRecord, ontology: Ontology) -> TranslationError | None:
    """Check quantity/unit/range consistency; returns the first failure, or None.

    Returns rather than raises so callers can gate without exception
    plumbing; :func:`decode` converts the result into a raised error.
    """
    quantity_def = ontology.quantities.get(record.quantity)
    if quantity_def is None:
        return TranslationError(
            STAGE_VALIDATE, "quantity", f"unknown quantity {record.quantity!r}"
        )
    if record.unit != quantity_def.unit:
        return TranslationError(
            STAGE_VALIDATE,
            "unit",
            f"unit {record.unit!r} does not match {quantity_def.unit!r} for {record.quantity}",
        )
    if not quantity_def.in_range(record.value):
        lo, hi = quantity_def.valid_range
        return TranslationError(
            STAGE_VALIDATE,
            "value",
            f"value {record.value} outside valid range [{lo}, {hi}] for {record.quantity}",
        )
    return None


def encode(record: CanonicalRecord, fmt: str) -> bytes:
    """Deterministically serialize a record; ``decode(encode(r, f), f) == r``."""
    _check_format(fmt)
    if fmt == "json":
        return record.to_wire().encode("utf-8")
    values = _string_fields(record)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(WIRE_FIELDS)
        writer.writerow([values[f] for f in WIRE_FIELDS])
        return buf.getvalue().encode("utf-8")
    if fmt == "xmllite":
        parts = [f"<{name}>{_xml_escape(values[name])}</{name}>" for name in WIRE_FIELDS]
        return f"<record>{''.join(parts)}</record>".encode("utf-8")
    lines = [f"{name}={_kv_escape(values[name])}" for name in WIRE_FIELDS]
    return "\n".join(lines).encode("utf-8")


def _string_fields(record: CanonicalRecord) -> dict[str, str]:
    return {
        "sensor_id": record.sensor_id.render(),
        "quantity": record.quantity,
        "value": repr(record.value),
        "unit": record.unit,
        "timestamp": str(record.timestamp),
        "lat": repr(record.location.latitude),
        "lon": repr(record.location.longitude),
        "description": record.description,
        "keywords": KEYWORD_SEP.join(record.keywords),
        "confidence": repr(record.confidence),
    }
