"""Trace records and their JSON Lines encoding.

Each line is one JSON object with keys in this fixed order::

    {"time": 1.000000, "seq": 7, "kind": "emit", "emitter": "thermostat",
     "recipient": "agent", "payload": 4.9}

``time`` is always written with exactly six decimals. Floats inside payloads
are written in their shortest round-trip form, which is exact and identical
on every IEEE-754 platform, so two equal traces are also byte-equal.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from typing import IO, Any, Iterable, Iterator

from .errors import TraceFormatError
from .model import TIMER_TICK

KINDS = (
    "inject",
    "deliver",
    "update",
    "receive",
    "emit-decision",
    "emit",
    "timer-fire",
    "timer-skip",
    "barrier-wait",
)
_KIND_SET = frozenset(KINDS)
_KEYS = ("time", "seq", "kind", "emitter", "recipient", "payload")


def _fixed6(t: float) -> str:
    return f"{t:.6f}"


@dataclass(frozen=True)
class TraceEvent:
    """One engine action. ``payload`` is already in rendered (JSON) form."""

    time: float
    seq: int
    kind: str
    emitter: str | None = None
    recipient: str | None = None
    payload: Any = None

    def __post_init__(self) -> None:
        if isinstance(self.time, bool) or not isinstance(self.time, (int, float)):
            raise TypeError(f"time must be a number, got {self.time!r}")
        if not math.isfinite(self.time) or self.time < 0:
            raise ValueError(f"time must be finite and non-negative, got {self.time!r}")
        if isinstance(self.seq, bool) or not isinstance(self.seq, int) or self.seq < 0:
            raise ValueError(f"seq must be a non-negative integer, got {self.seq!r}")
        if self.kind not in _KIND_SET:
            raise ValueError(f"unknown trace kind {self.kind!r}")
        # pin time to its six-decimal rendering so parse(render(e)) == e
        object.__setattr__(self, "time", float(_fixed6(self.time)) + 0.0)


def render_payload(value: Any) -> Any:
    """Turn a runtime payload into plain JSON data.

    Records (dataclasses) become objects with a leading ``"type"`` key naming
    the record class, followed by the fields in declaration order.
    """
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite float {value!r} cannot be traced")
        return value
    if value is TIMER_TICK:
        return {"type": "TimerTick"}
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        out: dict[str, Any] = {"type": type(value).__name__}
        for f in dataclasses.fields(value):
            out[f.name] = render_payload(getattr(value, f.name))
        return out
    if isinstance(value, (list, tuple)):
        return [render_payload(v) for v in value]
    if isinstance(value, dict):
        return {str(k): render_payload(v) for k, v in value.items()}
    # numpy scalars and arrays, without importing numpy
    if hasattr(value, "tolist"):
        return render_payload(value.tolist())
    raise TypeError(f"cannot render payload of type {type(value).__name__}")


def _dump(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False, allow_nan=False, separators=(", ", ": "))


def render_event(event: TraceEvent) -> str:
    """Render one event as a single line (no trailing newline)."""
    return (
        "{"
        f'"time": {_fixed6(event.time)}, '
        f'"seq": {event.seq}, '
        f'"kind": {_dump(event.kind)}, '
        f'"emitter": {_dump(event.emitter)}, '
        f'"recipient": {_dump(event.recipient)}, '
        f'"payload": {_dump(event.payload)}'
        "}"
    )


def render_trace(events: Iterable[TraceEvent]) -> str:
    return "".join(render_event(e) + "\n" for e in events)


def write_trace(events: Iterable[TraceEvent], stream: IO[str]) -> None:
    for e in events:
        stream.write(render_event(e))
        stream.write("\n")


def _reject_constant(name: str) -> None:
    raise ValueError(f"non-finite number {name}")


def _unique_keys(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    out = dict(pairs)
    if len(out) != len(pairs):
        raise ValueError("duplicate key")
    return out


def parse_event(line: str, lineno: int = 1) -> TraceEvent:
    try:
        raw = json.loads(line, object_pairs_hook=_unique_keys, parse_constant=_reject_constant)
    except ValueError as exc:
        raise TraceFormatError(lineno, f"malformed JSON: {exc}") from None
    if not isinstance(raw, dict) or tuple(raw) != _KEYS:
        raise TraceFormatError(lineno, f"expected an object with keys {list(_KEYS)} in order")
    time, seq = raw["time"], raw["seq"]
    if isinstance(time, bool) or not isinstance(time, (int, float)):
        raise TraceFormatError(lineno, "time must be a number")
    if isinstance(seq, bool) or not isinstance(seq, int):
        raise TraceFormatError(lineno, "seq must be an integer")
    if not isinstance(raw["kind"], str):
        raise TraceFormatError(lineno, "kind must be a string")
    for key in ("emitter", "recipient"):
        if raw[key] is not None and not isinstance(raw[key], str):
            raise TraceFormatError(lineno, f"{key} must be a string or null")
    try:
        return TraceEvent(float(time), seq, raw["kind"], raw["emitter"], raw["recipient"], raw["payload"])
    except (TypeError, ValueError) as exc:
        raise TraceFormatError(lineno, str(exc)) from None


def iter_trace(stream: IO[str]) -> Iterator[TraceEvent]:
    for lineno, line in enumerate(stream, start=1):
        if not line.endswith("\n"):
            raise TraceFormatError(lineno, "truncated line (missing newline)")
        body = line[:-1]
        if not body:
            raise TraceFormatError(lineno, "empty line")
        yield parse_event(body, lineno)


def read_trace(stream: IO[str]) -> list[TraceEvent]:
    return list(iter_trace(stream))


def check_ordering(events: Iterable[TraceEvent]) -> list[str]:
    """Return a list of ordering problems; empty means the trace is well ordered.

    Checks that ``(time, seq)`` strictly increases and that, at each
    timestamp, deliveries happen in the order the emissions were queued.
    """
    problems: list[str] = []
    prev: TraceEvent | None = None
    pending: list[tuple[Any, ...]] = []
    pending_time: float | None = None
    for index, e in enumerate(events, start=1):
        if prev is not None:
            if e.time < prev.time:
                problems.append(f"record {index}: time {e.time:.6f} before {prev.time:.6f}")
            if e.seq <= prev.seq:
                problems.append(f"record {index}: seq {e.seq} not after {prev.seq}")
        prev = e
        if pending_time is not None and e.time != pending_time:
            if pending:
                problems.append(
                    f"record {index}: {len(pending)} emission(s) at t={pending_time:.6f} never delivered"
                )
            pending = []
        pending_time = e.time
        key = (e.emitter, e.recipient, _dump(e.payload))
        if e.kind == "emit":
            pending.append(key)
        elif e.kind == "deliver":
            if not pending:
                problems.append(f"record {index}: delivery without a queued emission")
            elif pending[0] != key:
                problems.append(f"record {index}: delivery out of FIFO order")
            else:
                pending.pop(0)
    if pending:
        problems.append(f"{len(pending)} emission(s) at t={pending_time:.6f} never delivered")
    return problems


def validate_trace(stream: IO[str]) -> list[str]:
    """Parse and order-check a trace file. Returns problems found."""
    try:
        events = read_trace(stream)
    except TraceFormatError as exc:
        return [str(exc)]
    return check_ordering(events)
