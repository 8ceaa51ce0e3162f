"""Deterministic virtual-time event loop.

Every activation of an entity, whether by a delivered stimulus or by its own
timer, runs the same pipeline:

1. ``update(state, elapsed, rng)``: advance the internal state to *now*;
2. ``receive(state, emitter, payload)``: fold in the stimulus (deliveries only);
3. for each subscriber, in subscription order, ask ``emits`` and, if true,
   ``what_to_send``; a returned payload is queued for delivery at *now*.

Queued events pop in ``(time, seq)`` order, and ``seq`` is handed out at
enqueue time, so reactions to a stimulus run after everything already queued
for the same instant.
"""

from __future__ import annotations

import copy
import heapq
import itertools
from dataclasses import dataclass
from typing import Any, Callable, Union

from .errors import HookError, RoutingError, SchedulingError
from .model import TIMER_TICK, EntityId, Model, SeededRng, to_micros, to_seconds
from .trace import TraceEvent, render_payload

_IMMUTABLE = (int, float, str, bool, type(None), type(TIMER_TICK))
NOTE_KINDS = frozenset({"barrier-wait"})


class Behavior:
    """Hook set shared by every entity created with it.

    Subclass and override what you need. Hooks receive the entity's state and
    return the new state; mutating in place and returning the same object is
    fine. Hooks must not touch other entities and must draw randomness only
    from the ``rng`` they are handed.
    """

    def receive(self, state: Any, emitter: EntityId, payload: Any) -> Any:
        return state

    def update(self, state: Any, elapsed: float, rng: SeededRng) -> Any:
        return state

    def emits(self, state: Any, subscriber: EntityId, trigger: Any) -> bool:
        return True

    def what_to_send(self, state: Any, subscriber: EntityId, trigger: Any, rng: SeededRng) -> Any:
        # forward stimuli unchanged; nothing to say on a bare timer tick
        if trigger is TIMER_TICK:
            return None
        return trigger

    def on_timer(self, state: Any, rng: SeededRng) -> Any:
        """Runs once per timer fire, after ``update`` and before fan-out."""
        return state

    def timer_note(self, state: Any) -> tuple[str, Any] | None:
        """Optional extra ``(kind, payload)`` trace record after ``on_timer``."""
        return None


@dataclass(frozen=True)
class Stimulus:
    emitter: EntityId
    receiver: EntityId
    payload: Any
    timestamp: float


@dataclass(frozen=True)
class Delivery:
    stimulus: Stimulus


@dataclass(frozen=True)
class TimerFire:
    entity: EntityId


@dataclass(frozen=True)
class Injection:
    emitter: EntityId
    payload: Any


EventKind = Union[Delivery, TimerFire, Injection]


@dataclass(frozen=True)
class ScheduledEvent:
    time_us: int
    seq: int
    kind: EventKind

    def __lt__(self, other: ScheduledEvent) -> bool:
        return (self.time_us, self.seq) < (other.time_us, other.seq)

    @property
    def time(self) -> float:
        return to_seconds(self.time_us)


def _isolated(payload: Any) -> Any:
    if isinstance(payload, _IMMUTABLE):
        return payload
    return copy.deepcopy(payload)


class Engine:
    """Runs one :class:`Model`. Not thread-safe; one engine per thread.

    ``sink``, if given, is called with every trace record as it is produced.
    ``instant_limit`` caps the events processed at one virtual instant, which
    turns a zero-latency emission cycle into an error instead of a hang.
    """

    def __init__(
        self,
        model: Model,
        sink: Callable[[TraceEvent], None] | None = None,
        instant_limit: int = 1_000_000,
    ) -> None:
        if model._engine is not None:
            raise ValueError("model is already driven by another engine")
        self.model = model
        self.sink = sink
        self._queue: list[ScheduledEvent] = []
        self._seq = itertools.count()
        self._trace_seq = itertools.count()
        self._batch: list[TraceEvent] = []
        self.instant_limit = instant_limit
        self._instant_us = -1
        self._instant_events = 0
        model._engine = self
        for ent in model.entities:
            if ent.timer_period_us is not None:
                self._schedule_timer(ent.id, ent.last_update_us + ent.timer_period_us)

    @property
    def now(self) -> float:
        return self.model.now

    @property
    def rng(self) -> SeededRng:
        return self.model.rng

    def pending(self) -> list[ScheduledEvent]:
        """Queued events in pop order (a copy)."""
        return sorted(self._queue)

    def next_time(self) -> float | None:
        return self._queue[0].time if self._queue else None

    # -- scheduling -------------------------------------------------------

    def _push(self, time_us: int, kind: EventKind) -> None:
        heapq.heappush(self._queue, ScheduledEvent(time_us, next(self._seq), kind))

    def _schedule_timer(self, eid: EntityId, time_us: int) -> None:
        self._push(time_us, TimerFire(eid))

    def inject(self, emitter: EntityId, payload: Any, at: float | None = None) -> None:
        """Have ``emitter`` send ``payload`` to all its subscribers at time ``at``.

        Fan-out to subscribers happens when the injection comes due, against
        the subscriptions in force at that moment.
        """
        self.model.entity(emitter)
        at_us = self.model.time_us if at is None else to_micros(at)
        if at_us < self.model.time_us:
            raise SchedulingError(f"cannot inject at t={at} before current time {self.now:.6f}")
        self._push(at_us, Injection(emitter, _isolated(payload)))

    # -- tracing ----------------------------------------------------------

    def _record(
        self,
        kind: str,
        emitter: EntityId | None = None,
        recipient: EntityId | None = None,
        payload: Any = None,
    ) -> None:
        names = self.model.entities
        ev = TraceEvent(
            self.model.now,
            next(self._trace_seq),
            kind,
            None if emitter is None else names[emitter].name,
            None if recipient is None else names[recipient].name,
            render_payload(payload),
        )
        self._batch.append(ev)
        if self.sink is not None:
            self.sink(ev)

    def _call(self, eid: EntityId, hook: str, *args: Any) -> Any:
        ent = self.model.entities[eid]
        try:
            return getattr(ent.behavior, hook)(*args)
        except Exception as exc:
            raise HookError(ent.name, hook, self.model.now, exc) from exc

    # -- pipeline ---------------------------------------------------------

    def _send(self, emitter: EntityId, receiver: EntityId, payload: Any) -> None:
        if not self.model.graph.has_edge(emitter, receiver):
            raise RoutingError(f"no edge {emitter} -> {receiver}")
        stim = Stimulus(emitter, receiver, _isolated(payload), self.model.now)
        self._record("emit", emitter, receiver, stim.payload)
        self._push(self.model.time_us, Delivery(stim))

    def _advance(self, eid: EntityId) -> None:
        ent = self.model.entities[eid]
        now_us = self.model.time_us
        elapsed = to_seconds(now_us - ent.last_update_us)
        self._record("update", None, eid, elapsed)
        ent.state = self._call(eid, "update", ent.state, elapsed, self.model.rng)
        ent.last_update_us = now_us

    def _fan_out(self, eid: EntityId, trigger: Any) -> None:
        ent = self.model.entities[eid]
        on_timer = trigger is TIMER_TICK
        for sub in self.model.graph.subscribers_of(eid):
            decision = bool(self._call(eid, "emits", ent.state, sub, trigger))
            self._record("emit-decision", eid, sub, decision)
            if not decision:
                continue
            out = self._call(eid, "what_to_send", ent.state, sub, trigger, self.model.rng)
            if out is not None:
                self._send(eid, sub, out)
            elif on_timer:
                self._record("timer-skip", eid, sub)

    def process_delivery(self, stim: Stimulus) -> None:
        r = stim.receiver
        if not self.model.graph.has_edge(stim.emitter, r):
            raise RoutingError(
                f"delivery {self.model.name_of(stim.emitter)} -> {self.model.name_of(r)} "
                "over an edge that no longer exists"
            )
        self._record("deliver", stim.emitter, r, stim.payload)
        self._advance(r)
        ent = self.model.entities[r]
        self._record("receive", stim.emitter, r)
        ent.state = self._call(r, "receive", ent.state, stim.emitter, stim.payload)
        self._fan_out(r, stim.payload)

    def process_timer(self, eid: EntityId) -> None:
        ent = self.model.entities[eid]
        if ent.timer_period_us is None:
            raise SchedulingError(f"entity {ent.name!r} has no timer")
        next_us = self.model.time_us + ent.timer_period_us
        self._record("timer-fire", eid, None, {"next": to_seconds(next_us)})
        self._advance(eid)
        ent.state = self._call(eid, "on_timer", ent.state, self.model.rng)
        note = self._call(eid, "timer_note", ent.state)
        if note is not None:
            kind, payload = note
            if kind not in NOTE_KINDS:
                raise HookError(ent.name, "timer_note", self.now, ValueError(f"bad note kind {kind!r}"))
            self._record(kind, eid, None, payload)
        self._fan_out(eid, TIMER_TICK)
        self._schedule_timer(eid, next_us)

    def _process_injection(self, inj: Injection) -> None:
        self._record("inject", inj.emitter, None, inj.payload)
        for sub in self.model.graph.subscribers_of(inj.emitter):
            self._send(inj.emitter, sub, inj.payload)

    # -- driving ----------------------------------------------------------

    def step(self) -> list[TraceEvent] | None:
        """Process the earliest queued event; ``None`` when the queue is empty."""
        if not self._queue:
            return None
        ev = heapq.heappop(self._queue)
        # the heap never yields an event earlier than the clock
        assert ev.time_us >= self.model.time_us
        if ev.time_us != self._instant_us:
            self._instant_us, self._instant_events = ev.time_us, 0
        self._instant_events += 1
        self.model.time_us = ev.time_us
        if self._instant_events > self.instant_limit:
            raise SchedulingError(
                f"more than {self.instant_limit} events at t={self.now:.6f}; "
                "emission cycle with zero latency?"
            )
        self._batch = []
        kind = ev.kind
        if isinstance(kind, Delivery):
            self.process_delivery(kind.stimulus)
        elif isinstance(kind, TimerFire):
            self.process_timer(kind.entity)
        else:
            self._process_injection(kind)
        batch, self._batch = self._batch, []
        return batch

    def run_until(self, t_end: float) -> list[TraceEvent]:
        """Process every event due at or before ``t_end``; leave the clock at ``t_end``."""
        end_us = to_micros(t_end)
        if end_us < self.model.time_us:
            raise SchedulingError(f"t_end={t_end} is before current time {self.now:.6f}")
        trace: list[TraceEvent] = []
        while self._queue and self._queue[0].time_us <= end_us:
            batch = self.step()
            assert batch is not None
            trace.extend(batch)
        self.model.time_us = end_us
        return trace
