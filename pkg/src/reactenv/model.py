"""Entities, subscriptions and virtual time.

Nothing in here executes behavior; see :mod:`reactenv.engine` for that.

Virtual time is kept as an integer count of microseconds so that timer
arithmetic (``k * period``) is exact and traces are reproducible bit for bit.
Public functions accept and return seconds as floats.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Iterator

from .errors import SchedulingError, SubscriptionError, UnknownEntity

if TYPE_CHECKING:
    from .engine import Behavior, Engine

EntityId = int

MICROS = 1_000_000


def to_micros(seconds: float) -> int:
    """Convert seconds to the engine's integer microsecond clock."""
    if isinstance(seconds, bool) or not isinstance(seconds, (int, float)):
        raise TypeError(f"time must be a real number of seconds, got {seconds!r}")
    if not math.isfinite(seconds):
        raise SchedulingError(f"time must be finite, got {seconds!r}")
    return round(seconds * MICROS)


def to_seconds(micros: int) -> float:
    return micros / MICROS


class _TimerTick:
    """Trigger passed to ``emits``/``what_to_send`` on the timer path."""

    _instance: _TimerTick | None = None

    def __new__(cls) -> _TimerTick:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TIMER_TICK"

    def __copy__(self) -> _TimerTick:
        return self

    def __deepcopy__(self, memo: dict) -> _TimerTick:
        return self

    def __reduce__(self) -> str:
        return "TIMER_TICK"


TIMER_TICK = _TimerTick()


class SeededRng:
    """Deterministic random source shared by all hooks of one engine.

    Uniform draws come from the stdlib Mersenne Twister, whose output for a
    given integer seed is stable across Python versions and platforms.
    Gaussian draws use the basic Box-Muller transform, one variate per call
    (the sine partner is discarded)::

        z = sqrt(-2 ln(1 - u1)) * cos(2 pi u2)

    so every ``normal`` call consumes exactly two uniforms.
    """

    def __init__(self, seed: int) -> None:
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.seed = seed
        self._gen = random.Random(seed)

    def random(self) -> float:
        return self._gen.random()

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * self._gen.random()

    def integers(self, n: int) -> int:
        """Uniform integer in ``[0, n)``."""
        return self._gen.randrange(n)

    def normal(self, mean: float = 0.0, std: float = 1.0) -> float:
        u1 = self._gen.random()
        u2 = self._gen.random()
        z = math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)
        return mean + std * z

    def getstate(self) -> object:
        return self._gen.getstate()

    def setstate(self, state: object) -> None:
        self._gen.setstate(state)


class NullRng(SeededRng):
    """Noise-free stand-in: Gaussian draws return the mean, uniforms the midpoint."""

    def __init__(self) -> None:
        super().__init__(0)

    def random(self) -> float:
        return 0.5

    def uniform(self, low: float, high: float) -> float:
        return low + (high - low) * 0.5

    def integers(self, n: int) -> int:
        return 0

    def normal(self, mean: float = 0.0, std: float = 1.0) -> float:
        return mean


@dataclass
class Entity:
    id: EntityId
    name: str
    behavior: Behavior
    state: Any
    last_update_us: int = 0
    timer_period_us: int | None = None

    @property
    def last_update(self) -> float:
        return to_seconds(self.last_update_us)

    @property
    def timer_period(self) -> float | None:
        if self.timer_period_us is None:
            return None
        return to_seconds(self.timer_period_us)


class SubscriptionGraph:
    """Directed emitter -> receiver edges, kept in insertion order per emitter."""

    def __init__(self) -> None:
        # dicts used as ordered sets
        self._out: dict[EntityId, dict[EntityId, None]] = {}

    def add(self, emitter: EntityId, receiver: EntityId) -> None:
        if emitter == receiver:
            raise SubscriptionError(f"entity {emitter} cannot subscribe to itself")
        receivers = self._out.setdefault(emitter, {})
        if receiver in receivers:
            raise SubscriptionError(f"edge {emitter} -> {receiver} already present")
        receivers[receiver] = None

    def remove(self, emitter: EntityId, receiver: EntityId) -> None:
        receivers = self._out.get(emitter)
        if receivers is None or receiver not in receivers:
            raise SubscriptionError(f"edge {emitter} -> {receiver} not present")
        del receivers[receiver]

    def has_edge(self, emitter: EntityId, receiver: EntityId) -> bool:
        return receiver in self._out.get(emitter, ())

    def subscribers_of(self, emitter: EntityId) -> list[EntityId]:
        return list(self._out.get(emitter, ()))

    def edges(self) -> Iterator[tuple[EntityId, EntityId]]:
        for emitter, receivers in self._out.items():
            for receiver in receivers:
                yield emitter, receiver

    def __len__(self) -> int:
        return sum(len(r) for r in self._out.values())

    def __contains__(self, edge: object) -> bool:
        if not isinstance(edge, tuple) or len(edge) != 2:
            return False
        return self.has_edge(*edge)


@dataclass
class Model:
    """The pair (entities, subscriptions) plus the shared random source.

    ``time_us`` is the current virtual time. It only moves forward, and only
    an attached :class:`~reactenv.engine.Engine` moves it.
    """

    rng: SeededRng = field(default_factory=lambda: SeededRng(0))
    entities: list[Entity] = field(default_factory=list)
    graph: SubscriptionGraph = field(default_factory=SubscriptionGraph)
    time_us: int = 0
    _names: dict[str, EntityId] = field(default_factory=dict, repr=False)
    _engine: Engine | None = field(default=None, repr=False)

    @property
    def now(self) -> float:
        return to_seconds(self.time_us)

    def entity(self, eid: EntityId) -> Entity:
        if isinstance(eid, bool) or not isinstance(eid, int) or not 0 <= eid < len(self.entities):
            raise UnknownEntity(f"no entity with id {eid!r}")
        return self.entities[eid]

    def by_name(self, name: str) -> Entity:
        try:
            return self.entities[self._names[name]]
        except KeyError:
            raise UnknownEntity(f"no entity named {name!r}") from None

    def name_of(self, eid: EntityId) -> str:
        return self.entity(eid).name

    def create_entity(
        self,
        behavior: Behavior,
        state: Any = None,
        timer_period: float | None = None,
        name: str | None = None,
    ) -> EntityId:
        period_us = None
        if timer_period is not None:
            period_us = to_micros(timer_period)
            if period_us <= 0:
                raise SchedulingError(f"timer_period must be positive, got {timer_period!r}")
        eid = len(self.entities)
        if name is None:
            name = f"entity-{eid}"
        if name in self._names:
            raise ValueError(f"entity name {name!r} already in use")
        ent = Entity(eid, name, behavior, state, self.time_us, period_us)
        self.entities.append(ent)
        self._names[name] = eid
        if self._engine is not None and period_us is not None:
            self._engine._schedule_timer(eid, self.time_us + period_us)
        return eid

    def subscribe(self, emitter: EntityId, receiver: EntityId) -> None:
        self.entity(emitter)
        self.entity(receiver)
        self.graph.add(emitter, receiver)

    def unsubscribe(self, emitter: EntityId, receiver: EntityId) -> None:
        self.graph.remove(emitter, receiver)

    def subscribers_of(self, emitter: EntityId) -> list[EntityId]:
        self.entity(emitter)
        return self.graph.subscribers_of(emitter)

    def add_mutual(
        self,
        host: EntityId,
        behavior: Behavior,
        state: Any = None,
        timer_period: float | None = None,
        name: str | None = None,
    ) -> EntityId:
        """Create an entity linked both ways with ``host``."""
        self.entity(host)
        eid = self.create_entity(behavior, state, timer_period=timer_period, name=name)
        self.subscribe(host, eid)
        self.subscribe(eid, host)
        return eid
