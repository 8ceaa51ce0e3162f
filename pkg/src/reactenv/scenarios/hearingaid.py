"""Hearing aid talking to the outside world, its user and a phone-side agent.

Routing performed by the aid:

============  ===================  =====================================
stimulus      from                 aid emits to
============  ===================  =====================================
Acoustic      world                user and agent (after processing)
Params        agent                nobody; the new gains are stored
Appraisal     user                 agent
============  ===================  =====================================

Processing is a stand-in for real DSP: the frame is multiplied elementwise
by the per-band gain vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from ..engine import Behavior, Engine
from ..model import TIMER_TICK, EntityId, Model, SeededRng
from .base import Scenario, apply_overrides, ticks

FRAME_LENGTH = 16


@dataclass
class Acoustic:
    frame: list[float]


@dataclass
class Params:
    gain: list[float]


@dataclass
class Appraisal:
    score: float
    text: str = ""


@dataclass
class HearingAidState:
    gain: list[float]
    user: EntityId
    agent: EntityId
    appraisals: list[Appraisal] = field(default_factory=list)
    output: list[float] | None = None

    def __post_init__(self) -> None:
        check_gain(self.gain)


def check_gain(gain: list[float]) -> None:
    if any(g < 0 for g in gain):
        raise ValueError(f"gains must be >= 0, got {gain}")


def process(frame: list[float], gain: list[float]) -> list[float]:
    if len(frame) != len(gain):
        raise ValueError(f"frame has {len(frame)} bands, gain has {len(gain)}")
    return [g * x for g, x in zip(gain, frame)]


class HearingAid(Behavior):
    def receive(self, state: HearingAidState, emitter: EntityId, payload: Any) -> HearingAidState:
        if isinstance(payload, Acoustic):
            state.output = process(payload.frame, state.gain)
        elif isinstance(payload, Params):
            if len(payload.gain) != len(state.gain):
                raise ValueError(f"expected {len(state.gain)} gains, got {len(payload.gain)}")
            check_gain(payload.gain)
            state.gain = list(payload.gain)
        elif isinstance(payload, Appraisal):
            state.appraisals.append(payload)
        else:
            raise TypeError(f"hearing aid cannot handle {payload!r}")
        return state

    def emits(self, state: HearingAidState, subscriber: EntityId, trigger: Any) -> bool:
        if isinstance(trigger, Acoustic):
            return subscriber in (state.user, state.agent)
        if isinstance(trigger, Appraisal):
            return subscriber == state.agent
        return False

    def what_to_send(
        self, state: HearingAidState, subscriber: EntityId, trigger: Any, rng: SeededRng
    ) -> Any:
        if isinstance(trigger, Acoustic):
            return Acoustic(list(state.output or []))
        if isinstance(trigger, Appraisal):
            return trigger
        return None


@dataclass
class AmbientState:
    frame_length: int = FRAME_LENGTH
    amplitude: float = 1.0


class OutsideWorld(Behavior):
    """Emits a random acoustic frame on each timer tick; ignores everything else."""

    def emits(self, state: AmbientState, subscriber: EntityId, trigger: Any) -> bool:
        return trigger is TIMER_TICK

    def what_to_send(
        self, state: AmbientState, subscriber: EntityId, trigger: Any, rng: SeededRng
    ) -> Any:
        return Acoustic([rng.normal(0.0, state.amplitude) for _ in range(state.frame_length)])


@dataclass
class ListenerState:
    received: list[Any] = field(default_factory=list)


class Listener(Behavior):
    """User or agent: records what arrives, acts only through injected stimuli."""

    def receive(self, state: ListenerState, emitter: EntityId, payload: Any) -> ListenerState:
        state.received.append(payload)
        return state

    def emits(self, state: ListenerState, subscriber: EntityId, trigger: Any) -> bool:
        return False


def hearingaid_entities(
    model: Model,
    gain: list[float] | None = None,
    frame_period: float | None = 0.1,
    frame_length: int = FRAME_LENGTH,
) -> tuple[EntityId, EntityId, EntityId, EntityId]:
    """Build world, aid, user and agent; the aid is linked both ways with each.

    ``frame_period=None`` leaves the world without a timer, so acoustic
    frames arrive only when injected.
    """
    if gain is None:
        gain = [1.0] * frame_length
    world = model.create_entity(OutsideWorld(), AmbientState(frame_length), timer_period=frame_period, name="world")
    user = model.create_entity(Listener(), ListenerState(), name="user")
    agent = model.create_entity(Listener(), ListenerState(), name="agent")
    aid = model.create_entity(HearingAid(), HearingAidState(list(gain), user, agent), name="aid")
    for other in (world, user, agent):
        model.subscribe(aid, other)
        model.subscribe(other, aid)
    return world, aid, user, agent


@dataclass
class HearingAidParams:
    frame_rate: float = 10.0
    frame_length: int = FRAME_LENGTH
    initial_gain: float = 1.0
    params_interval: float = 2.0
    appraisal_interval: float = 1.5

    def __post_init__(self) -> None:
        if self.frame_rate < 0 or self.frame_length <= 0 or self.initial_gain < 0:
            raise ValueError("frame_rate, frame_length and initial_gain must be non-negative")


def build(seed: int, duration: float, overrides: Mapping[str, str] = {}) -> Scenario:
    params = apply_overrides(HearingAidParams(), overrides)
    model = Model(SeededRng(seed))
    period = 1.0 / params.frame_rate if params.frame_rate > 0 else None
    world, aid, user, agent = hearingaid_entities(
        model, [params.initial_gain] * params.frame_length, period, params.frame_length
    )
    engine = Engine(model)
    rng = model.rng
    for t in ticks(params.params_interval, params.params_interval, duration):
        engine.inject(agent, Params([rng.uniform(0.0, 2.0) for _ in range(params.frame_length)]), at=t)
    for t in ticks(params.appraisal_interval, params.appraisal_interval, duration):
        engine.inject(user, Appraisal(round(rng.random(), 3), "ok"), at=t)
    ids = {"world": world, "aid": aid, "user": user, "agent": agent}
    return Scenario("hearingaid", model, engine, params, ids)
