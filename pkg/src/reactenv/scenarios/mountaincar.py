"""Mountain car with proprioceptive feedback.

The car answers every throttle command immediately with the throttle it
actually applied (clamped to [-1, 1]) and, independently, reports position
and velocity on a 2 Hz sensor timer.

Dynamics are the classic discrete formulation, one engine step per
``step_seconds`` of virtual time::

    v <- clip(v + 0.001 * a - 0.0025 * cos(3 x), -0.07, 0.07)
    x <- clip(x + v, -1.2, 0.6)          (v <- 0 when the left wall is hit)

An elapsed interval covering a fractional number of steps scales the last
step's increments by that fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping

from ..engine import Behavior, Engine
from ..model import TIMER_TICK, EntityId, Model, SeededRng
from .base import Scenario, apply_overrides, ticks

MIN_POSITION = -1.2
MAX_POSITION = 0.6
MAX_SPEED = 0.07
FORCE = 0.001
GRAVITY = 0.0025


def clamp(x: float, lo: float, hi: float) -> float:
    return max(lo, min(hi, x))


@dataclass
class MountainCarState:
    position: float = -0.5
    velocity: float = 0.0
    last_applied_throttle: float = 0.0
    step_seconds: float = 0.1
    last_actor: EntityId | None = None


@dataclass
class CarSensor:
    position: float
    velocity: float


def integrate(state: MountainCarState, elapsed: float) -> None:
    """Advance the car by ``elapsed`` seconds under the held throttle."""
    remaining = elapsed / state.step_seconds
    x, v, a = state.position, state.velocity, state.last_applied_throttle
    while remaining > 1e-12:
        h = min(1.0, remaining)
        v = clamp(v + (FORCE * a - GRAVITY * math.cos(3.0 * x)) * h, -MAX_SPEED, MAX_SPEED)
        x = clamp(x + v * h, MIN_POSITION, MAX_POSITION)
        if x == MIN_POSITION and v < 0:
            v = 0.0
        remaining -= h
    state.position, state.velocity = x, v


class MountainCarBehavior(Behavior):
    def receive(self, state: MountainCarState, emitter: EntityId, payload: Any) -> MountainCarState:
        if isinstance(payload, bool) or not isinstance(payload, (int, float)):
            raise TypeError(f"throttle must be a real number, got {payload!r}")
        state.last_applied_throttle = clamp(float(payload), -1.0, 1.0)
        state.last_actor = emitter
        return state

    def update(self, state: MountainCarState, elapsed: float, rng: SeededRng) -> MountainCarState:
        integrate(state, elapsed)
        return state

    def emits(self, state: MountainCarState, subscriber: EntityId, trigger: Any) -> bool:
        if trigger is TIMER_TICK:
            return True
        return subscriber == state.last_actor

    def what_to_send(
        self, state: MountainCarState, subscriber: EntityId, trigger: Any, rng: SeededRng
    ) -> Any:
        if trigger is TIMER_TICK:
            return CarSensor(state.position, state.velocity)
        return state.last_applied_throttle


class Driver(Behavior):
    def emits(self, state: Any, subscriber: EntityId, trigger: Any) -> bool:
        return False


def mountaincar_hooks() -> Behavior:
    return MountainCarBehavior()


@dataclass
class MountainCarParams:
    initial_position: float = -0.5
    initial_velocity: float = 0.0
    sensor_period: float = 0.5
    step_seconds: float = 0.1
    # scripted driver: random throttle every ``action_interval`` seconds
    action_interval: float = 0.7
    max_request: float = 3.0

    def __post_init__(self) -> None:
        if not MIN_POSITION <= self.initial_position <= MAX_POSITION:
            raise ValueError("initial_position out of bounds")
        if not -MAX_SPEED <= self.initial_velocity <= MAX_SPEED:
            raise ValueError("initial_velocity out of bounds")
        if self.step_seconds <= 0 or self.sensor_period <= 0:
            raise ValueError("step_seconds and sensor_period must be > 0")
        if self.action_interval < 0:
            raise ValueError("action_interval must be >= 0")


def build_model(params: MountainCarParams, model: Model) -> tuple[EntityId, EntityId]:
    state = MountainCarState(
        params.initial_position, params.initial_velocity, 0.0, params.step_seconds
    )
    car = model.create_entity(mountaincar_hooks(), state, timer_period=params.sensor_period, name="car")
    driver = model.add_mutual(car, Driver(), name="driver")
    return car, driver


def build(seed: int, duration: float, overrides: Mapping[str, str] = {}) -> Scenario:
    params = apply_overrides(MountainCarParams(), overrides)
    model = Model(SeededRng(seed))
    car, driver = build_model(params, model)
    engine = Engine(model)
    for t in ticks(params.action_interval, params.action_interval, duration):
        engine.inject(driver, model.rng.uniform(-params.max_request, params.max_request), at=t)
    return Scenario("mountaincar", model, engine, params, {"car": car, "driver": driver})
