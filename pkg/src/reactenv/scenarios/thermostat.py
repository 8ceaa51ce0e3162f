"""Room thermostat: an agent adds heat, the room cools, a noisy reading goes out every second."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

from ..engine import Behavior, Engine
from ..model import TIMER_TICK, EntityId, Model, SeededRng
from .base import Scenario, apply_overrides, ticks


@dataclass
class ThermostatState:
    temperature: float
    min_temp: float
    max_temp: float
    cooling_rate: float = 0.1
    noise_std: float = 0.1

    def __post_init__(self) -> None:
        if not self.min_temp <= self.max_temp:
            raise ValueError("min_temp must not exceed max_temp")
        self.temperature = min(max(self.temperature, self.min_temp), self.max_temp)

    def add_temperature(self, diff: float) -> None:
        self.temperature += diff
        if self.temperature < self.min_temp:
            self.temperature = self.min_temp
        elif self.temperature > self.max_temp:
            self.temperature = self.max_temp


def _is_real(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


class ThermostatBehavior(Behavior):
    def receive(self, state: ThermostatState, emitter: EntityId, payload: Any) -> ThermostatState:
        if not _is_real(payload):
            raise TypeError(f"thermostat expects a real-valued heat action, got {payload!r}")
        state.add_temperature(float(payload))
        return state

    def update(self, state: ThermostatState, elapsed: float, rng: SeededRng) -> ThermostatState:
        state.add_temperature(-state.cooling_rate * elapsed)
        return state

    def emits(self, state: ThermostatState, subscriber: EntityId, trigger: Any) -> bool:
        # a heat action is absorbed, never echoed back
        return not _is_real(trigger)

    def what_to_send(
        self, state: ThermostatState, subscriber: EntityId, trigger: Any, rng: SeededRng
    ) -> Any:
        if trigger is not TIMER_TICK:
            return None
        return state.temperature + rng.normal(0.0, state.noise_std)


class ThermostatAgent(Behavior):
    """Passive agent: it only acts through injected actions."""

    def emits(self, state: Any, subscriber: EntityId, trigger: Any) -> bool:
        return False


def thermostat_hooks() -> Behavior:
    return ThermostatBehavior()


@dataclass
class ThermostatParams:
    initial_temp: float = 0.0
    min_temp: float = -10.0
    max_temp: float = 10.0
    cooling_rate: float = 0.1
    noise_std: float = 0.1
    period: float = 1.0
    # scripted agent: a random heat action every ``action_interval`` seconds
    action_interval: float = 3.0
    action_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        if self.period <= 0:
            raise ValueError("period must be > 0")
        if self.action_interval < 0:
            raise ValueError("action_interval must be >= 0")


def build_model(params: ThermostatParams, model: Model) -> tuple[EntityId, EntityId]:
    state = ThermostatState(
        params.initial_temp,
        params.min_temp,
        params.max_temp,
        params.cooling_rate,
        params.noise_std,
    )
    env = model.create_entity(thermostat_hooks(), state, timer_period=params.period, name="thermostat")
    agent = model.add_mutual(env, ThermostatAgent(), name="agent")
    return env, agent


def build(seed: int, duration: float, overrides: Mapping[str, str] = {}) -> Scenario:
    params = apply_overrides(ThermostatParams(), overrides)
    model = Model(SeededRng(seed))
    env, agent = build_model(params, model)
    engine = Engine(model)
    for t in ticks(params.action_interval, params.action_interval, duration):
        engine.inject(agent, model.rng.uniform(-params.action_scale, params.action_scale), at=t)
    return Scenario("thermostat", model, engine, params, {"thermostat": env, "agent": agent})
