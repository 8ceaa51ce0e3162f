"""Two agents steering noisy point masses towards the origin through the step-env adapter."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

from ..engine import Behavior, Engine
from ..model import EntityId, Model, SeededRng
from ..rl import wrap_step_env
from .base import Scenario, apply_overrides


@dataclass
class PointMasses:
    """Step environment: ``x_i <- x_i + a_i * dt + noise``; each agent sees its own position."""

    n: int = 2
    spread: float = 5.0
    noise_std: float = 0.05

    def reset(self, rng: SeededRng) -> list[float]:
        return [rng.uniform(-self.spread, self.spread) for _ in range(self.n)]

    def transition(
        self, state: list[float], actions: Mapping[int, Any], dt: float, rng: SeededRng
    ) -> tuple[list[float], dict[int, float]]:
        nxt = [x + float(actions[i]) * dt + rng.normal(0.0, self.noise_std) for i, x in enumerate(state)]
        return nxt, {i: x for i, x in enumerate(nxt)}


@dataclass
class SeekerState:
    gain: float = 1.0
    last_position: float | None = None


class Seeker(Behavior):
    """Proportional controller: answers every observation with a velocity command."""

    def receive(self, state: SeekerState, emitter: EntityId, payload: Any) -> SeekerState:
        state.last_position = float(payload)
        return state

    def what_to_send(
        self, state: SeekerState, subscriber: EntityId, trigger: Any, rng: SeededRng
    ) -> Any:
        if state.last_position is None:
            return None
        return max(-1.0, min(1.0, -state.gain * state.last_position))


@dataclass
class RLDemoParams:
    agents: int = 2
    dt: float = 0.5
    spread: float = 5.0
    noise_std: float = 0.05
    gain: float = 1.0

    def __post_init__(self) -> None:
        if self.agents < 1 or self.dt <= 0 or self.noise_std < 0:
            raise ValueError("need agents >= 1, dt > 0, noise_std >= 0")


def build(seed: int, duration: float, overrides: Mapping[str, str] = {}) -> Scenario:
    params = apply_overrides(RLDemoParams(), overrides)
    model = Model(SeededRng(seed))
    agents = [
        model.create_entity(Seeker(), SeekerState(params.gain), name=f"agent-{i}")
        for i in range(params.agents)
    ]
    env = PointMasses(params.agents, params.spread, params.noise_std)
    adapter = wrap_step_env(model, env, params.dt, agents, name="env")
    engine = Engine(model)
    # opening move; afterwards agents answer each observation
    for a in agents:
        engine.inject(a, 0.0, at=0.0)
    ids = {"env": adapter} | {model.name_of(a): a for a in agents}
    return Scenario("rl-demo", model, engine, params, ids)
