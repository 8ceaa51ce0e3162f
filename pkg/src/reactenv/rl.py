"""Run a classical step-function environment as a reactive entity.

The wrapped entity collects one action per roster agent (the latest one wins)
and, on each tick of its timer, calls ``transition`` only if every agent has
acted since the previous transition. Otherwise the tick is skipped and a
``barrier-wait`` record lands in the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Protocol, Sequence

from .engine import Behavior
from .model import TIMER_TICK, EntityId, Model, SeededRng


class StepEnvironment(Protocol):
    def reset(self, rng: SeededRng) -> Any: ...

    def transition(
        self,
        state: Any,
        actions: Mapping[int, Any],
        dt: float,
        rng: SeededRng,
    ) -> tuple[Any, Mapping[int, Any]]: ...


@dataclass
class BarrierState:
    inner: Any
    roster: list[EntityId]
    dt: float
    pending: dict[int, Any] = field(default_factory=dict)
    outbox: dict[int, Any] = field(default_factory=dict)
    transitions: int = 0
    waited: bool = False

    def index_of(self, agent: EntityId) -> int:
        try:
            return self.roster.index(agent)
        except ValueError:
            raise ValueError(f"entity {agent} is not on the roster {self.roster}") from None


class BarrierBehavior(Behavior):
    def __init__(self, env: StepEnvironment) -> None:
        self.env = env

    def receive(self, state: BarrierState, emitter: EntityId, payload: Any) -> BarrierState:
        state.pending[state.index_of(emitter)] = payload
        return state

    def on_timer(self, state: BarrierState, rng: SeededRng) -> BarrierState:
        state.outbox = {}
        if len(state.pending) < len(state.roster):
            state.waited = True
            return state
        actions = dict(sorted(state.pending.items()))
        state.inner, observations = self.env.transition(state.inner, actions, state.dt, rng)
        state.outbox = dict(observations)
        state.pending = {}
        state.transitions += 1
        state.waited = False
        return state

    def timer_note(self, state: BarrierState) -> tuple[str, Any] | None:
        if not state.waited:
            return None
        missing = [i for i in range(len(state.roster)) if i not in state.pending]
        return "barrier-wait", {"missing": missing}

    def emits(self, state: BarrierState, subscriber: EntityId, trigger: Any) -> bool:
        if trigger is not TIMER_TICK or subscriber not in state.roster:
            return False
        return state.roster.index(subscriber) in state.outbox

    def what_to_send(
        self, state: BarrierState, subscriber: EntityId, trigger: Any, rng: SeededRng
    ) -> Any:
        return state.outbox.get(state.roster.index(subscriber))


def wrap_step_env(
    model: Model,
    stepenv: StepEnvironment,
    dt: float,
    agents: Sequence[EntityId],
    name: str | None = None,
) -> EntityId:
    """Create the barrier entity and link it both ways with every agent.

    Agent ``agents[i]`` is index ``i`` in the action and observation maps.
    ``reset`` is called once, here, with the model's rng.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    roster = list(agents)
    if not roster:
        raise ValueError("at least one agent is required")
    if len(set(roster)) != len(roster):
        raise ValueError("roster contains duplicates")
    for a in roster:
        model.entity(a)
    state = BarrierState(stepenv.reset(model.rng), roster, dt)
    eid = model.create_entity(BarrierBehavior(stepenv), state, timer_period=dt, name=name)
    for a in roster:
        model.subscribe(eid, a)
        model.subscribe(a, eid)
    return eid
