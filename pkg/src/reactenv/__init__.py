"""Reactive environments: entities exchanging stimuli over a mutable subscription graph.

>>> from reactenv import Model, Engine, SeededRng
>>> from reactenv.scenarios.thermostat import build_model, ThermostatParams
>>> model = Model(SeededRng(42))
>>> env, agent = build_model(ThermostatParams(action_interval=0), model)
>>> trace = Engine(model).run_until(3.0)
>>> sum(e.kind == "timer-fire" for e in trace)
3
"""

from __future__ import annotations

from .engine import Behavior, Engine, ScheduledEvent, Stimulus
from .errors import (
    ConfigError,
    HookError,
    ReactiveError,
    RoutingError,
    SchedulingError,
    SubscriptionError,
    TraceFormatError,
    UnknownEntity,
)
from .model import TIMER_TICK, Entity, EntityId, Model, NullRng, SeededRng, SubscriptionGraph
from .rl import BarrierState, StepEnvironment, wrap_step_env
from .trace import TraceEvent, read_trace, render_event, write_trace

__version__ = "0.1.0"

__all__ = [
    "Behavior",
    "BarrierState",
    "ConfigError",
    "Engine",
    "Entity",
    "EntityId",
    "HookError",
    "Model",
    "NullRng",
    "ReactiveError",
    "RoutingError",
    "ScheduledEvent",
    "SchedulingError",
    "SeededRng",
    "StepEnvironment",
    "Stimulus",
    "SubscriptionError",
    "SubscriptionGraph",
    "TIMER_TICK",
    "TraceEvent",
    "TraceFormatError",
    "UnknownEntity",
    "read_trace",
    "render_event",
    "wrap_step_env",
    "write_trace",
]
