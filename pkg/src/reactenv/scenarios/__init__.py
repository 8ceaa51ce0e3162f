"""Bundled scenarios, keyed by the name used on the command line."""

from __future__ import annotations

from typing import Callable, Mapping

from . import football, hearingaid, mountaincar, rldemo, thermostat
from .base import Scenario, apply_overrides

Builder = Callable[[int, float, Mapping[str, str]], Scenario]

SCENARIOS: dict[str, tuple[Builder, str]] = {
    "thermostat": (thermostat.build, "room cools, agent adds heat, noisy reading every second"),
    "mountaincar": (mountaincar.build, "mountain car with proprioceptive throttle replies and a 2 Hz sensor"),
    "football": (football.build, "world entity plus 22 players with cone vision and shout relay"),
    "hearingaid": (hearingaid.build, "hearing aid routing between world, user and phone agent"),
    "rl-demo": (rldemo.build, "step-function environment behind the action barrier adapter"),
}

__all__ = ["SCENARIOS", "Scenario", "apply_overrides"]
