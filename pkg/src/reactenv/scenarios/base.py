from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, TypeVar

from ..engine import Engine
from ..errors import ConfigError
from ..model import EntityId, Model

P = TypeVar("P")

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class Scenario:
    """A built, ready-to-run scenario."""

    name: str
    model: Model
    engine: Engine
    params: Any
    ids: dict[str, EntityId] = field(default_factory=dict)


def _convert(key: str, raw: str, kind: Any) -> Any:
    try:
        if kind in (bool, "bool"):
            low = raw.strip().lower()
            if low in _TRUE:
                return True
            if low in _FALSE:
                return False
            raise ValueError(raw)
        if kind in (int, "int"):
            return int(raw)
        if kind in (float, "float"):
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError(raw)
            return value
        if kind in (str, "str"):
            return raw
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    raise ConfigError(f"parameter {key} cannot be overridden")


def apply_overrides(params: P, overrides: Mapping[str, str]) -> P:
    """Return a copy of the ``params`` dataclass with string overrides applied."""
    fields = {f.name: f for f in dataclasses.fields(params)}
    changes: dict[str, Any] = {}
    for key, raw in overrides.items():
        if key not in fields:
            known = ", ".join(sorted(fields))
            raise ConfigError(f"unknown parameter {key!r} (known: {known})")
        changes[key] = _convert(key, raw, fields[key].type)
    try:
        return dataclasses.replace(params, **changes)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def ticks(start: float, interval: float, until: float) -> list[float]:
    """Times ``start, start + interval, ...`` up to and including ``until``."""
    if interval <= 0:
        return []
    n = math.floor((until - start) / interval + 1e-9)
    return [round(start + k * interval, 6) for k in range(n + 1)] if until >= start else []
