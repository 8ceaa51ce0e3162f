"""Football: one world entity, 22 players built from a single behavior.

Players are linked only to the world, never to each other. They act by
sending ``Run``/``Kick``/``Shout`` records to the world; a shout is relayed
by the world to every other player. Ten times a second the world sends each
player what lies inside that player's viewing cone.

Only running and on-ball actions are modelled: no goals, fouls or offside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..engine import Behavior, Engine
from ..model import TIMER_TICK, EntityId, Model, SeededRng
from .base import Scenario, apply_overrides, ticks


@dataclass
class FootballConfig:
    pitch_width: float = 105.0
    pitch_height: float = 68.0
    run_speed: float = 7.0
    cone_half_angle_deg: float = 60.0
    vision_range: float = 40.0
    ball_friction: float = 3.0
    possession_radius: float = 1.0
    kick_speed: float = 25.0
    world_period: float = 0.1

    def __post_init__(self) -> None:
        if self.pitch_width <= 0 or self.pitch_height <= 0:
            raise ValueError("pitch dimensions must be > 0")
        if self.possession_radius < 0 or self.vision_range < 0 or self.ball_friction < 0:
            raise ValueError("radii and friction must be >= 0")
        if not 0 <= self.cone_half_angle_deg <= 180:
            raise ValueError("cone_half_angle_deg must be within [0, 180]")
        if self.world_period <= 0:
            raise ValueError("world_period must be > 0")


# -- actions and observations ---------------------------------------------


@dataclass
class Run:
    direction: float
    speed_fraction: float = 1.0


@dataclass
class Kick:
    direction: float
    power: float


@dataclass
class Shout:
    message: str


@dataclass
class Sighting:
    kind: str
    tag: str
    team: str | None
    dx: float
    dy: float


@dataclass
class Heard:
    sender: str
    team: str
    message: str


@dataclass
class FootballObservation:
    visible: list[Sighting]
    heard: list[Heard] = field(default_factory=list)


# -- world state ----------------------------------------------------------


@dataclass
class PlayerBody:
    tag: str
    team: str
    x: float
    y: float
    orientation: float
    vx: float = 0.0
    vy: float = 0.0


@dataclass
class FootballWorldState:
    config: FootballConfig = field(default_factory=FootballConfig)
    ball_x: float = 52.5
    ball_y: float = 34.0
    ball_vx: float = 0.0
    ball_vy: float = 0.0
    players: dict[EntityId, PlayerBody] = field(default_factory=dict)
    possessor: EntityId | None = None
    last_shout: tuple[EntityId, str] | None = None


def _clamp(v: float, lo: float, hi: float) -> float:
    return max(lo, min(hi, v))


def in_cone(
    body: PlayerBody, tx: float, ty: float, half_angle_deg: float, vision_range: float
) -> bool:
    dx, dy = tx - body.x, ty - body.y
    dist = math.hypot(dx, dy)
    if dist > vision_range:
        return False
    if dist == 0.0:
        return True
    facing = (dx * math.cos(body.orientation) + dy * math.sin(body.orientation)) / dist
    return facing >= math.cos(math.radians(half_angle_deg))


def observe(state: FootballWorldState, viewer: EntityId) -> list[Sighting]:
    cfg = state.config
    me = state.players[viewer]
    seen: list[Sighting] = []
    if in_cone(me, state.ball_x, state.ball_y, cfg.cone_half_angle_deg, cfg.vision_range):
        seen.append(Sighting("ball", "ball", None, state.ball_x - me.x, state.ball_y - me.y))
    for pid, other in state.players.items():
        if pid == viewer:
            continue
        if in_cone(me, other.x, other.y, cfg.cone_half_angle_deg, cfg.vision_range):
            seen.append(Sighting("player", other.tag, other.team, other.x - me.x, other.y - me.y))
    return seen


def move_ball(state: FootballWorldState, dt: float) -> None:
    """Decelerate the free ball at constant friction, stopping at zero speed."""
    cfg = state.config
    speed = math.hypot(state.ball_vx, state.ball_vy)
    if speed > 0.0:
        ux, uy = state.ball_vx / speed, state.ball_vy / speed
        if cfg.ball_friction > 0.0:
            moving = min(dt, speed / cfg.ball_friction)
        else:
            moving = dt
        new_speed = max(0.0, speed - cfg.ball_friction * moving)
        dist = 0.5 * (speed + new_speed) * moving
        state.ball_x += ux * dist
        state.ball_y += uy * dist
        state.ball_vx, state.ball_vy = ux * new_speed, uy * new_speed
    if not 0.0 <= state.ball_x <= cfg.pitch_width:
        state.ball_x = _clamp(state.ball_x, 0.0, cfg.pitch_width)
        state.ball_vx = 0.0
    if not 0.0 <= state.ball_y <= cfg.pitch_height:
        state.ball_y = _clamp(state.ball_y, 0.0, cfg.pitch_height)
        state.ball_vy = 0.0


class FootballWorld(Behavior):
    def receive(self, state: FootballWorldState, emitter: EntityId, payload: Any) -> FootballWorldState:
        body = state.players.get(emitter)
        if body is None:
            raise ValueError(f"action from non-player entity {emitter}")
        cfg = state.config
        if isinstance(payload, Run):
            frac = _clamp(payload.speed_fraction, 0.0, 1.0)
            body.orientation = payload.direction
            body.vx = cfg.run_speed * frac * math.cos(payload.direction)
            body.vy = cfg.run_speed * frac * math.sin(payload.direction)
        elif isinstance(payload, Kick):
            if math.hypot(state.ball_x - body.x, state.ball_y - body.y) <= cfg.possession_radius:
                power = _clamp(payload.power, 0.0, 1.0)
                state.ball_vx = cfg.kick_speed * power * math.cos(payload.direction)
                state.ball_vy = cfg.kick_speed * power * math.sin(payload.direction)
                state.possessor = None
        elif isinstance(payload, Shout):
            state.last_shout = (emitter, payload.message)
        else:
            raise TypeError(f"unsupported football action {payload!r}")
        return state

    def update(self, state: FootballWorldState, elapsed: float, rng: SeededRng) -> FootballWorldState:
        cfg = state.config
        for body in state.players.values():
            body.x = _clamp(body.x + body.vx * elapsed, 0.0, cfg.pitch_width)
            body.y = _clamp(body.y + body.vy * elapsed, 0.0, cfg.pitch_height)
        if state.possessor is not None:
            holder = state.players[state.possessor]
            state.ball_x, state.ball_y = holder.x, holder.y
            state.ball_vx, state.ball_vy = holder.vx, holder.vy
        else:
            move_ball(state, elapsed)
            if math.hypot(state.ball_vx, state.ball_vy) <= cfg.run_speed:
                best = None
                for pid, body in state.players.items():
                    d = math.hypot(state.ball_x - body.x, state.ball_y - body.y)
                    if d <= cfg.possession_radius and (best is None or d < best[0]):
                        best = (d, pid)
                if best is not None:
                    state.possessor = best[1]
        return state

    def emits(self, state: FootballWorldState, subscriber: EntityId, trigger: Any) -> bool:
        if subscriber not in state.players:
            return False
        if trigger is TIMER_TICK:
            return True
        if isinstance(trigger, Shout):
            return state.last_shout is not None and subscriber != state.last_shout[0]
        return False

    def what_to_send(
        self, state: FootballWorldState, subscriber: EntityId, trigger: Any, rng: SeededRng
    ) -> Any:
        visible = observe(state, subscriber)
        if isinstance(trigger, Shout) and state.last_shout is not None:
            sender = state.players[state.last_shout[0]]
            return FootballObservation(visible, [Heard(sender.tag, sender.team, state.last_shout[1])])
        return FootballObservation(visible)


@dataclass
class PlayerState:
    team: str
    last_observation: FootballObservation | None = None
    heard: list[Heard] = field(default_factory=list)


class Player(Behavior):
    """Players keep what they perceive; they act only through their actuators."""

    def receive(self, state: PlayerState, emitter: EntityId, payload: Any) -> PlayerState:
        if isinstance(payload, FootballObservation):
            state.last_observation = payload
            state.heard.extend(payload.heard)
        return state

    def emits(self, state: PlayerState, subscriber: EntityId, trigger: Any) -> bool:
        return False


PLAYER = Player()


def football_world_hooks() -> Behavior:
    return FootballWorld()


def football_player_spawn(
    model: Model,
    world: EntityId,
    team: str,
    start_position: tuple[float, float],
    name: str | None = None,
    orientation: float | None = None,
) -> EntityId:
    """Add one player body to the world and a player entity linked both ways to it."""
    wstate: FootballWorldState = model.entity(world).state
    cfg = wstate.config
    x, y = start_position
    if not (0.0 <= x <= cfg.pitch_width and 0.0 <= y <= cfg.pitch_height):
        raise ValueError(f"start position {start_position} is off the pitch")
    pid = model.create_entity(PLAYER, PlayerState(team), name=name)
    if orientation is None:
        orientation = 0.0 if x <= cfg.pitch_width / 2 else math.pi
    wstate.players[pid] = PlayerBody(model.name_of(pid), team, float(x), float(y), orientation)
    model.subscribe(world, pid)
    model.subscribe(pid, world)
    return pid


# 4-4-2 for a team attacking +x, as fractions of the pitch
FORMATION = [
    (0.04, 0.50),
    (0.20, 0.15), (0.20, 0.38), (0.20, 0.62), (0.20, 0.85),
    (0.33, 0.15), (0.33, 0.38), (0.33, 0.62), (0.33, 0.85),
    (0.45, 0.40), (0.45, 0.60),
]


@dataclass
class FootballParams:
    pitch_width: float = 105.0
    pitch_height: float = 68.0
    run_speed: float = 7.0
    cone_half_angle_deg: float = 60.0
    vision_range: float = 40.0
    ball_friction: float = 3.0
    possession_radius: float = 1.0
    kick_speed: float = 25.0
    world_period: float = 0.1
    # scripted commands, each sent to a random player
    run_interval: float = 0.1
    kick_interval: float = 0.5
    shout_interval: float = 1.0

    def config(self) -> FootballConfig:
        return FootballConfig(
            self.pitch_width,
            self.pitch_height,
            self.run_speed,
            self.cone_half_angle_deg,
            self.vision_range,
            self.ball_friction,
            self.possession_radius,
            self.kick_speed,
            self.world_period,
        )


def build_model(params: FootballParams, model: Model) -> tuple[EntityId, list[EntityId]]:
    cfg = params.config()
    state = FootballWorldState(cfg, cfg.pitch_width / 2, cfg.pitch_height / 2)
    world = model.create_entity(football_world_hooks(), state, timer_period=cfg.world_period, name="world")
    players = []
    for team, mirror in (("home", False), ("away", True)):
        for number, (fx, fy) in enumerate(FORMATION, start=1):
            if mirror:
                fx, fy = 1.0 - fx, 1.0 - fy
            pos = (fx * cfg.pitch_width, fy * cfg.pitch_height)
            players.append(football_player_spawn(model, world, team, pos, name=f"{team}-{number}"))
    return world, players


def build(seed: int, duration: float, overrides: Mapping[str, str] = {}) -> Scenario:
    params = apply_overrides(FootballParams(), overrides)
    model = Model(SeededRng(seed))
    world, players = build_model(params, model)
    engine = Engine(model)
    rng = model.rng
    schedule: list[tuple[float, int, Any]] = []
    for order, (interval, make) in enumerate(
        (
            (params.run_interval, lambda: Run(rng.uniform(-math.pi, math.pi))),
            (params.kick_interval, lambda: Kick(rng.uniform(-math.pi, math.pi), rng.random())),
            (params.shout_interval, lambda: Shout("here!")),
        )
    ):
        for t in ticks(interval, interval, duration):
            schedule.append((t, order, (players[rng.integers(len(players))], make())))
    for t, _, (player, action) in sorted(schedule, key=lambda s: (s[0], s[1])):
        engine.inject(player, action, at=t)
    ids = {"world": world} | {model.name_of(p): p for p in players}
    return Scenario("football", model, engine, params, ids)
