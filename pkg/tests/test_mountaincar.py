from __future__ import annotations

import math

import pytest

from reactenv import Engine, HookError, Model, SeededRng
from reactenv.scenarios import mountaincar
from reactenv.scenarios.mountaincar import (
    MountainCarParams,
    MountainCarState,
    integrate,
)


def classic_steps(x, v, a, n):
    """Plain textbook loop, one unit step at a time."""
    out = []
    for _ in range(n):
        v += 0.001 * a - 0.0025 * math.cos(3 * x)
        v = min(max(v, -0.07), 0.07)
        x += v
        x = min(max(x, -1.2), 0.6)
        if x == -1.2 and v < 0:
            v = 0.0
        out.append((x, v))
    return out


def _setup(params=None):
    model = Model(SeededRng(0))
    car, driver = mountaincar.build_model(params or MountainCarParams(action_interval=0), model)
    return model, Engine(model), car, driver


def _replies(trace):
    return [
        (e.time, e.payload)
        for e in trace
        if e.kind == "deliver" and e.emitter == "car" and not isinstance(e.payload, dict)
    ]


@pytest.mark.parametrize("requested,applied", [(3.0, 1.0), (0.5, 0.5), (-2.0, -1.0), (-1.0, -1.0), (0, 0.0)])
def test_proprioceptive_reply_is_clamped_throttle(requested, applied):
    model, eng, car, driver = _setup()
    eng.inject(driver, requested, at=0.8)
    replies = _replies(eng.run_until(2.0))
    assert replies == [(0.8, applied)]


def test_reply_at_same_timestamp_as_action():
    model, eng, car, driver = _setup()
    eng.inject(driver, 3.0, at=1.25)
    trace = eng.run_until(1.25)
    action = next(e for e in trace if e.kind == "deliver" and e.recipient == "car")
    reply = next(
        e for e in trace if e.kind == "deliver" and e.recipient == "driver" and e.time == 1.25
    )
    assert action.time == reply.time == 1.25
    assert reply.payload == 1.0


def test_two_sensor_readings_per_second():
    model, eng, car, driver = _setup()
    trace = eng.run_until(5.0)
    sensor = [e for e in trace if e.kind == "deliver" and e.recipient == "driver"]
    assert [e.time for e in sensor] == [0.5 * k for k in range(1, 11)]
    assert all(e.payload["type"] == "CarSensor" for e in sensor)


def test_non_numeric_throttle_is_an_error():
    model, eng, car, driver = _setup()
    eng.inject(driver, "full", at=0.1)
    with pytest.raises(HookError):
        eng.run_until(1.0)


def test_integrate_matches_textbook_loop_for_whole_steps():
    s = MountainCarState(-0.5, 0.0, 0.7, step_seconds=0.1)
    integrate(s, 2.0)
    x, v = classic_steps(-0.5, 0.0, 0.7, 20)[-1]
    assert (s.position, s.velocity) == (x, v)


def test_fractional_step_interpolates():
    s = MountainCarState(-0.5, 0.01, 0.0, step_seconds=1.0)
    integrate(s, 0.5)
    dv = -0.0025 * math.cos(-1.5) * 0.5
    assert s.velocity == pytest.approx(0.01 + dv, abs=1e-15)
    assert s.position == pytest.approx(-0.5 + (0.01 + dv) * 0.5, abs=1e-15)


def test_zero_throttle_oscillates_in_valley():
    steps = classic_steps(-0.5, 0.0, 0.0, 2000)
    xs = [x for x, _ in steps]
    # the oracle shows the car swings on both sides of the valley floor
    floor = -math.pi / 6
    assert min(xs) < floor < max(xs)

    model, eng, car, driver = _setup()
    positions = []
    for k in range(1, 401):
        eng.run_until(0.5 * k)
        st = model.entity(car).state
        assert -1.2 <= st.position <= 0.6
        assert -0.07 <= st.velocity <= 0.07
        positions.append(st.position)
    crossings = sum(1 for a, b in zip(positions, positions[1:]) if (a - floor) * (b - floor) < 0)
    assert crossings >= 4


def test_held_full_throttle_stays_in_bounds():
    model, eng, car, driver = _setup()
    eng.inject(driver, 1.0, at=0.0)
    for k in range(1, 201):
        eng.run_until(k * 0.5)
        st = model.entity(car).state
        assert -1.2 <= st.position <= 0.6 and -0.07 <= st.velocity <= 0.07
