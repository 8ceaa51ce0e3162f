from __future__ import annotations

import io
import subprocess
import sys

import pytest

from reactenv import Behavior, Engine, Model, SeededRng, read_trace
from reactenv import cli
from reactenv.cli import ScenarioConfig, main, run_scenario
from reactenv.errors import ConfigError
from reactenv.scenarios import SCENARIOS, Scenario


def _run(tmp_path, *extra, name="out.jsonl"):
    path = tmp_path / name
    code = main(["run", *extra, "--trace", str(path)])
    return code, path


def test_list_names_every_scenario(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in ("thermostat", "mountaincar", "football", "hearingaid", "rl-demo"):
        assert name in out


def test_thermostat_ten_seconds_has_ten_timer_fires(tmp_path):
    code, path = _run(tmp_path, "--scenario", "thermostat", "--seed", "42", "--duration", "10")
    assert code == 0
    with open(path, encoding="utf-8", newline="") as fh:
        events = read_trace(fh)
    assert sum(e.kind == "timer-fire" for e in events) == 10
    assert events[-1].time <= 10.0


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_rerun_is_byte_identical(tmp_path, name):
    args = ["--scenario", name, "--seed", "7", "--duration", "3"]
    _, a = _run(tmp_path, *args, name="a.jsonl")
    _, b = _run(tmp_path, *args, name="b.jsonl")
    assert a.read_bytes() == b.read_bytes()
    assert a.stat().st_size > 0


@pytest.mark.parametrize(
    "args",
    [
        ["--scenario", "thermostat", "--seed", "1", "--duration", "0"],
        ["--scenario", "thermostat", "--seed", "1", "--duration", "-3"],
        ["--scenario", "nope", "--seed", "1", "--duration", "1"],
        ["--scenario", "thermostat", "--seed", "-1", "--duration", "1"],
        ["--scenario", "thermostat", "--seed", "1", "--duration", "1", "--set", "novalue"],
        ["--scenario", "thermostat", "--seed", "1", "--duration", "1", "--set", "bogus=1"],
        ["--scenario", "thermostat", "--seed", "1", "--duration", "1", "--set", "period=fast"],
    ],
)
def test_bad_configuration_exits_2(tmp_path, args, capsys):
    code, _ = _run(tmp_path, *args)
    assert code == 2
    assert "config error" in capsys.readouterr().err


def test_invalid_config_object_raises():
    with pytest.raises(ConfigError):
        ScenarioConfig("thermostat", 1, 0.0)


def test_validate_accepts_scenario_output(tmp_path, capsys):
    code, path = _run(tmp_path, "--scenario", "mountaincar", "--seed", "3", "--duration", "5")
    assert code == 0
    assert main(["validate", "--trace", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_validate_rejects_damaged_trace(tmp_path, capsys):
    _, path = _run(tmp_path, "--scenario", "thermostat", "--seed", "3", "--duration", "5")
    lines = path.read_text().splitlines(keepends=True)
    path.write_text("".join(lines[:2] + [lines[2][:-5]]))
    assert main(["validate", "--trace", str(path)]) == 1
    assert "line 3" in capsys.readouterr().err


def test_validate_missing_file_exits_2(tmp_path):
    assert main(["validate", "--trace", str(tmp_path / "missing.jsonl")]) == 2


class Exploding(Behavior):
    def update(self, state, elapsed, rng):
        raise RuntimeError("boom")


def _exploding_build(seed, duration, overrides):
    model = Model(SeededRng(seed))
    model.create_entity(Exploding(), None, timer_period=1.0, name="bomb")
    return Scenario("exploding", model, Engine(model), None, {})


def test_hook_failure_exits_1_and_keeps_partial_trace(monkeypatch, capsys):
    monkeypatch.setitem(SCENARIOS, "exploding", (_exploding_build, "test only"))
    buf = io.StringIO()
    code = run_scenario(ScenarioConfig("exploding", 0, 5.0), buf)
    assert code == 1
    err = capsys.readouterr().err
    assert "bomb" in err and "update" in err and "t=1.000000" in err
    assert buf.getvalue().splitlines()[0].startswith('{"time": 1.0')


def test_stdout_trace_via_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "reactenv", "run", "--scenario", "thermostat", "--seed", "5", "--duration", "2"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.endswith("\n")
    assert sum('"kind": "timer-fire"' in line for line in proc.stdout.splitlines()) == 2
    assert cli.validate_trace(io.StringIO(proc.stdout)) == []
