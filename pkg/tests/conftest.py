from __future__ import annotations

import pytest

from reactenv import TIMER_TICK, Behavior


class Logger(Behavior):
    """Default hooks, but every call is appended to a shared log."""

    def __init__(self, log: list, name: str, emit: bool = True) -> None:
        self.log = log
        self.name = name
        self.emit = emit

    def update(self, state, elapsed, rng):
        self.log.append((self.name, "update", elapsed))
        return state

    def receive(self, state, emitter, payload):
        self.log.append((self.name, "receive", payload))
        return state

    def emits(self, state, subscriber, trigger):
        self.log.append((self.name, "emits", subscriber))
        return self.emit

    def what_to_send(self, state, subscriber, trigger, rng):
        self.log.append((self.name, "what_to_send", subscriber))
        return None if trigger is TIMER_TICK else trigger


class Sink(Behavior):
    """Absorbs stimuli, keeps them in its state list, never emits."""

    def receive(self, state, emitter, payload):
        state.append((emitter, payload))
        return state

    def emits(self, state, subscriber, trigger):
        return False


@pytest.fixture
def log() -> list:
    return []


_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.failed):
        previous = _CRITERIA.get(number, (title, "PASS"))[1]
        verdict = "PASS" if report.passed and previous == "PASS" else "FAIL"
        _CRITERIA[number] = (title, verdict)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, verdict = _CRITERIA[number]
        terminalreporter.write_line(f"{verdict} criterion {number}: {title}")
