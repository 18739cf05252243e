"""Shared fixtures: cached corpus topologies and the acceptance summary."""

from __future__ import annotations

import time

import pytest
from hypothesis import HealthCheck, settings

from hypertop.cli import run_topology
from hypertop.curvespec import corpus_names, load_corpus

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (passed, detail)


class CorpusRun:
    """One certified run of a corpus example, with its wall-clock time."""

    def __init__(self, name: str):
        self.name = name
        self.spec = load_corpus(name)
        self.curve, self.hmap = self.spec.build()
        t0 = time.perf_counter()
        try:
            self.topo = run_topology(self.spec, certify=True, seed=0)
            self.error = None
        except Exception as exc:  # kept so every criterion can report it
            self.topo = None
            self.error = exc
        self.seconds = time.perf_counter() - t0


_RUNS: dict[str, CorpusRun] = {}


def corpus_run(name: str) -> CorpusRun:
    if name not in _RUNS:
        _RUNS[name] = CorpusRun(name)
    return _RUNS[name]


@pytest.fixture(scope="session")
def corpus():
    """Lazily computed corpus runs keyed by name."""
    return corpus_run


@pytest.fixture(scope="session")
def all_names():
    return corpus_names()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        tr.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
