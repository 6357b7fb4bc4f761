"""Shared fixtures: the expensive closed-loop runs are executed once per
session and reused by the unit and acceptance tests."""
from __future__ import annotations

import time

import pytest

from scootsim.harness import cycles
from scootsim.harness.runner import Simulation, run
from scootsim.powertrain import Mode


@pytest.fixture(scope="session")
def step_run():
    """Incremental step cycle in VC mode, with its wall-clock runtime."""
    cfg = cycles.step_cycle()
    t0 = time.perf_counter()
    result = Simulation(cfg, Mode.VC).run()
    elapsed = time.perf_counter() - t0
    return result, elapsed


@pytest.fixture(scope="session")
def s1_runs():
    return run(cycles.s1())


@pytest.fixture(scope="session")
def s2_runs():
    return run(cycles.s2())


@pytest.fixture(scope="session")
def s3_runs():
    return run(cycles.s3())


@pytest.fixture(scope="session")
def fuel_runs():
    """Desk-scale fuel cycle in both modes plus per-mode runtimes."""
    cfg = cycles.fuel_cycle()
    results = {}
    elapsed = {}
    for mode in (Mode.ORIGINAL, Mode.VC):
        t0 = time.perf_counter()
        results[mode.value] = Simulation(cfg, mode).run()
        elapsed[mode.value] = time.perf_counter() - t0
    return results, elapsed
