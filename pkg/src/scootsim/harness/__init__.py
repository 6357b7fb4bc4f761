"""Scenario runner, logging, fuel comparison, CLI and live stream."""

from .scenario import ScenarioConfig, ConfigInvalid          # noqa: F401
from .runner import Simulation, RunResult, run               # noqa: F401
from .cycles import step_cycle, initial_cycle, fuel_cycle, s1, s2, s3  # noqa: F401
