"""Scenario configuration: schema, validation and parameter assembly.

A scenario is a JSON document (or an in-code ScenarioConfig) describing
duration, timing, the rider input script, the grade profile, fault
injections and parameter overrides. Rider entries either command the
grip directly ({"t": ..., "grip": ...}) or name a target speed
({"t": ..., "v_target": ...}); targets are turned into grip by the
mode-appropriate rider model in the runner.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field, replace

from ..control import ControllerParams, CruiseCommand
from ..dynamics import DEFAULT_POWER_ANCHORS, VehicleParams, fit_power_curve
from ..powertrain import Mode, PowertrainParams
from ..sensing import EncoderConfig, EmulationConfig


class ConfigInvalid(ValueError):
    """Scenario configuration rejected; carries field-level diagnostics."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid scenario config: " + "; ".join(self.problems))


@dataclass(frozen=True)
class RiderEvent:
    t: float
    grip: float | None = None
    v_target: float | None = None


@dataclass(frozen=True)
class CruiseEvent:
    t: float
    command: CruiseCommand


@dataclass(frozen=True)
class GradeEvent:
    t: float
    grade: float


@dataclass(frozen=True)
class FaultEvent:
    t: float
    error_id: int
    duration: float | None = None  # None = persists to end of run


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    duration: float
    dt: float = 0.001
    control_period: float = 0.020
    mode: str = "BOTH"                    # ORIGINAL | VC | BOTH
    rider: tuple = (RiderEvent(0.0, grip=0.0),)
    cruise: tuple = ()
    grade: tuple = (GradeEvent(0.0, 0.0),)
    faults: tuple = ()
    initial_velocity: float = 0.0         # km/h
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    powertrain: PowertrainParams = field(default_factory=PowertrainParams)
    controller: ControllerParams = field(default_factory=ControllerParams)
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    emulation: EmulationConfig = field(default_factory=EmulationConfig)
    power_anchors: tuple = DEFAULT_POWER_ANCHORS

    def validate(self) -> "ScenarioConfig":
        problems = []
        if self.duration <= 0:
            problems.append("duration: must be positive")
        if self.dt <= 0:
            problems.append("dt: must be positive")
        n = self.control_period / self.dt if self.dt > 0 else 0
        if self.dt > 0 and abs(n - round(n)) > 1e-9:
            problems.append("control_period: must be an integer multiple of dt")
        if self.mode not in ("ORIGINAL", "VC", "BOTH"):
            problems.append(f"mode: unknown mode {self.mode!r}")
        for label, events in (("rider", self.rider), ("cruise", self.cruise),
                              ("grade", self.grade), ("faults", self.faults)):
            times = [e.t for e in events]
            if any(b < a for a, b in zip(times, times[1:])):
                problems.append(f"{label}: script times must be non-decreasing")
        for e in self.rider:
            if e.grip is None and e.v_target is None:
                problems.append(f"rider@{e.t}: needs grip or v_target")
            if e.grip is not None and not 0.0 <= e.grip <= 1.0:
                problems.append(f"rider@{e.t}: grip outside [0, 1]")
            if e.v_target is not None and e.v_target < 0:
                problems.append(f"rider@{e.t}: v_target must be non-negative")
        if self.initial_velocity < 0:
            problems.append("initial_velocity: must be non-negative")
        for f in self.faults:
            if not 1 <= f.error_id <= 6:
                problems.append(f"faults@{f.t}: error_id must be 1..6")
        try:
            fit_power_curve(self.power_anchors)
        except ValueError as exc:
            problems.append(f"power_anchors: {exc}")
        if problems:
            raise ConfigInvalid(problems)
        return self

    def modes(self):
        if self.mode == "BOTH":
            return (Mode.ORIGINAL, Mode.VC)
        return (Mode[self.mode],)


def _override(default, values: dict, label: str, problems: list):
    known = {f.name for f in dataclasses.fields(default)}
    unknown = set(values) - known
    if unknown:
        problems.append(f"{label}: unknown fields {sorted(unknown)}")
        return default
    try:
        return replace(default, **values)
    except (TypeError, ValueError) as exc:
        problems.append(f"{label}: {exc}")
        return default


def from_dict(doc: dict) -> ScenarioConfig:
    """Build and validate a ScenarioConfig from a parsed JSON document."""
    problems = []
    if "name" not in doc:
        problems.append("name: required")
    if "duration" not in doc:
        problems.append("duration: required")
    known_keys = {"name", "duration", "dt", "control_period", "mode", "rider",
                  "cruise", "grade", "faults", "initial_velocity", "overrides",
                  "controller_set", "power_anchors"}
    unknown = set(doc) - known_keys
    if unknown:
        problems.append(f"unknown top-level keys {sorted(unknown)}")

    def events(key, builder):
        out = []
        for i, entry in enumerate(doc.get(key, [])):
            try:
                out.append(builder(entry))
            except (KeyError, TypeError, ValueError) as exc:
                problems.append(f"{key}[{i}]: {exc}")
        return tuple(out)

    rider = events("rider", lambda e: RiderEvent(
        float(e["t"]), grip=e.get("grip"), v_target=e.get("v_target")))
    cruise = events("cruise", lambda e: CruiseEvent(
        float(e["t"]), CruiseCommand[e["command"]]))
    grade = events("grade", lambda e: GradeEvent(float(e["t"]), float(e["grade"])))
    faults = events("faults", lambda e: FaultEvent(
        float(e["t"]), int(e["error_id"]), e.get("duration")))

    overrides = doc.get("overrides", {})
    controller = ControllerParams.named(doc.get("controller_set", "road"))
    vehicle = _override(VehicleParams(), overrides.get("vehicle", {}), "overrides.vehicle", problems)
    powertrain = _override(PowertrainParams(), overrides.get("powertrain", {}), "overrides.powertrain", problems)
    controller = _override(controller, overrides.get("controller", {}), "overrides.controller", problems)
    encoder = _override(EncoderConfig(), overrides.get("encoder", {}), "overrides.encoder", problems)
    emulation = _override(EmulationConfig(), overrides.get("emulation", {}), "overrides.emulation", problems)
    anchors = tuple(tuple(a) for a in doc.get("power_anchors", DEFAULT_POWER_ANCHORS))

    if problems:
        raise ConfigInvalid(problems)

    cfg = ScenarioConfig(
        name=str(doc["name"]),
        duration=float(doc["duration"]),
        dt=float(doc.get("dt", 0.001)),
        control_period=float(doc.get("control_period", 0.020)),
        mode=str(doc.get("mode", "BOTH")),
        rider=rider or (RiderEvent(0.0, grip=0.0),),
        cruise=cruise,
        grade=grade or (GradeEvent(0.0, 0.0),),
        faults=faults,
        initial_velocity=float(doc.get("initial_velocity", 0.0)),
        vehicle=vehicle,
        powertrain=powertrain,
        controller=controller,
        encoder=encoder,
        emulation=emulation,
        power_anchors=anchors,
    )
    return cfg.validate()


def load(path) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigInvalid([f"not valid JSON: {exc}"]) from exc
    return from_dict(doc)
