"""System supervisor: fail-safe state machine, heartbeats and routing.

Six error cases in four severity classes. Class 1 warns the rider,
class 2 locks out cruise control, class 3 resets the throttle actuator
and falls back to the measured velocity, class 4 opens the ignition
relay and shuts the engine down. Class 4 latches until an explicit
operator reset.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .powertrain import Mode, PowertrainParams


class ErrorId(enum.IntEnum):
    TPS_CALIB_REQ = 1
    TVA_CALIB_REQ = 2
    HMI_CAN_ERROR = 3
    WSS_INACCURACY = 4
    TPS_ERROR = 5
    TVA_ERROR = 6


ERROR_CLASS = {
    ErrorId.TPS_CALIB_REQ: 1,
    ErrorId.TVA_CALIB_REQ: 1,
    ErrorId.HMI_CAN_ERROR: 2,
    ErrorId.WSS_INACCURACY: 3,
    ErrorId.TPS_ERROR: 3,
    ErrorId.TVA_ERROR: 4,
}

CLASS_ACTION = {
    1: "HMI notification",
    2: "Disable cruise contr.",
    3: "Reset TVA & set vel.",
    4: "Engine shut down",
}


class Relay(enum.Enum):
    CLOSED = "CLOSED"
    OPEN = "OPEN"


class TvaOverride(enum.Enum):
    NONE = "NONE"
    RESET = "RESET"


@dataclass(frozen=True)
class FailSafeStatus:
    active_errors: frozenset = frozenset()
    highest_class: int = 0
    ignition_relay: Relay = Relay.CLOSED
    cruise_allowed: bool = True
    tva_override: TvaOverride = TvaOverride.NONE


@dataclass(frozen=True)
class HealthReports:
    """Per-tick condition inputs for error evaluation."""

    tps_calibration_required: bool = False
    tva_calibration_required: bool = False
    hmi_alive: bool = True
    wss_plausible: bool = True
    tps_ok: bool = True
    tva_ok: bool = True
    injected: frozenset = frozenset()  # forced errors (fault injection)


def evaluate(reports: HealthReports) -> set[ErrorId]:
    """Map subsystem health to the active error set."""
    errors = set(reports.injected)
    if reports.tps_calibration_required:
        errors.add(ErrorId.TPS_CALIB_REQ)
    if reports.tva_calibration_required:
        errors.add(ErrorId.TVA_CALIB_REQ)
    if not reports.hmi_alive:
        errors.add(ErrorId.HMI_CAN_ERROR)
    if not reports.wss_plausible:
        errors.add(ErrorId.WSS_INACCURACY)
    if not reports.tps_ok:
        errors.add(ErrorId.TPS_ERROR)
    if not reports.tva_ok:
        errors.add(ErrorId.TVA_ERROR)
    return errors


def transition(status: FailSafeStatus, errors: set[ErrorId]) -> tuple[FailSafeStatus, list[str]]:
    """Advance the fail-safe state; returns the new status and actions.

    The highest active class dominates. Classes 1-3 clear when their
    condition clears; an opened ignition relay stays open (class 4
    latches) until operator_reset().
    """
    latched_shutdown = status.ignition_relay is Relay.OPEN
    highest = max((ERROR_CLASS[e] for e in errors), default=0)
    actions = sorted({CLASS_ACTION[ERROR_CLASS[e]] for e in errors})
    relay = Relay.OPEN if (highest >= 4 or latched_shutdown) else Relay.CLOSED
    cruise_allowed = highest < 2 and not latched_shutdown
    tva_override = TvaOverride.RESET if highest == 3 else TvaOverride.NONE
    new = FailSafeStatus(
        active_errors=frozenset(errors),
        highest_class=highest,
        ignition_relay=relay,
        cruise_allowed=cruise_allowed,
        tva_override=tva_override,
    )
    return new, actions


def operator_reset(status: FailSafeStatus) -> FailSafeStatus:
    """Clear the class-4 latch (manual workshop reset)."""
    return FailSafeStatus(active_errors=status.active_errors,
                          highest_class=status.highest_class,
                          ignition_relay=Relay.CLOSED,
                          cruise_allowed=status.highest_class < 2,
                          tva_override=status.tva_override)


class HeartbeatMonitor:
    """Bus life detection: a node is dead after timeout_s of silence."""

    def __init__(self, nodes, timeout_s: float = 0.2):
        self.timeout = timeout_s
        self.last_seen = {n: 0.0 for n in nodes}

    def beat(self, node: str, t: float):
        self.last_seen[node] = t

    def alive(self, node: str, now: float) -> bool:
        return now - self.last_seen[node] <= self.timeout


@dataclass(frozen=True)
class RestrictionRouting:
    """What the factory engine controller receives in each driving mode."""

    mode: Mode
    ec_signal: str          # "TSS" or "EMULATED"
    ignition_angle: float   # deg BTDC applied by the EC


def route_restriction(mode: Mode, v_kmh: float, p: PowertrainParams) -> RestrictionRouting:
    """Select the speed signal fed to the factory engine controller.

    ORIGINAL feeds the true transmission sensor, so the factory ignition
    restriction is active. VC feeds the emulated low signal, keeping the
    ignition at its optimum regardless of speed.
    """
    from .powertrain import ec_original_restriction

    if mode is Mode.ORIGINAL:
        return RestrictionRouting(mode, "TSS", ec_original_restriction(v_kmh, p))
    return RestrictionRouting(mode, "EMULATED", p.optimal_ignition_deg)
