"""Adaptive PI velocity controller and set-point management.

Gains are scheduled linearly with speed, the integrator is gated by a
set-point-relative error band and reset when the deviation leaves it,
and anti-windup combines conditional integration with a magnitude
clamp. Gains are per 20 ms control tick: the integrator is a per-tick
running sum of the deviation, matching how the embedded controller was
tuned.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass


@dataclass(frozen=True)
class ControllerParams:
    """Schedule endpoints. Defaults are the road-test parameter set."""

    kp_min: float = 2.1
    kp_max: float = 16.0
    ki_min: float = 0.01
    ki_max: float = 0.075
    kt_min: float = 1.3     # km/h, integrator enable band at v_set = 0
    kt_max: float = 6.3     # km/h, at v_set = v_max
    offset: float = 3.0     # km/h, I-schedule offset
    v_max: float = 45.0     # km/h
    p_limit_lo: float = -100.0
    p_limit_hi: float = 100.0
    i_limit_lo: float = 0.0
    i_limit_hi: float = 100.0
    cycle_time: float = 0.020  # s

    @classmethod
    def road(cls) -> "ControllerParams":
        return cls()

    @classmethod
    def sim(cls) -> "ControllerParams":
        """Simulation-tuned column: softer I gain, wider enable band."""
        return cls(ki_min=0.02, ki_max=0.07, kt_min=1.44, kt_max=6.84)

    @classmethod
    def named(cls, key: str) -> "ControllerParams":
        try:
            return {"road": cls.road, "sim": cls.sim}[key]()
        except KeyError:
            raise ValueError(f"unknown controller parameter set {key!r}") from None


@dataclass
class ControllerState:
    integrator: float = 0.0   # running sum of dev per tick (km/h * tick)
    i_enabled: bool = False
    last_output: float = 0.0  # % throttle
    v_set: float = 0.0        # km/h
    dev: float = 0.0          # km/h


def scheduled_gains(v_sc: float, p: ControllerParams) -> tuple[float, float]:
    """(K_P, K_I) at the current scooter velocity; K_I floored at its minimum."""
    if v_sc < 0:
        raise ValueError("velocity must be non-negative")
    kp = v_sc / p.v_max * (p.kp_max - p.kp_min) + p.kp_min
    ki = (v_sc - p.offset) / p.v_max * (p.ki_max - p.ki_min) + p.ki_min
    return kp, max(ki, p.ki_min)


def integrator_threshold(v_set: float, p: ControllerParams) -> float:
    """Integrator enable band (km/h), scheduled on the set velocity."""
    if v_set < 0:
        raise ValueError("set velocity must be non-negative")
    return v_set / p.v_max * (p.kt_max - p.kt_min) + p.kt_min


def update(st: ControllerState, v_set: float, v_meas: float,
           p: ControllerParams) -> float:
    """One control tick; returns the throttle valve command in percent.

    The error band is centered around the set point: the integrator runs
    only while |dev| <= T_I and is reset to zero when the deviation
    leaves the band or the set point changes (a new target invalidates
    the accumulated trim). While the final output saturates at 100 % the
    integrator is frozen (conditional integration); its contribution is
    additionally clamped to the configured I limits.
    """
    kp, ki = scheduled_gains(v_meas, p)
    t_i = integrator_threshold(v_set, p)
    dev = v_set - v_meas

    if abs(v_set - st.v_set) > 0.5:
        st.integrator = 0.0
    enable = abs(dev) <= t_i
    if not enable and st.i_enabled:
        st.integrator = 0.0
    if enable:
        saturated_up = st.last_output >= 100.0 and dev > 0
        if not saturated_up:
            st.integrator += dev
        # keep the I contribution inside its limits
        if ki > 0:
            lo = p.i_limit_lo / ki
            hi = p.i_limit_hi / ki
            st.integrator = min(max(st.integrator, lo), hi)

    p_term = min(max(kp * dev, p.p_limit_lo), p.p_limit_hi)
    i_term = ki * st.integrator if enable else 0.0
    out = min(max(p_term + i_term, 0.0), 100.0)

    st.i_enabled = enable
    st.last_output = out
    st.v_set = v_set
    st.dev = dev
    return out


def grip_to_setpoint(grip: float, p: ControllerParams) -> float:
    """Linear throttle-grip to set-velocity map."""
    if not 0.0 <= grip <= 1.0:
        raise ValueError("grip must be in [0, 1]")
    return grip * p.v_max


class CruiseCommand(enum.Enum):
    SET = "SET"
    RESUME = "RESUME"
    CANCEL = "CANCEL"
    ADJUST_UP = "ADJUST_UP"
    ADJUST_DOWN = "ADJUST_DOWN"


class CruiseUnavailable(RuntimeError):
    """Cruise control is locked out by an active fail-safe state."""


@dataclass
class CruiseControl:
    """Cruise target management.

    While engaged the effective set velocity is the maximum of the
    cruise target and the grip set point, so the rider can always
    override upwards. Lockout while any class >= 2 fault is active.
    """

    target_min: float = 10.0
    target_max: float = 45.0
    engaged: bool = False
    target: float | None = None

    def command(self, cmd: CruiseCommand, v_current: float, allowed: bool = True):
        if not allowed:
            self.engaged = False
            raise CruiseUnavailable("cruise control disabled by fail-safe")
        if cmd is CruiseCommand.SET:
            self.target = min(max(v_current, self.target_min), self.target_max)
            self.engaged = True
        elif cmd is CruiseCommand.RESUME:
            if self.target is not None:
                self.engaged = True
        elif cmd is CruiseCommand.CANCEL:
            self.engaged = False
        elif cmd is CruiseCommand.ADJUST_UP:
            if self.engaged and self.target is not None:
                self.target = min(self.target + 1.0, self.target_max)
        elif cmd is CruiseCommand.ADJUST_DOWN:
            if self.engaged and self.target is not None:
                self.target = max(self.target - 1.0, self.target_min)

    def effective_setpoint(self, grip_setpoint: float, allowed: bool = True) -> float:
        if not allowed:
            self.engaged = False
        if self.engaged and self.target is not None:
            return max(self.target, grip_setpoint)
        return grip_setpoint
