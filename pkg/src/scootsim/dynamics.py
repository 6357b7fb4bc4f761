"""Longitudinal scooter model.

Resistance forces (air, rolling, grade), drive force from the measured
full-throttle wheel-power curve, and a fixed-step semi-implicit Euler
integrator. All quantities SI unless noted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Launch regularization for P/v at low speed (m/s). Below this the
#: centrifugal clutch dominates anyway (see powertrain.clutch_factor).
V_EPS = 0.5

#: Default physics step (s). The controller runs at 20 ms on top of this.
DT_PHYSICS = 0.001


@dataclass(frozen=True)
class VehicleParams:
    """Measured vehicle properties of the test scooter plus rider."""

    frontal_area: float = 0.78      # m^2
    wheel_radius: float = 0.226     # m
    inertia_front: float = 0.327    # N m s^2
    inertia_rear: float = 1.3228    # N m s^2
    mass_scooter: float = 99.0      # kg
    mass_rider: float = 80.0        # kg
    drag_coeff: float = 0.64
    rolling_coeff: float = 0.015
    air_density: float = 1.225      # kg/m^3
    gravity: float = 9.81           # m/s^2

    def __post_init__(self):
        for name in ("frontal_area", "wheel_radius", "inertia_front",
                     "inertia_rear", "mass_scooter", "mass_rider",
                     "drag_coeff", "rolling_coeff", "air_density", "gravity"):
            if getattr(self, name) <= 0:
                raise ValueError(f"VehicleParams.{name} must be strictly positive")

    @property
    def total_mass(self) -> float:
        return self.mass_scooter + self.mass_rider


@dataclass
class VehicleState:
    """Kinematic state at one instant. grade is rise/run, signed."""

    t: float = 0.0
    x: float = 0.0
    v: float = 0.0
    a: float = 0.0
    grade: float = 0.0

    def __post_init__(self):
        if self.v < 0:
            raise ValueError("velocity must be non-negative (no reverse)")


class PowerCurveError(ValueError):
    """Anchor set produces an invalid full-throttle power curve."""


@dataclass(frozen=True)
class PowerCurve:
    """Full-throttle wheel power P(v) fitted from dyno anchors.

    Evaluation clamps v into [0, v_fit_max] and clamps power at zero
    from below. The fitted curve rises to a single interior maximum and
    then declines (CVT efficiency and engine power drop).
    """

    coeffs: tuple  # highest order first, over v in m/s
    v_fit_max: float
    v_fit_min: float = 0.0  # evaluation holds the first-anchor value below

    def __call__(self, v: float) -> float:
        v = min(max(v, self.v_fit_min), self.v_fit_max)
        p = 0.0
        for c in self.coeffs:
            p = p * v + c
        return p if p > 0.0 else 0.0

    def peak(self) -> tuple[float, float]:
        """(v, P) of the curve maximum on the validity range."""
        vs = np.linspace(0.0, self.v_fit_max, 4000)
        ps = np.array([self(v) for v in vs])
        i = int(ps.argmax())
        return float(vs[i]), float(ps[i])


#: Default full-throttle anchors (v km/h, wheel power W). Calibration
#: inputs, not ground truth: chosen so the restricted top speed sits near
#: 48.7 km/h at full ignition retard and the unrestricted steady top
#: speed falls in 50-55 km/h. Override via scenario config.
DEFAULT_POWER_ANCHORS = (
    (5.0, 700.0),
    (15.0, 1900.0),
    (23.0, 2100.0),
    (43.0, 1900.0),
    (48.7, 1400.0),
    (53.0, 1200.0),
)


def fit_power_curve(anchors=DEFAULT_POWER_ANCHORS,
                    degree: int | None = None) -> PowerCurve:
    """Least-squares polynomial through (v km/h, P W) anchors.

    Degree defaults to 4 when six or more anchors are given, 3
    otherwise. Rejects anchor sets whose fit goes negative between the
    first and last anchor, or that lack a single interior maximum.
    """
    if len(anchors) < 4:
        raise PowerCurveError("need at least 4 anchors")
    if degree is None:
        degree = 4 if len(anchors) >= 6 else 3
    if not 3 <= degree <= 4:
        raise PowerCurveError("degree must be 3 or 4")
    v = np.array([a[0] for a in anchors], dtype=float)
    p = np.array([a[1] for a in anchors], dtype=float)
    if not np.all(np.diff(v) > 0):
        raise PowerCurveError("anchor velocities must be strictly increasing")
    v_mps = v / 3.6
    coeffs = np.polyfit(v_mps, p, degree)
    curve = PowerCurve(tuple(float(c) for c in coeffs), float(v_mps[-1]),
                       float(v_mps[0]))
    inside = np.linspace(v_mps[0], v_mps[-1], 2000)
    raw = np.polyval(coeffs, inside)
    if np.any(raw < 0):
        raise PowerCurveError("fit goes negative inside the anchor range")
    # single interior maximum: monotone rise to the peak, decline after
    if not np.allclose(p, p[0]):
        i = int(raw.argmax())
        if i == 0 or i == len(raw) - 1:
            raise PowerCurveError("curve maximum must be interior to the anchor range")
        peak = raw[i]
        if np.any(np.diff(raw[:i + 1]) < -1e-9) or np.any(raw[i + 1:] >= peak):
            raise PowerCurveError("curve must rise to a single maximum then decline")
    return curve


def resistance_force(state: VehicleState, p: VehicleParams) -> float:
    """Total resistance (N): air drag + rolling + grade.

    Positive resists forward motion; on a downhill the grade term is
    negative. Reduces to the level-road force balance at grade 0.
    """
    theta = math.atan(state.grade)
    f_air = 0.5 * p.frontal_area * p.air_density * p.drag_coeff * state.v ** 2
    f_roll = p.rolling_coeff * p.total_mass * p.gravity * math.cos(theta)
    f_grade = p.total_mass * p.gravity * math.sin(theta)
    return f_air + f_roll + f_grade


def equivalent_mass(p: VehicleParams) -> float:
    """Translational mass plus wheel rotational inertia referred to the road."""
    return p.total_mass + (p.inertia_front + p.inertia_rear) / p.wheel_radius ** 2


def drive_force(wheel_power: float, v: float, v_eps: float = V_EPS) -> float:
    """Drive force (N) from wheel power, regularized at launch.

    Partial-load rolling compensation and clutch slip are applied by the
    powertrain before the power reaches this point.
    """
    if wheel_power < 0:
        raise ValueError("wheel_power must be non-negative")
    return wheel_power / max(v, v_eps)


def step(state: VehicleState, drive: float, p: VehicleParams,
         dt: float = DT_PHYSICS) -> VehicleState:
    """One semi-implicit Euler step; v clamped at zero (no reverse).

    The clamp only acts when the net force would push a (near) standing
    vehicle backwards, e.g. rolling resistance at standstill.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    m_eq = equivalent_mass(p)
    a = (drive - resistance_force(state, p)) / m_eq
    v_new = state.v + a * dt
    if v_new < 0.0:
        v_new = 0.0
        a = (v_new - state.v) / dt
    x_new = state.x + v_new * dt
    return VehicleState(t=state.t + dt, x=x_new, v=v_new, a=a, grade=state.grade)
