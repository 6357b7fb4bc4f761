"""Engine, throttle valve and fuel model.

Maps throttle valve position and ignition timing to wheel power and
injection rate, and implements both restriction strategies: ignition
retard (factory behaviour) versus throttle-valve restriction with the
velocity controller.

Sign convention: ignition angle is positive before TDC. The factory
restriction retards towards and past TDC (negative angles).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .dynamics import PowerCurve

#: CO2 released per liter of gasoline burned (g/l).
CO2_G_PER_LITER = 2280.0


class Mode(enum.Enum):
    ORIGINAL = "ORIGINAL"   # grip drives the valve, ignition retard restricts
    VC = "VC"               # grip sets a velocity, valve restricts


@dataclass(frozen=True)
class PowertrainParams:
    idle_fuel_rate: float = 0.07            # ml/s
    fuel_energy_density: float = 32000.0    # J/ml
    # Single calibration constant: wheel-power per fuel-energy ratio,
    # fitted once so the ORIGINAL-mode reference cycle lands on the
    # road-test average of 2.11 l/100 km (see harness.calibrate).
    base_indicated_efficiency: float = 0.1235
    retard_efficiency_coeff: float = 0.25 / 21.0 ** 2   # 1/deg^2
    optimal_ignition_deg: float = 5.0       # before TDC
    restricted_ignition_deg: float = -16.0  # 16 deg after TDC
    min_ignition_efficiency: float = 0.4
    ignition_ramp_start_offset: float = 22.0  # km/h below v_limit
    ignition_ramp_end_offset: float = 2.0     # km/h below v_limit
    tva_time_constant: float = 0.008        # s
    tva_slew_limit: float = 30.0            # fraction/s
    throttle_power_exponent: float = 0.7
    clutch_engage_speed: float = 10.0       # km/h
    clutch_launch_fraction: float = 0.35
    v_limit_original: float = 48.7          # km/h
    rpm_idle: float = 1800.0
    rpm_max: float = 8000.0

    def __post_init__(self):
        if not 0 < self.base_indicated_efficiency <= 1:
            raise ValueError("base_indicated_efficiency must be in (0, 1]")
        if not 0 < self.min_ignition_efficiency <= 1:
            raise ValueError("min_ignition_efficiency must be in (0, 1]")


@dataclass
class PowertrainState:
    throttle_cmd: float = 0.0
    throttle_actual: float = 0.0
    ignition_angle: float = 5.0    # deg, + = before TDC
    indicated_power: float = 0.0   # W
    brake_power: float = 0.0       # W
    fuel_rate: float = 0.0         # ml/s
    fuel_total: float = 0.0        # ml
    mode: Mode = Mode.VC


def tva_track(position: float, cmd: float, p: PowertrainParams, dt: float) -> float:
    """Throttle valve actuator: first-order lag plus slew limit.

    Settles to within 1 % of any commanded step in under 60 ms,
    matching the measured actuator performance.
    """
    if not 0.0 <= cmd <= 1.0:
        raise ValueError("throttle command must be in [0, 1]")
    gap = cmd - position
    move = gap * (1.0 - math.exp(-dt / p.tva_time_constant))
    limit = p.tva_slew_limit * dt
    if move > limit:
        move = limit
    elif move < -limit:
        move = -limit
    pos = position + move
    return min(max(pos, 0.0), 1.0)


def throttle_power_fraction(throttle: float, p: PowertrainParams) -> float:
    """Smooth monotone valve-opening -> wheel power fraction map.

    S-shaped: little gain right at the stop, steep through half open,
    saturating towards full open (a nearly open butterfly valve barely
    restricts the airflow). The exponent shifts the steep region. Zero
    at closed throttle: idle airflow keeps the engine running but the
    centrifugal clutch transmits no torque at idle speed.
    """
    u = min(max(throttle, 0.0), 1.0)
    s = u * u * (3.0 - 2.0 * u)
    return s ** p.throttle_power_exponent


def indicated_power(throttle_actual: float, v: float, curve: PowerCurve,
                    p: PowertrainParams) -> float:
    """Wheel-referred indicated power (W) before ignition losses."""
    return throttle_power_fraction(throttle_actual, p) * curve(v)


def ignition_efficiency(angle_deg_btdc: float, p: PowertrainParams) -> float:
    """Relative combustion efficiency versus ignition angle.

    Quadratic drop away from the optimum, floored; calibrated so full
    retard (16 deg after TDC) yields 75 % of optimum.
    """
    if not -45.0 <= angle_deg_btdc <= 45.0:
        raise ValueError("ignition angle out of range [-45, 45] deg")
    eta = 1.0 - p.retard_efficiency_coeff * (angle_deg_btdc - p.optimal_ignition_deg) ** 2
    return min(1.0, max(p.min_ignition_efficiency, eta))


def ec_original_restriction(v_kmh: float, p: PowertrainParams) -> float:
    """Factory engine-controller ignition angle versus speed (deg BTDC).

    Optimal timing below the restriction band, then a continuous linear
    ramp down to full retard as the speed limit is approached.
    """
    start = p.v_limit_original - p.ignition_ramp_start_offset
    end = p.v_limit_original - p.ignition_ramp_end_offset
    if v_kmh <= start:
        return p.optimal_ignition_deg
    if v_kmh >= end:
        return p.restricted_ignition_deg
    frac = (v_kmh - start) / (end - start)
    return p.optimal_ignition_deg + frac * (p.restricted_ignition_deg - p.optimal_ignition_deg)


def brake_power(throttle_actual: float, ignition_angle: float, v: float,
                curve: PowerCurve, p: PowertrainParams) -> float:
    """Usable wheel power: indicated power scaled by ignition efficiency."""
    return ignition_efficiency(ignition_angle, p) * indicated_power(throttle_actual, v, curve, p)


def injection_rate(ind_power: float, p: PowertrainParams) -> float:
    """Fuel flow (ml/s) at stoichiometric mixture; fuel tracks air.

    Floored at the idle rate while the engine runs.
    """
    if ind_power < 0:
        raise ValueError("indicated power must be non-negative")
    rate = ind_power / (p.base_indicated_efficiency * p.fuel_energy_density)
    return max(p.idle_fuel_rate, rate)


def clutch_factor(v_kmh: float, p: PowertrainParams) -> float:
    """Centrifugal clutch transmission fraction, smooth 0..1 ramp.

    Non-zero at standstill so the vehicle can launch; fully engaged at
    the engagement speed.
    """
    if v_kmh < 0:
        raise ValueError("velocity must be non-negative")
    x = min(v_kmh / p.clutch_engage_speed, 1.0)
    s = x * x * (3.0 - 2.0 * x)  # smoothstep
    return p.clutch_launch_fraction + (1.0 - p.clutch_launch_fraction) * s


def engine_speed_display(v_kmh: float, p: PowertrainParams) -> float:
    """Display-only engine speed map for the HMI and logs (rpm).

    The CVT ratio is not modeled; this is a clutch-shaped monotone curve
    from idle to max speed.
    """
    engage = p.clutch_engage_speed
    x = min(max(v_kmh, 0.0) / engage, 1.0)
    slip = x * x * (3.0 - 2.0 * x)
    cruise = min(max((v_kmh - engage) / (50.0 - engage), 0.0), 1.0)
    frac = 0.55 * slip + 0.45 * cruise
    return p.rpm_idle + (p.rpm_max - p.rpm_idle) * frac


def consumption(fuel_total_ml: float, distance_m: float) -> float:
    """Cycle consumption in l/100 km."""
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    return (fuel_total_ml / 1000.0) / (distance_m / 100000.0)


def co2_equivalent(liters: float) -> float:
    """Grams of CO2 released by burning the given gasoline volume."""
    if liters < 0:
        raise ValueError("liters must be non-negative")
    return CO2_G_PER_LITER * liters
