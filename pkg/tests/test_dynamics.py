"""Vehicle model unit tests against hand-computed oracle values."""
import math

import pytest
from hypothesis import given, strategies as st

from scootsim import dynamics
from scootsim.dynamics import (DEFAULT_POWER_ANCHORS, PowerCurveError,
                               VehicleParams, VehicleState, drive_force,
                               equivalent_mass, fit_power_curve,
                               resistance_force, step)

P = VehicleParams()


# ---------------------------------------------------------------- resistance

def test_resistance_at_standstill_is_rolling_only():
    # hand oracle: c_r * m * g = 0.015 * 179 kg * 9.81 = 26.34 N
    f = resistance_force(VehicleState(v=0.0), P)
    assert f == pytest.approx(26.3399, abs=1e-3)


def test_resistance_at_45_kmh_level():
    # hand oracle: drag 0.5*0.78*1.225*0.64*12.5^2 = 47.775 N, plus rolling
    f = resistance_force(VehicleState(v=45.0 / 3.6), P)
    assert f == pytest.approx(47.775 + 26.3399, abs=1e-2)


def test_resistance_power_oracles():
    # the full-throttle curve must clear these to hold 45 / 48.7 km/h
    for v_kmh, p_expected in ((45.0, 926.4), (48.7, 1113.0)):
        v = v_kmh / 3.6
        assert resistance_force(VehicleState(v=v), P) * v == pytest.approx(
            p_expected, rel=2e-3)


def test_grade_term_signs():
    level = resistance_force(VehicleState(v=10.0), P)
    up = resistance_force(VehicleState(v=10.0, grade=0.05), P)
    down = resistance_force(VehicleState(v=10.0, grade=-0.05), P)
    assert up > level > down
    # exact oracle: grade term plus the rolling-resistance cosine correction
    theta = math.atan(0.05)
    expected = (P.total_mass * P.gravity * math.sin(theta)
                + P.rolling_coeff * P.total_mass * P.gravity * (math.cos(theta) - 1.0))
    assert up - level == pytest.approx(expected, rel=1e-9)


def test_equivalent_mass_oracle():
    # 179 kg + (0.327 + 1.3228) N m s^2 / 0.226^2 m^2 = 211.30 kg
    assert equivalent_mass(P) == pytest.approx(211.30, abs=0.01)


def test_vehicle_params_reject_nonpositive():
    with pytest.raises(ValueError):
        VehicleParams(wheel_radius=0.0)
    with pytest.raises(ValueError):
        VehicleParams(mass_rider=-1.0)


def test_vehicle_state_rejects_reverse():
    with pytest.raises(ValueError):
        VehicleState(v=-0.1)


# ---------------------------------------------------------------- drive force

def test_drive_force_regularized_at_launch():
    # below V_EPS the divisor is held, so force stays finite
    assert drive_force(1000.0, 0.0) == pytest.approx(1000.0 / dynamics.V_EPS)
    assert drive_force(1000.0, 10.0) == pytest.approx(100.0)
    with pytest.raises(ValueError):
        drive_force(-1.0, 5.0)


# ---------------------------------------------------------------- integrator

def test_step_clamps_velocity_at_zero():
    # standing vehicle with no drive: rolling resistance must not reverse it
    s = VehicleState(v=0.0)
    s2 = step(s, 0.0, P)
    assert s2.v == 0.0
    assert s2.x == 0.0


def test_step_accelerates_under_net_drive():
    s = VehicleState(v=5.0)
    f_res = resistance_force(s, P)
    s2 = step(s, f_res + 211.3, P, dt=0.001)
    assert s2.a == pytest.approx(1.0, rel=1e-2)
    assert s2.v > s.v
    assert s2.t == pytest.approx(0.001)


def test_step_rejects_bad_dt():
    with pytest.raises(ValueError):
        step(VehicleState(), 0.0, P, dt=0.0)


@given(st.floats(0.0, 20.0), st.floats(0.0, 3000.0))
def test_step_never_goes_negative(v0, drive):
    s = VehicleState(v=v0)
    for _ in range(5):
        s = step(s, drive, P, dt=0.01)
        assert s.v >= 0.0


# ---------------------------------------------------------------- power curve

def test_default_power_curve_hits_anchors_closely():
    curve = fit_power_curve()
    # least-squares fit, not interpolation: anchors guide the shape
    for v_kmh, p_w in DEFAULT_POWER_ANCHORS:
        assert curve(v_kmh / 3.6) == pytest.approx(p_w, rel=0.12)


def test_default_power_curve_shape():
    curve = fit_power_curve()
    v_peak, p_peak = curve.peak()
    v_lo = DEFAULT_POWER_ANCHORS[0][0] / 3.6
    v_hi = DEFAULT_POWER_ANCHORS[-1][0] / 3.6
    assert v_lo < v_peak < v_hi
    assert p_peak > curve(v_lo) and p_peak > curve(v_hi)
    # evaluation clamps outside the anchor range instead of extrapolating
    assert curve(0.0) == curve(v_lo)
    assert curve(100.0) == curve(v_hi)


def test_power_curve_clears_resistance_at_45():
    curve = fit_power_curve()
    v = 45.0 / 3.6
    assert curve(v) > resistance_force(VehicleState(v=v), P) * v


def test_constant_anchors_give_constant_curve():
    curve = fit_power_curve(((5.0, 1000.0), (15.0, 1000.0),
                             (30.0, 1000.0), (50.0, 1000.0)))
    for v_kmh in (5.0, 20.0, 50.0):
        assert curve(v_kmh / 3.6) == pytest.approx(1000.0, rel=1e-6)


def test_power_curve_rejects_bad_anchor_sets():
    with pytest.raises(PowerCurveError):
        fit_power_curve(((5.0, 500.0), (15.0, 1500.0), (25.0, 1600.0)))
    with pytest.raises(PowerCurveError):  # not strictly increasing speeds
        fit_power_curve(((5.0, 500.0), (5.0, 600.0), (25.0, 1600.0),
                         (40.0, 1400.0)))
    with pytest.raises(PowerCurveError):  # maximum at the edge, no interior peak
        fit_power_curve(((5.0, 500.0), (15.0, 900.0), (30.0, 1400.0),
                         (55.0, 2500.0)))
    with pytest.raises(PowerCurveError):
        fit_power_curve(DEFAULT_POWER_ANCHORS, degree=7)
