"""Supervisor tests: exhaustive fail-safe table, latch, heartbeat, routing."""
import itertools

import pytest

from scootsim import mecu
from scootsim.mecu import (CLASS_ACTION, ERROR_CLASS, ErrorId, FailSafeStatus,
                           HealthReports, HeartbeatMonitor, Relay,
                           TvaOverride, evaluate, operator_reset,
                           route_restriction, transition)
from scootsim.powertrain import Mode, PowertrainParams


def expected_outputs(errors):
    """Independent statement of the severity table for the table-driven test."""
    highest = max((ERROR_CLASS[e] for e in errors), default=0)
    return {
        "highest": highest,
        "relay": Relay.OPEN if highest >= 4 else Relay.CLOSED,
        "cruise": highest < 2,
        "tva": TvaOverride.RESET if highest == 3 else TvaOverride.NONE,
        "actions": sorted({CLASS_ACTION[ERROR_CLASS[e]] for e in errors}),
    }


def test_all_64_error_subsets():
    for n in range(len(ErrorId) + 1):
        for combo in itertools.combinations(list(ErrorId), n):
            errors = set(combo)
            status, actions = transition(FailSafeStatus(), errors)
            want = expected_outputs(errors)
            assert status.highest_class == want["highest"], errors
            assert status.ignition_relay is want["relay"], errors
            assert status.cruise_allowed == want["cruise"], errors
            assert status.tva_override is want["tva"], errors
            assert actions == want["actions"], errors
            assert status.active_errors == frozenset(errors)


def test_subset_count_is_64():
    count = sum(1 for n in range(len(ErrorId) + 1)
                for _ in itertools.combinations(list(ErrorId), n))
    assert count == 64


def test_class_4_latches_until_operator_reset():
    status, _ = transition(FailSafeStatus(), {ErrorId.TVA_ERROR})
    assert status.ignition_relay is Relay.OPEN
    # the error clears but the relay stays open
    status, _ = transition(status, set())
    assert status.ignition_relay is Relay.OPEN
    assert not status.cruise_allowed
    status = operator_reset(status)
    assert status.ignition_relay is Relay.CLOSED
    status, _ = transition(status, set())
    assert status.ignition_relay is Relay.CLOSED
    assert status.cruise_allowed


def test_classes_1_to_3_clear_with_their_condition():
    for error in (ErrorId.TPS_CALIB_REQ, ErrorId.HMI_CAN_ERROR,
                  ErrorId.WSS_INACCURACY):
        status, _ = transition(FailSafeStatus(), {error})
        assert status.ignition_relay is Relay.CLOSED
        status, _ = transition(status, set())
        assert status.highest_class == 0
        assert status.cruise_allowed


def test_evaluate_maps_health_reports():
    reports = HealthReports(tps_calibration_required=True, hmi_alive=False,
                            wss_plausible=False, tva_ok=False)
    assert evaluate(reports) == {ErrorId.TPS_CALIB_REQ, ErrorId.HMI_CAN_ERROR,
                                 ErrorId.WSS_INACCURACY, ErrorId.TVA_ERROR}
    assert evaluate(HealthReports()) == set()
    injected = HealthReports(injected=frozenset({ErrorId.TPS_ERROR}))
    assert evaluate(injected) == {ErrorId.TPS_ERROR}


def test_heartbeat_monitor():
    hb = HeartbeatMonitor(["HMI"], timeout_s=0.2)
    hb.beat("HMI", 1.0)
    assert hb.alive("HMI", 1.15)
    assert not hb.alive("HMI", 1.25)
    hb.beat("HMI", 1.3)
    assert hb.alive("HMI", 1.4)


def test_restriction_routing_per_mode():
    p = PowertrainParams()
    original = route_restriction(Mode.ORIGINAL, 48.0, p)
    assert original.ec_signal == "TSS"
    assert original.ignition_angle == p.restricted_ignition_deg
    vc = route_restriction(Mode.VC, 48.0, p)
    assert vc.ec_signal == "EMULATED"
    assert vc.ignition_angle == p.optimal_ignition_deg


def test_error_class_table_complete():
    assert set(ERROR_CLASS) == set(ErrorId)
    assert set(ERROR_CLASS.values()) == {1, 2, 3, 4}
