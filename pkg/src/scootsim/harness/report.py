"""Fuel-comparison reporting and the eco-score.

Compares ORIGINAL and VC logs of the same scenario: consumption per
mode, relative saving, CO2 delta, top-speed injection reduction and
throttle statistics. The road-test reference figures (2.11 l/100 km
original, 13.6 % saving) are reported alongside for context.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..powertrain import (PowertrainParams, co2_equivalent, consumption,
                          ignition_efficiency)

#: Road-test reference values the calibration targets.
REFERENCE_ORIGINAL_L_PER_100KM = 2.11
REFERENCE_VC_L_PER_100KM = 1.82
REFERENCE_SAVING_PERCENT = 13.6


class ScenarioMismatch(ValueError):
    """The two logs do not belong to the same scenario."""


def _distance_m(records, params: PowertrainParams | None = None) -> float:
    # trapezoidal integral of the true velocity channel
    d = 0.0
    for a, b in zip(records, records[1:]):
        d += 0.5 * (a.v_true + b.v_true) / 3.6 * (b.timestamp - a.timestamp)
    return d


def _steady_topspeed_window(records, tail_s: float = 5.0):
    t_end = records[-1].timestamp
    return [r for r in records if r.timestamp >= t_end - tail_s]


@dataclass(frozen=True)
class ComparisonReport:
    scenario: str
    consumption_original: float      # l/100 km
    consumption_vc: float            # l/100 km
    saving_percent: float
    co2_delta_g_per_100km: float
    injection_reduction_percent: float   # matched-power, from ignition retard
    observed_injection_reduction_percent: float
    original_throttle_mean: float    # % at top-speed cruise
    vc_throttle_mean: float          # % at top-speed cruise
    reference_saving_percent: float = REFERENCE_SAVING_PERCENT

    def as_dict(self) -> dict:
        return self.__dict__.copy()


def compare(records_orig, records_vc, scenario_orig: str = "", scenario_vc: str = "",
            params: PowertrainParams | None = None) -> ComparisonReport:
    """Savings report from two mode logs of the same scenario."""
    if scenario_orig and scenario_vc and scenario_orig != scenario_vc:
        raise ScenarioMismatch(
            f"logs from different scenarios: {scenario_orig!r} vs {scenario_vc!r}")
    if not records_orig or not records_vc:
        raise ScenarioMismatch("empty measurement log")
    if records_orig[0].mode == "VC" or records_vc[0].mode == "ORIGINAL":
        raise ScenarioMismatch("logs passed in wrong mode order")
    params = params or PowertrainParams()

    dist_o = _distance_m(records_orig)
    dist_v = _distance_m(records_vc)
    cons_o = consumption(records_orig[-1].fuel_total, dist_o) if dist_o > 0 else 0.0
    cons_v = consumption(records_vc[-1].fuel_total, dist_v) if dist_v > 0 else 0.0
    saving = 100.0 * (1.0 - cons_v / cons_o) if cons_o > 0 else 0.0
    co2_delta = co2_equivalent(max(cons_o - cons_v, 0.0) / 100.0) * 100.0

    tail_o = _steady_topspeed_window(records_orig)
    tail_v = _steady_topspeed_window(records_vc)
    inj_o = sum(r.injection_rate for r in tail_o) / len(tail_o)
    inj_v = sum(r.injection_rate for r in tail_v) / len(tail_v)
    observed_red = 100.0 * (1.0 - inj_v / inj_o) if inj_o > 0 else 0.0

    # Matched-power reduction: at equal brake power the VC injection is
    # lower exactly by the ignition-efficiency deficit of the retarded
    # original operating point.
    eta_o = sum(ignition_efficiency(r.ignition_deg, params) for r in tail_o) / len(tail_o)
    eta_v = sum(ignition_efficiency(r.ignition_deg, params) for r in tail_v) / len(tail_v)
    matched_red = 100.0 * (1.0 - eta_o / eta_v) if eta_v > 0 else 0.0

    thr_o = sum(r.tva_actual for r in tail_o) / len(tail_o)
    thr_v = sum(r.tva_actual for r in tail_v) / len(tail_v)

    return ComparisonReport(
        scenario=scenario_orig or scenario_vc,
        consumption_original=cons_o,
        consumption_vc=cons_v,
        saving_percent=saving,
        co2_delta_g_per_100km=co2_delta,
        injection_reduction_percent=matched_red,
        observed_injection_reduction_percent=observed_red,
        original_throttle_mean=thr_o,
        vc_throttle_mean=thr_v,
    )


def eco_score(fuel_total_ml: float, distance_m: float,
              baseline_l_per_100km: float = REFERENCE_ORIGINAL_L_PER_100KM) -> float:
    """Fuel-saving score 0..100 against the calibrated original baseline."""
    if distance_m <= 0:
        return 0.0
    baseline_ml = baseline_l_per_100km * 1000.0 * distance_m / 100000.0
    if baseline_ml <= 0:
        return 0.0
    saved = baseline_ml - fuel_total_ml
    return min(max(100.0 * saved / baseline_ml, 0.0), 100.0)
