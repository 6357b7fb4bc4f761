"""Simulation workbench for a velocity-controlled 50 cc scooter powertrain.

Subpackages model the longitudinal vehicle dynamics, the engine/throttle
powertrain with both restriction strategies, wheel-speed sensing, the
adaptive PI velocity controller, the supervising ECU with its fail-safe
state machine, and a scenario harness with CSV logging and a live
telemetry stream for the rider dashboard.
"""

__version__ = "0.1.0"

KMH_PER_MS = 3.6  # m/s -> km/h


def kmh(v_mps: float) -> float:
    return v_mps * KMH_PER_MS


def mps(v_kmh: float) -> float:
    return v_kmh / KMH_PER_MS
