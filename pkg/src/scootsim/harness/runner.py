"""Closed-loop scenario execution.

Wires dynamics <- powertrain <- control <- sensing <- mecu at a fixed
physics step with the controller on its own tick, producing one
measurement record per control tick plus a run summary. Execution is
deterministic: identical configs produce identical records.
"""
from __future__ import annotations

from dataclasses import dataclass

from .. import control, dynamics, mecu, powertrain, sensing
from ..powertrain import Mode
from .scenario import ScenarioConfig

#: ORIGINAL mode has no velocity controller; a proportional rider model
#: works the grip towards scripted target speeds (grip per km/h error).
RIDER_GRIP_GAIN = 0.3

#: Arrival band for time-to-top-speed measurements (km/h).
ARRIVAL_BAND_KMH = 0.5

#: Service-brake deceleration the rider model applies for scripted full
#: stops (m/s^2, gentle stop). The brake is not otherwise modeled.
RIDER_BRAKE_DECEL = 1.5


@dataclass
class MeasurementRecord:
    timestamp: float
    v_set: float          # km/h
    v_meas: float         # km/h
    v_true: float         # km/h
    tva_cmd: float        # %
    tva_actual: float     # %
    ignition_deg: float   # deg BTDC
    engine_rpm: float
    injection_rate: float  # ml/s
    fuel_total: float      # ml
    grade: float
    mode: str
    failsafe_class: int
    cruise_state: str      # OFF | ENGAGED


FIELDS_WITH_UNITS = (
    ("timestamp", "s"), ("v_set", "km/h"), ("v_meas", "km/h"),
    ("v_true", "km/h"), ("tva_cmd", "%"), ("tva_actual", "%"),
    ("ignition_deg", "degBTDC"), ("engine_rpm", "rpm"),
    ("injection_rate", "ml/s"), ("fuel_total", "ml"), ("grade", "-"),
    ("mode", "-"), ("failsafe_class", "-"), ("cruise_state", "-"),
)


@dataclass
class RunResult:
    config_name: str
    mode: str
    records: list
    summary: dict


class _Script:
    """Step-held event lookup, advanced monotonically in time."""

    def __init__(self, events):
        self.events = list(events)
        self.i = 0

    def at(self, t: float):
        while self.i + 1 < len(self.events) and self.events[self.i + 1].t <= t:
            self.i += 1
        return self.events[self.i] if self.events else None

    def due(self, t: float):
        """Events whose time has arrived since the last call (one-shot)."""
        out = []
        while self.i < len(self.events) and self.events[self.i].t <= t:
            out.append(self.events[self.i])
            self.i += 1
        return out


class Simulation:
    """One deterministic closed-loop run of a scenario in one mode.

    An optional interactive hook (see stream.py) may inject rider
    commands and consume state frames at the control tick.
    """

    def __init__(self, cfg: ScenarioConfig, mode: Mode, interactive=None):
        cfg.validate()
        self.cfg = cfg
        self.mode = mode
        self.interactive = interactive
        self.curve = dynamics.fit_power_curve(cfg.power_anchors)

    def run(self) -> RunResult:
        cfg = self.cfg
        vp, pp, cp = cfg.vehicle, cfg.powertrain, cfg.controller
        enc = cfg.encoder
        dt = cfg.dt
        n_ctrl = round(cfg.control_period / dt)
        n_steps = round(cfg.duration / dt)
        curve = self.curve
        mode = self.mode

        state = dynamics.VehicleState(v=cfg.initial_velocity / 3.6,
                                      grade=cfg.grade[0].grade)
        pt = powertrain.PowertrainState(mode=mode)
        pt.throttle_actual = 0.0
        ctrl = control.ControllerState()
        cruise = control.CruiseControl()
        failsafe = mecu.FailSafeStatus()
        heartbeat = mecu.HeartbeatMonitor(["HMI", "TPS", "TVA"])
        monitor = sensing.PlausibilityMonitor()

        rider_script = _Script(cfg.rider)
        grade_script = _Script(cfg.grade)
        cruise_script = _Script(cfg.cruise)

        buf_a = sensing.PulseBuffer(enc)
        buf_b = sensing.PulseBuffer(enc)
        step_d = enc.step_distance
        pulse_dist = 0.0
        last_edge = 0.0

        records: list[MeasurementRecord] = []
        throttle_cmd = 0.0
        braking = False
        v_meas = 0.0
        v_set = 0.0
        inj_rate_tick = pp.idle_fuel_rate
        prev_rate = pp.idle_fuel_rate
        rpm = pp.rpm_idle
        ignition = pp.optimal_ignition_deg
        cruise_label = "OFF"
        interactive = self.interactive
        live_mode = mode
        live_grip = None  # interactive grip overrides the script

        # summary accumulators
        m_eq = dynamics.equivalent_mass(vp)
        net_work = 0.0
        ke0 = 0.5 * m_eq * state.v ** 2
        time_to_arrival = None
        arrival_target = None

        for k in range(n_steps + 1):
            t = k * dt
            ev = grade_script.at(t)
            if ev is not None and ev.grade != state.grade:
                state.grade = ev.grade

            v_kmh = state.v * 3.6

            if k % n_ctrl == 0:
                # ---- sensing ----
                s_a = sensing.adaptive_window(v_meas)
                v_a, _ = sensing.wss_velocity(buf_a, now=t, s_a=s_a)
                v_b, _ = sensing.wss_velocity(buf_b, now=t, s_a=s_a)
                v_meas = v_a
                plaus = monitor.update(t, v_a, v_b)

                # ---- supervision ----
                active_faults = frozenset(
                    mecu.ErrorId(f.error_id) for f in cfg.faults
                    if f.t <= t and (f.duration is None or t < f.t + f.duration))
                if interactive is not None:
                    active_faults = active_faults | interactive.injected_faults()
                heartbeat.beat("TPS", t)
                heartbeat.beat("TVA", t)
                hmi_alive = (mecu.ErrorId.HMI_CAN_ERROR not in active_faults)
                reports = mecu.HealthReports(
                    hmi_alive=hmi_alive,
                    wss_plausible=plaus is sensing.PlausibilityResult.OK,
                    injected=active_faults - {mecu.ErrorId.HMI_CAN_ERROR},
                )
                errors = mecu.evaluate(reports)
                failsafe, _actions = mecu.transition(failsafe, errors)

                # ---- rider input ----
                if interactive is not None:
                    cmd = interactive.poll_commands(t)
                    if cmd.grip is not None:
                        live_grip = cmd.grip
                    if cmd.mode is not None and cmd.mode is not live_mode:
                        live_mode = cmd.mode
                        # bumpless transfer into VC
                        _, ki = control.scheduled_gains(v_meas, cp)
                        ctrl.integrator = pt.throttle_actual * 100.0 / ki if ki else 0.0
                        ctrl.i_enabled = True
                    for c in cmd.cruise:
                        try:
                            cruise.command(c, v_meas, allowed=failsafe.cruise_allowed)
                        except control.CruiseUnavailable:
                            interactive.report_error("CRUISE_UNAVAILABLE")
                mode_now = live_mode

                rider = rider_script.at(t)
                grip = 0.0
                target = None
                if live_grip is not None:
                    grip = live_grip
                elif rider is not None:
                    if rider.grip is not None:
                        grip = rider.grip
                    else:
                        target = rider.v_target
                # the rider model brakes for scripted full stops
                braking = target is not None and target <= 0.0

                for c in cruise_script.due(t):
                    try:
                        cruise.command(c.command, v_meas,
                                       allowed=failsafe.cruise_allowed)
                    except control.CruiseUnavailable:
                        pass

                # ---- command path ----
                engine_on = failsafe.ignition_relay is mecu.Relay.CLOSED
                if failsafe.tva_override is mecu.TvaOverride.RESET:
                    # class 3: no throttle requests, set velocity falls
                    # back to the measured velocity
                    throttle_cmd = 0.0
                    v_set = v_meas
                    ctrl.integrator = 0.0
                    ctrl.i_enabled = False
                elif not engine_on:
                    throttle_cmd = 0.0
                    v_set = 0.0
                elif mode_now is Mode.VC:
                    if target is not None:
                        grip = min(max(target / cp.v_max, 0.0), 1.0)
                    grip_sp = control.grip_to_setpoint(grip, cp)
                    v_set = cruise.effective_setpoint(
                        grip_sp, allowed=failsafe.cruise_allowed)
                    out = control.update(ctrl, v_set, v_meas, cp)
                    throttle_cmd = out / 100.0
                else:  # ORIGINAL: grip drives the valve directly
                    if target is not None:
                        grip = min(max(RIDER_GRIP_GAIN * (target - v_meas), 0.0), 1.0)
                        v_set = target
                    else:
                        v_set = grip * cp.v_max
                    throttle_cmd = grip
                cruise_label = "ENGAGED" if cruise.engaged else "OFF"

                rec = MeasurementRecord(
                    timestamp=t,
                    v_set=v_set,
                    v_meas=v_meas,
                    v_true=v_kmh,
                    tva_cmd=throttle_cmd * 100.0,
                    tva_actual=pt.throttle_actual * 100.0,
                    ignition_deg=ignition,
                    engine_rpm=rpm,
                    injection_rate=inj_rate_tick,
                    fuel_total=pt.fuel_total,
                    grade=state.grade,
                    mode=mode_now.value,
                    failsafe_class=failsafe.highest_class,
                    cruise_state=cruise_label,
                )
                records.append(rec)
                if interactive is not None:
                    interactive.emit_frame(rec, failsafe, cruise)

            if k == n_steps:
                break

            # ---- powertrain at physics rate ----
            pt.throttle_cmd = throttle_cmd
            pt.throttle_actual = powertrain.tva_track(
                pt.throttle_actual, throttle_cmd, pp, dt)
            engine_on = failsafe.ignition_relay is mecu.Relay.CLOSED
            if live_mode is Mode.ORIGINAL:
                ignition = powertrain.ec_original_restriction(v_kmh, pp)
            else:
                ignition = pp.optimal_ignition_deg
            if engine_on:
                p_ind = powertrain.indicated_power(
                    pt.throttle_actual, state.v, curve, pp)
                eta = powertrain.ignition_efficiency(ignition, pp)
                p_brake = eta * p_ind
                rate = powertrain.injection_rate(p_ind, pp)
            else:
                p_ind = p_brake = rate = 0.0
            pt.indicated_power = p_ind
            pt.brake_power = p_brake
            pt.fuel_rate = rate
            pt.fuel_total += 0.5 * (rate + prev_rate) * dt
            prev_rate = rate
            inj_rate_tick = rate
            rpm = powertrain.engine_speed_display(v_kmh, pp) if engine_on else 0.0

            f_drive = powertrain.clutch_factor(v_kmh, pp) * \
                dynamics.drive_force(p_brake, state.v)
            if braking and state.v > 0.0:
                f_drive -= m_eq * RIDER_BRAKE_DECEL
            f_res = dynamics.resistance_force(state, vp)
            new_state = dynamics.step(state, f_drive, vp, dt)
            v_mid = 0.5 * (state.v + new_state.v)
            net_work += (f_drive - f_res) * v_mid * dt

            # ---- encoder pulses ----
            travel = new_state.v * dt
            if travel > 0.0:
                while pulse_dist + travel >= step_d:
                    frac = (step_d - pulse_dist) / new_state.v
                    t_cross = t + frac
                    width = t_cross - last_edge
                    if width > 0:
                        buf_a.push(width, t_cross)
                        buf_b.push(width, t_cross)
                    last_edge = t_cross
                    travel -= step_d - pulse_dist
                    t += frac
                    pulse_dist = 0.0
                pulse_dist += travel

            state = new_state

            if arrival_target is None and v_set > 1.0:
                arrival_target = v_set
            if (time_to_arrival is None and arrival_target is not None
                    and abs(state.v * 3.6 - arrival_target) <= ARRIVAL_BAND_KMH):
                time_to_arrival = state.t

        ke1 = 0.5 * m_eq * state.v ** 2
        summary = {
            "distance_m": state.x,
            "fuel_total_ml": pt.fuel_total,
            "consumption_l_per_100km": (
                powertrain.consumption(pt.fuel_total, state.x)
                if state.x > 0 else 0.0),
            "final_velocity_kmh": state.v * 3.6,
            "net_work_j": net_work,
            "delta_kinetic_energy_j": ke1 - ke0,
            "time_to_arrival_s": time_to_arrival,
            "mode": self.mode.value,
        }
        return RunResult(cfg.name, self.mode.value, records, summary)


def run(cfg: ScenarioConfig, interactive=None) -> dict[str, RunResult]:
    """Execute a scenario in each configured mode; keyed by mode name."""
    results = {}
    for mode in cfg.modes():
        results[mode.value] = Simulation(cfg, mode, interactive=interactive).run()
    return results
