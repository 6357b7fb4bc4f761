/**
 * Dashboard view model: a pure reduction of the latest telemetry frame
 * plus connection state. Rendering (render.ts) is a pure function of
 * this model, which makes the whole HMI snapshot-testable.
 *
 * The five dashboard elements:
 *   1. velocity     — scooter velocity (green needle) + set velocity (blue)
 *   2. cruise       — target arrow + sign, controls greyed out when locked
 *   3. ecoLeaf      — green leaf filled by the 0-100 fuel-saving score
 *   4. evaluation   — engine speed, injection rate, recording state
 *   5. modeIndicator— ORIGINAL restriction vs velocity control
 * plus a fail-safe banner for active error classes.
 */
import type { Frame } from "./protocol.js";

export type ConnectionState = "connecting" | "connected" | "disconnected";

/** A frame older than this must be flagged instead of extrapolated. */
export const STALE_AFTER_MS = 200;

export interface VelocityGauge {
  scooterKmh: number;      // green needle
  setKmh: number;          // blue marker
}

export interface CruisePanel {
  engaged: boolean;
  targetArrowKmh: number | null;   // small arrow + cruise sign position
  controlsEnabled: boolean;        // false while fail-safe class >= 2
}

export interface EcoLeaf {
  fillFraction: number;            // 0 = empty leaf, 1 = full leaf
  consumptionTooltip: string;      // running average l/100 km
}

export interface EvaluationPanel {
  engineRpm: number;
  injectionRateMlS: number;
  recording: boolean;
}

export type BannerSeverity = "none" | "notice" | "warning" | "fault" | "shutdown";

export interface FailSafeBanner {
  activeClass: number;
  severity: BannerSeverity;
  message: string;
  engineOff: boolean;
  activeErrors: number[];
}

export interface DashboardViewModel {
  connection: ConnectionState;
  stale: boolean;
  velocity: VelocityGauge;
  cruise: CruisePanel;
  ecoLeaf: EcoLeaf;
  evaluation: EvaluationPanel;
  modeIndicator: "ORIGINAL" | "VC";
  failSafe: FailSafeBanner;
  lastFrameTimestamp: number | null;
  /** running distance integral for the consumption tooltip, meters */
  distanceM: number;
  lastVelocityKmh: number;
}

const CLASS_MESSAGES: Record<number, [BannerSeverity, string]> = {
  0: ["none", ""],
  1: ["notice", "Service notification"],
  2: ["warning", "Cruise control disabled"],
  3: ["fault", "Throttle reset — set velocity follows measured velocity"],
  4: ["shutdown", "Engine shut down"],
};

export function initialViewModel(): DashboardViewModel {
  return {
    connection: "connecting",
    stale: false,
    velocity: { scooterKmh: 0, setKmh: 0 },
    cruise: { engaged: false, targetArrowKmh: null, controlsEnabled: true },
    ecoLeaf: { fillFraction: 0, consumptionTooltip: "no distance yet" },
    evaluation: { engineRpm: 0, injectionRateMlS: 0, recording: false },
    modeIndicator: "VC",
    failSafe: { activeClass: 0, severity: "none", message: "",
                engineOff: false, activeErrors: [] },
    lastFrameTimestamp: null,
    distanceM: 0,
    lastVelocityKmh: 0,
  };
}

/** Fold one telemetry frame into the model (pure). */
export function applyFrame(vm: DashboardViewModel, frame: Frame): DashboardViewModel {
  const dt = vm.lastFrameTimestamp === null
    ? 0
    : Math.max(frame.timestamp - vm.lastFrameTimestamp, 0);
  const distanceM = vm.distanceM
    + 0.5 * (vm.lastVelocityKmh + frame.v_true) / 3.6 * dt;
  const tooltip = distanceM > 0
    ? `${(frame.fuel_total / 1000 / (distanceM / 100000)).toFixed(2)} l/100 km`
    : "no distance yet";
  const [severity, message] = CLASS_MESSAGES[frame.failsafe_class] ?? ["none", ""];
  return {
    ...vm,
    connection: "connected",
    stale: false,
    velocity: { scooterKmh: frame.v_meas, setKmh: frame.v_set },
    cruise: {
      engaged: frame.cruise_state === "ENGAGED",
      targetArrowKmh: frame.cruise_target,
      controlsEnabled: frame.cruise_allowed,
    },
    ecoLeaf: {
      fillFraction: frame.eco_score / 100,
      consumptionTooltip: tooltip,
    },
    evaluation: {
      engineRpm: frame.engine_rpm,
      injectionRateMlS: frame.injection_rate,
      recording: frame.recording,
    },
    modeIndicator: frame.mode,
    failSafe: {
      activeClass: frame.failsafe_class,
      severity,
      message,
      engineOff: frame.failsafe_class === 4 || frame.engine_rpm === 0,
      activeErrors: frame.active_errors,
    },
    lastFrameTimestamp: frame.timestamp,
    distanceM,
    lastVelocityKmh: frame.v_true,
  };
}

/** Mark the model stale when frames stop arriving (no extrapolation). */
export function applyClock(vm: DashboardViewModel, msSinceLastFrame: number): DashboardViewModel {
  if (vm.connection !== "connected") return vm;
  const stale = msSinceLastFrame > STALE_AFTER_MS;
  return stale === vm.stale ? vm : { ...vm, stale };
}

export function applyConnection(vm: DashboardViewModel, state: ConnectionState): DashboardViewModel {
  if (state === vm.connection) return vm;
  return { ...vm, connection: state, stale: state !== "connected" && vm.stale };
}
