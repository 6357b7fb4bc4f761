/**
 * Rider input shaping and command construction.
 *
 * Keyboard hold-to-accelerate ramps the grip over 0.5 s instead of
 * toggling it, approximating a twist grip; releasing ramps back down at
 * the same rate. Cruise buttons return no command while the fail-safe
 * has them locked out (inert controls instead of rejected requests).
 */
import { type Command, type CruiseButton } from "./protocol.js";

export const GRIP_RAMP_MS = 500;

export class GripRamp {
  private value = 0;
  private lastMs: number | null = null;

  /** Advance the ramp; `held` is the accelerate-key state. */
  update(nowMs: number, held: boolean): number {
    const dt = this.lastMs === null ? 0 : Math.max(nowMs - this.lastMs, 0);
    this.lastMs = nowMs;
    const step = dt / GRIP_RAMP_MS;
    this.value = held
      ? Math.min(this.value + step, 1)
      : Math.max(this.value - step, 0);
    return this.value;
  }

  get grip(): number {
    return this.value;
  }
}

export function gripCommand(grip: number): Command {
  return { grip };
}

export function sliderCommand(fraction: number): Command {
  return { grip: Math.min(Math.max(fraction, 0), 1) };
}

/** Returns null while cruise is locked out: the button renders inert. */
export function cruiseCommand(button: CruiseButton, controlsEnabled: boolean): Command | null {
  if (!controlsEnabled) return null;
  return { cruise: button };
}

export function modeToggleCommand(current: "ORIGINAL" | "VC"): Command {
  return { mode: current === "VC" ? "ORIGINAL" : "VC" };
}

export function recordCommand(on: boolean): Command {
  return { record: on };
}

/** Test-mode fault injection menu entry. */
export function faultCommand(errorId: number, clear = false): Command {
  return clear ? { fault: errorId, clear: true } : { fault: errorId };
}
