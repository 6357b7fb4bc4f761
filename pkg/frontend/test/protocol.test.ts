import { describe, expect, it } from "vitest";

import { CommandSchema, encodeCommand, FrameSchema, parseMessage } from "../src/protocol.js";
import { cruiseCommand, faultCommand, gripCommand, modeToggleCommand,
         recordCommand, sliderCommand } from "../src/input.js";

export const SAMPLE_FRAME = {
  timestamp: 12.34,
  v_set: 30.0,
  v_meas: 29.97,
  v_true: 29.98,
  tva_cmd: 41.2,
  tva_actual: 41.0,
  ignition_deg: 5.0,
  engine_rpm: 6100.0,
  injection_rate: 0.91,
  fuel_total: 11.2,
  grade: 0.0,
  mode: "VC",
  failsafe_class: 0,
  cruise_state: "OFF",
  eco_score: 17.3,
  recording: true,
  cruise_target: null,
  cruise_allowed: true,
  active_errors: [],
};

describe("frame parsing", () => {
  it("accepts a well-formed frame", () => {
    const message = parseMessage(JSON.stringify(SAMPLE_FRAME));
    expect(message.kind).toBe("frame");
    if (message.kind === "frame") {
      expect(message.frame.v_meas).toBeCloseTo(29.97);
      expect(message.frame.cruise_target).toBeNull();
    }
  });

  it("classifies server error replies", () => {
    const message = parseMessage('{"error": "rejected command: grip outside [0, 1]"}');
    expect(message).toEqual({
      kind: "serverError",
      message: "rejected command: grip outside [0, 1]",
    });
  });

  it("flags malformed lines without throwing", () => {
    for (const line of ["not json", "[1,2]", '{"timestamp": "soon"}',
                        JSON.stringify({ ...SAMPLE_FRAME, mode: "TURBO" }),
                        JSON.stringify({ ...SAMPLE_FRAME, failsafe_class: 7 })]) {
      expect(parseMessage(line).kind).toBe("malformed");
    }
  });

  it("rejects out-of-range telemetry", () => {
    expect(FrameSchema.safeParse({ ...SAMPLE_FRAME, eco_score: 120 }).success).toBe(false);
    expect(FrameSchema.safeParse({ ...SAMPLE_FRAME, active_errors: [9] }).success).toBe(false);
  });
});

describe("command construction", () => {
  it("every input helper produces a schema-valid message", () => {
    const commands = [
      gripCommand(0.5),
      sliderCommand(2.0),          // clamped into range by the helper
      cruiseCommand("SET", true),
      cruiseCommand("ADJUST_DOWN", true),
      modeToggleCommand("VC"),
      modeToggleCommand("ORIGINAL"),
      recordCommand(false),
      faultCommand(3),
      faultCommand(3, true),
    ];
    for (const command of commands) {
      expect(command).not.toBeNull();
      const line = encodeCommand(command!);
      expect(line.endsWith("\n")).toBe(true);
      expect(CommandSchema.safeParse(JSON.parse(line)).success).toBe(true);
    }
  });

  it("refuses to serialize out-of-schema commands", () => {
    expect(() => encodeCommand({ grip: 1.5 } as never)).toThrow();
    expect(() => encodeCommand({ warp: 1 } as never)).toThrow();
    expect(() => encodeCommand({ fault: 9 } as never)).toThrow();
  });

  it("cruise buttons are inert while locked out", () => {
    expect(cruiseCommand("SET", false)).toBeNull();
  });
});
