/**
 * Stream protocol: schemas for telemetry frames and rider commands.
 *
 * Mirrors docs/stream_protocol.md. Every outgoing command is validated
 * against its schema before serialization, so the dashboard can only
 * ever send schema-valid messages.
 */
import { z } from "zod";

export const FrameSchema = z.object({
  timestamp: z.number().nonnegative(),
  v_set: z.number(),
  v_meas: z.number(),
  v_true: z.number(),
  tva_cmd: z.number(),
  tva_actual: z.number(),
  ignition_deg: z.number(),
  engine_rpm: z.number(),
  injection_rate: z.number(),
  fuel_total: z.number(),
  grade: z.number(),
  mode: z.enum(["ORIGINAL", "VC"]),
  failsafe_class: z.number().int().min(0).max(4),
  cruise_state: z.enum(["OFF", "ENGAGED"]),
  eco_score: z.number().min(0).max(100),
  recording: z.boolean(),
  cruise_target: z.number().nullable(),
  cruise_allowed: z.boolean(),
  active_errors: z.array(z.number().int().min(1).max(6)),
});
export type Frame = z.infer<typeof FrameSchema>;

const ErrorReplySchema = z.object({ error: z.string() });

export type StreamMessage =
  | { kind: "frame"; frame: Frame }
  | { kind: "serverError"; message: string }
  | { kind: "malformed"; raw: string };

/** Parse one newline-delimited message from the simulator. */
export function parseMessage(line: string): StreamMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(line);
  } catch {
    return { kind: "malformed", raw: line };
  }
  const asError = ErrorReplySchema.safeParse(doc);
  if (asError.success) {
    return { kind: "serverError", message: asError.data.error };
  }
  const asFrame = FrameSchema.safeParse(doc);
  if (asFrame.success) {
    return { kind: "frame", frame: asFrame.data };
  }
  return { kind: "malformed", raw: line };
}

export const CruiseButtonSchema = z.enum([
  "SET", "RESUME", "CANCEL", "ADJUST_UP", "ADJUST_DOWN",
]);
export type CruiseButton = z.infer<typeof CruiseButtonSchema>;

export const CommandSchema = z.union([
  z.object({ grip: z.number().min(0).max(1) }).strict(),
  z.object({ mode: z.enum(["ORIGINAL", "VC"]) }).strict(),
  z.object({ cruise: CruiseButtonSchema }).strict(),
  z.object({ record: z.boolean() }).strict(),
  z.object({
    fault: z.number().int().min(1).max(6),
    clear: z.boolean().optional(),
  }).strict(),
]);
export type Command = z.infer<typeof CommandSchema>;

/** Serialize a command, refusing anything outside the schema. */
export function encodeCommand(command: Command): string {
  return JSON.stringify(CommandSchema.parse(command)) + "\n";
}
