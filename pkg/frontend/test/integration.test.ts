/**
 * End-to-end test against the real Python simulator: spawns
 * `python3 -m scootsim.harness.cli run ... --serve 0`, connects the
 * dashboard client, and verifies the published latency and lockout
 * behaviour over a real localhost socket.
 */
import { spawn, type ChildProcess } from "node:child_process";
import * as path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { DashboardClient } from "../src/client.js";
import { cruiseCommand, faultCommand, gripCommand } from "../src/input.js";
import type { Frame, StreamMessage } from "../src/protocol.js";
import { applyFrame, initialViewModel } from "../src/viewModel.js";

const CONTROL_TICK_S = 0.02;
const REPO_ROOT = path.resolve(
  path.dirname(fileURLToPath(import.meta.url)), "..", "..");

let server: ChildProcess;
let port = 0;

function startServer(): Promise<number> {
  return new Promise((resolve, reject) => {
    server = spawn(
      "python3",
      ["-u", "-m", "scootsim.harness.cli", "run", "s1", "--mode", "vc",
       "--serve", "0"],
      { cwd: REPO_ROOT },
    );
    let banner = "";
    server.stdout!.on("data", (chunk: Buffer) => {
      banner += chunk.toString();
      const match = banner.match(/127\.0\.0\.1:(\d+)/);
      if (match) resolve(Number(match[1]));
    });
    server.on("error", reject);
    setTimeout(() => reject(new Error(`server did not start: ${banner}`)), 15000);
  });
}

class Collector {
  frames: Frame[] = [];
  errors: string[] = [];
  private waiters: Array<() => void> = [];

  readonly client: DashboardClient;

  constructor(portNumber: number) {
    this.client = new DashboardClient("127.0.0.1", portNumber, {
      onMessage: (message: StreamMessage) => {
        if (message.kind === "frame") this.frames.push(message.frame);
        if (message.kind === "serverError") this.errors.push(message.message);
        for (const wake of this.waiters.splice(0)) wake();
      },
    }, false);
    this.client.connect();
  }

  async until(predicate: () => boolean, timeoutMs = 10000): Promise<void> {
    const deadline = Date.now() + timeoutMs;
    while (!predicate()) {
      if (Date.now() > deadline) throw new Error("timed out waiting for stream");
      await new Promise<void>((resolveWait) => {
        this.waiters.push(resolveWait);
        setTimeout(resolveWait, 100);
      });
    }
  }
}

describe("live session against the Python simulator", () => {
  let collector: Collector;

  beforeAll(async () => {
    port = await startServer();
    collector = new Collector(port);
    await collector.until(() => collector.frames.length >= 5);
  }, 30000);

  afterAll(() => {
    collector?.client.close();
    server?.kill();
  });

  it("receives schema-valid frames at the control tick cadence", () => {
    const [a, b] = [collector.frames[0]!, collector.frames[1]!];
    expect(b.timestamp - a.timestamp).toBeCloseTo(CONTROL_TICK_S, 5);
    const vm = applyFrame(initialViewModel(), a);
    expect(vm.connection).toBe("connected");
  });

  it("round trip: command reflected within 3 control ticks", async () => {
    const sentAt = collector.frames[collector.frames.length - 1]!.timestamp;
    expect(collector.client.send(gripCommand(1.0))).toBe(true);
    await collector.until(() =>
      collector.frames.some((f) => f.timestamp > sentAt && f.v_set === 45.0));
    const applied = collector.frames.find(
      (f) => f.timestamp > sentAt && f.v_set === 45.0)!;
    expect(applied.timestamp - sentAt).toBeLessThanOrEqual(3 * CONTROL_TICK_S + 1e-9);
  }, 15000);

  it("class-2 fault locks out cruise over the wire", async () => {
    collector.client.send(faultCommand(3));
    await collector.until(() =>
      collector.frames.some((f) => f.failsafe_class === 2 && !f.cruise_allowed));
    const faulted = collector.frames[collector.frames.length - 1]!;
    const vm = applyFrame(initialViewModel(), faulted);
    // inert button path: no command is even constructed
    expect(cruiseCommand("SET", vm.cruise.controlsEnabled)).toBeNull();
    // and the simulator rejects a direct attempt
    collector.client.send({ cruise: "SET" });
    await collector.until(() => collector.errors.includes("CRUISE_UNAVAILABLE"));
    collector.client.send(faultCommand(3, true));
    await collector.until(() =>
      collector.frames[collector.frames.length - 1]!.failsafe_class === 0);
  }, 15000);
});
