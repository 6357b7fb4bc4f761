/**
 * Terminal dashboard demo.
 *
 *   scootsim run s1 --mode vc --serve 8700      # in the Python package
 *   npm run dashboard -- 127.0.0.1 8700
 *
 * Keys: hold A to accelerate (0.5 s twist-grip ramp), 0-9 grip presets,
 * C cruise set, V resume, X cancel, +/- adjust, M mode toggle,
 * R recording toggle, F/G inject/clear a sensing fault, Q quit.
 */
import { DashboardClient } from "./client.js";
import { GripRamp, cruiseCommand, faultCommand, gripCommand,
         modeToggleCommand, recordCommand } from "./input.js";
import { renderDashboard } from "./render.js";
import { applyClock, applyConnection, applyFrame, initialViewModel } from "./viewModel.js";

const host = process.argv[2] ?? "127.0.0.1";
const port = Number(process.argv[3] ?? "8700");

let vm = initialViewModel();
let lastFrameAt = Date.now();
let recording = true;
const ramp = new GripRamp();
let accelerateHeld = false;

const client = new DashboardClient(host, port, {
  onMessage: (message) => {
    if (message.kind === "frame") {
      vm = applyFrame(vm, message.frame);
      recording = message.frame.recording;
      lastFrameAt = Date.now();
    } else if (message.kind === "serverError") {
      process.stderr.write(`server: ${message.message}\n`);
    }
  },
  onConnect: () => { vm = applyConnection(vm, "connected"); },
  onDisconnect: () => { vm = applyConnection(vm, "disconnected"); },
});
client.connect();

// The accelerate key has no key-up event in a plain terminal: treat each
// keypress as holding for one repeat interval.
let heldUntil = 0;

process.stdin.setRawMode?.(true);
process.stdin.resume();
process.stdin.setEncoding("utf8");
process.stdin.on("data", (key: string) => {
  const now = Date.now();
  if (key === "q" || key === "\u0003") {
    client.close();
    process.exit(0);
  } else if (key === "a") {
    heldUntil = now + 150;
  } else if (key >= "0" && key <= "9") {
    client.send(gripCommand(Number(key) / 9));
  } else if (key === "c") {
    const cmd = cruiseCommand("SET", vm.cruise.controlsEnabled);
    if (cmd) client.send(cmd);
  } else if (key === "v") {
    const cmd = cruiseCommand("RESUME", vm.cruise.controlsEnabled);
    if (cmd) client.send(cmd);
  } else if (key === "x") {
    const cmd = cruiseCommand("CANCEL", vm.cruise.controlsEnabled);
    if (cmd) client.send(cmd);
  } else if (key === "+") {
    const cmd = cruiseCommand("ADJUST_UP", vm.cruise.controlsEnabled);
    if (cmd) client.send(cmd);
  } else if (key === "-") {
    const cmd = cruiseCommand("ADJUST_DOWN", vm.cruise.controlsEnabled);
    if (cmd) client.send(cmd);
  } else if (key === "m") {
    client.send(modeToggleCommand(vm.modeIndicator));
  } else if (key === "r") {
    client.send(recordCommand(!recording));
  } else if (key === "f") {
    client.send(faultCommand(3));
  } else if (key === "g") {
    client.send(faultCommand(3, true));
  }
});

setInterval(() => {
  const now = Date.now();
  accelerateHeld = now < heldUntil;
  const before = ramp.grip;
  const grip = ramp.update(now, accelerateHeld);
  if (Math.abs(grip - before) > 1e-3) {
    client.send(gripCommand(grip));
  }
  vm = applyClock(vm, now - lastFrameAt);
  process.stdout.write("\x1b[2J\x1b[H" + renderDashboard(vm) + "\n");
}, 100);
