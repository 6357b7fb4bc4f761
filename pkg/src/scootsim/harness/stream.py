"""Live telemetry stream and rider command sink.

Newline-delimited JSON over TCP: one state frame per control tick out,
command objects in ({"grip": 0..1}, {"cruise": "SET"|...},
{"mode": "ORIGINAL"|"VC"}, {"record": bool}, {"fault": id[, "clear"]}).
Commands apply on the next control tick; malformed commands get an
error reply and never crash the simulation. If the rider disconnects
the grip decays to zero within one second (dead-man rule) and the
simulation keeps running.
"""
from __future__ import annotations

import dataclasses
import json
import queue
import socketserver
import threading
import time

from ..control import CruiseCommand
from ..mecu import ErrorId
from ..powertrain import Mode
from .report import eco_score
from .runner import Simulation
from .scenario import ScenarioConfig

DEADMAN_DECAY_S = 1.0


@dataclasses.dataclass
class Commands:
    grip: float | None = None
    mode: Mode | None = None
    cruise: list = dataclasses.field(default_factory=list)
    record: bool | None = None


class StreamHub:
    """Bridges the single-threaded simulation loop and client sockets.

    The loop calls poll_commands/emit_frame on its control tick; socket
    threads only touch the two queues and the client registry.
    """

    def __init__(self, realtime: bool = True):
        self.realtime = realtime
        self.commands: queue.Queue = queue.Queue()
        self.clients: list = []
        self._lock = threading.Lock()
        self._faults: set = set()
        self._grip = 0.0
        self._deadman_started: float | None = None
        self._recording = True
        self._distance = 0.0
        self._last_v = 0.0
        self._last_emit = None
        self.stop = threading.Event()

    # -- socket side -------------------------------------------------
    def attach(self, wfile):
        with self._lock:
            self.clients.append(wfile)
            self._deadman_started = None

    def detach(self, wfile):
        with self._lock:
            if wfile in self.clients:
                self.clients.remove(wfile)
            if not self.clients:
                self._deadman_started = time.monotonic()

    def submit(self, line: str) -> str | None:
        """Parse one command line; returns an error message or None."""
        try:
            doc = json.loads(line)
            if not isinstance(doc, dict):
                raise ValueError("command must be a JSON object")
            cmd = Commands()
            for key, value in doc.items():
                if key == "grip":
                    grip = float(value)
                    if not 0.0 <= grip <= 1.0:
                        raise ValueError("grip outside [0, 1]")
                    cmd.grip = grip
                elif key == "mode":
                    cmd.mode = Mode[str(value)]
                elif key == "cruise":
                    cmd.cruise.append(CruiseCommand[str(value)])
                elif key == "record":
                    cmd.record = bool(value)
                elif key == "fault":
                    fid = ErrorId(int(value))
                    if doc.get("clear"):
                        self._faults.discard(fid)
                    else:
                        self._faults.add(fid)
                elif key == "clear":
                    pass
                else:
                    raise ValueError(f"unknown command key {key!r}")
        except (ValueError, KeyError, TypeError) as exc:
            return f"rejected command: {exc}"
        self.commands.put(cmd)
        return None

    # -- simulation side ---------------------------------------------
    def poll_commands(self, t: float) -> Commands:
        merged = Commands()
        while True:
            try:
                cmd = self.commands.get_nowait()
            except queue.Empty:
                break
            if cmd.grip is not None:
                merged.grip = cmd.grip
                self._grip = cmd.grip
            if cmd.mode is not None:
                merged.mode = cmd.mode
            if cmd.record is not None:
                self._recording = cmd.record
            merged.cruise.extend(cmd.cruise)
        with self._lock:
            dead_since = self._deadman_started
        if dead_since is not None and self._grip > 0.0:
            elapsed = time.monotonic() - dead_since
            decayed = max(0.0, self._grip - elapsed / DEADMAN_DECAY_S * self._grip)
            if not self.realtime:
                decayed = 0.0  # tests run faster than the wall clock
            merged.grip = decayed
            if decayed == 0.0:
                self._grip = 0.0
        return merged

    def injected_faults(self):
        return frozenset(self._faults)

    def report_error(self, message: str):
        self._broadcast(json.dumps({"error": message}))

    def emit_frame(self, rec, failsafe, cruise):
        dt = 0.02 if self._last_emit is None else max(rec.timestamp - self._last_emit, 0.0)
        self._last_emit = rec.timestamp
        self._distance += 0.5 * (self._last_v + rec.v_true) / 3.6 * dt
        self._last_v = rec.v_true
        frame = dataclasses.asdict(rec)
        frame["eco_score"] = eco_score(rec.fuel_total, self._distance)
        frame["recording"] = self._recording
        frame["cruise_target"] = cruise.target
        frame["cruise_allowed"] = failsafe.cruise_allowed
        frame["active_errors"] = sorted(int(e) for e in failsafe.active_errors)
        self._broadcast(json.dumps(frame))
        if self.realtime:
            time.sleep(0.02)
        if self.stop.is_set():
            raise StopSimulation()

    def _broadcast(self, text: str):
        with self._lock:
            dead = []
            for wfile in self.clients:
                try:
                    wfile.write((text + "\n").encode())
                    wfile.flush()
                except OSError:
                    dead.append(wfile)
            for wfile in dead:
                self.clients.remove(wfile)
            if dead and not self.clients:
                self._deadman_started = time.monotonic()


class StopSimulation(Exception):
    """Raised inside the loop to end a live session."""


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        hub: StreamHub = self.server.hub  # type: ignore[attr-defined]
        hub.attach(self.wfile)
        try:
            for raw in self.rfile:
                line = raw.decode(errors="replace").strip()
                if not line:
                    continue
                error = hub.submit(line)
                if error is not None:
                    try:
                        self.wfile.write((json.dumps({"error": error}) + "\n").encode())
                        self.wfile.flush()
                    except OSError:
                        break
        finally:
            hub.detach(self.wfile)


class _Server(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


class StreamSession:
    """A live simulation session serving frames on a TCP port."""

    def __init__(self, cfg: ScenarioConfig, mode: Mode, port: int = 0,
                 realtime: bool = True):
        self.hub = StreamHub(realtime=realtime)
        self.server = _Server(("127.0.0.1", port), _Handler)
        self.server.hub = self.hub  # type: ignore[attr-defined]
        self.port = self.server.server_address[1]
        self.sim = Simulation(cfg, mode, interactive=self.hub)
        self._server_thread = threading.Thread(
            target=self.server.serve_forever, daemon=True)
        self._sim_thread = threading.Thread(target=self._run, daemon=True)
        self.result = None

    def _run(self):
        try:
            self.result = self.sim.run()
        except StopSimulation:
            pass
        finally:
            self.server.shutdown()

    def start(self):
        self._server_thread.start()
        self._sim_thread.start()
        return self

    def close(self, timeout: float = 5.0):
        self.hub.stop.set()
        self._sim_thread.join(timeout)
        self.server.shutdown()
        self.server.server_close()

    def wait(self, timeout: float | None = None):
        self._sim_thread.join(timeout)
        return self.result
