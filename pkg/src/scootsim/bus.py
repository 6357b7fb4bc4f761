"""Virtual CAN bus: signal catalog and frame codec.

Frames carry scaled little-endian unsigned integers, an 8-bit XOR
checksum over the payload and a 4-bit rolling counter per sender. The
same catalog drives encoding, decoding and the CSV logger; it is
exported to docs/bus_catalog.json.
"""
from __future__ import annotations

from dataclasses import dataclass


class ChecksumError(ValueError):
    """Payload does not match the frame checksum."""


class CounterSkipError(ValueError):
    """Rolling counter jumped: one or more frames were lost."""


class SignalRangeError(ValueError):
    """Signal value outside its declared physical range."""


@dataclass(frozen=True)
class SignalSpec:
    name: str
    scale: float        # physical = raw * scale + offset
    offset: float
    bits: int           # 8, 16 or 32, little-endian unsigned
    minimum: float
    maximum: float
    unit: str

    def encode(self, value: float) -> int:
        if not self.minimum <= value <= self.maximum:
            raise SignalRangeError(
                f"{self.name}={value} outside [{self.minimum}, {self.maximum}]")
        raw = round((value - self.offset) / self.scale)
        return max(0, min(raw, (1 << self.bits) - 1))

    def decode(self, raw: int) -> float:
        return raw * self.scale + self.offset


@dataclass(frozen=True)
class FrameSpec:
    identifier: int     # 11-bit
    name: str
    signals: tuple

    @property
    def payload_bytes(self) -> int:
        return sum(s.bits for s in self.signals) // 8


def _u(name, scale, bits, lo, hi, unit, offset=0.0):
    return SignalSpec(name, scale, offset, bits, lo, hi, unit)


#: Machine-readable signal catalog shared by codec, logger and docs.
CATALOG = {
    spec.name: spec for spec in (
        FrameSpec(0x100, "velocity", (
            _u("v_set", 0.01, 16, 0.0, 80.0, "km/h"),
            _u("v_meas", 0.01, 16, 0.0, 80.0, "km/h"),
            _u("v_true", 0.01, 16, 0.0, 80.0, "km/h"),
        )),
        FrameSpec(0x200, "throttle", (
            _u("tva_cmd", 0.01, 16, 0.0, 100.0, "%"),
            _u("tva_actual", 0.01, 16, 0.0, 100.0, "%"),
            _u("ignition_deg", 0.01, 16, -45.0, 45.0, "deg", offset=-45.0),
        )),
        FrameSpec(0x300, "powertrain", (
            _u("injection_rate", 1e-4, 16, 0.0, 6.0, "ml/s"),
            _u("fuel_total", 0.1, 32, 0.0, 400000.0, "ml"),
            _u("engine_rpm", 1.0, 16, 0.0, 12000.0, "rpm"),
        )),
        FrameSpec(0x400, "status", (
            _u("mode", 1.0, 8, 0.0, 1.0, "-"),
            _u("failsafe_class", 1.0, 8, 0.0, 4.0, "-"),
            _u("cruise_engaged", 1.0, 8, 0.0, 1.0, "-"),
            _u("error_mask", 1.0, 8, 0.0, 63.0, "bitmask"),
        )),
    )
}

FRAMES_BY_ID = {spec.identifier: spec for spec in CATALOG.values()}


@dataclass(frozen=True)
class BusFrame:
    identifier: int
    payload: bytes
    timestamp: float
    counter: int      # 4-bit rolling, per sender
    checksum: int     # XOR over payload bytes

    def __post_init__(self):
        if not 0 <= self.identifier < 2 ** 11:
            raise ValueError("identifier must fit in 11 bits")
        if len(self.payload) > 8:
            raise ValueError("payload limited to 8 bytes")


def xor_checksum(payload: bytes) -> int:
    c = 0
    for b in payload:
        c ^= b
    return c


def catalog_as_table() -> list[dict]:
    """Catalog rows for the published bus documentation."""
    rows = []
    for frame in CATALOG.values():
        for sig in frame.signals:
            rows.append({
                "frame": frame.name,
                "identifier": f"0x{frame.identifier:03X}",
                "signal": sig.name,
                "scale": sig.scale,
                "offset": sig.offset,
                "bits": sig.bits,
                "range": [sig.minimum, sig.maximum],
                "unit": sig.unit,
            })
    return rows


class BusCodec:
    """Stateful encoder/decoder tracking rolling counters per frame."""

    def __init__(self):
        self._tx = {}
        self._rx = {}

    def encode(self, frame_name: str, signals: dict, timestamp: float) -> BusFrame:
        spec = CATALOG[frame_name]
        payload = bytearray()
        for sig in spec.signals:
            raw = sig.encode(signals[sig.name])
            payload += raw.to_bytes(sig.bits // 8, "little")
        counter = self._tx.get(spec.identifier, -1)
        counter = (counter + 1) % 16
        self._tx[spec.identifier] = counter
        payload = bytes(payload)
        return BusFrame(spec.identifier, payload, timestamp, counter,
                        xor_checksum(payload))

    def decode(self, frame: BusFrame) -> tuple[str, dict]:
        spec = FRAMES_BY_ID[frame.identifier]
        if xor_checksum(frame.payload) != frame.checksum:
            raise ChecksumError(f"frame 0x{frame.identifier:03X} checksum mismatch")
        last = self._rx.get(frame.identifier)
        if last is not None and (last + 1) % 16 != frame.counter:
            self._rx[frame.identifier] = frame.counter
            raise CounterSkipError(
                f"frame 0x{frame.identifier:03X} counter {last} -> {frame.counter}")
        self._rx[frame.identifier] = frame.counter
        signals = {}
        pos = 0
        for sig in spec.signals:
            n = sig.bits // 8
            raw = int.from_bytes(frame.payload[pos:pos + n], "little")
            signals[sig.name] = sig.decode(raw)
            pos += n
        return spec.name, signals
