"""Measurement-record CSV logging with reproducible formatting.

Fixed 6-decimal numeric formatting and RFC-4180-style quoting so that
reruns of the same scenario produce byte-identical files.
"""
from __future__ import annotations

import csv
import io
from dataclasses import asdict

from .runner import FIELDS_WITH_UNITS, MeasurementRecord

HEADER = [f"{name} [{unit}]" for name, unit in FIELDS_WITH_UNITS]
_NUMERIC = {name for name, _ in FIELDS_WITH_UNITS} - {"mode", "cruise_state", "failsafe_class"}


def _format(name: str, value) -> str:
    if name == "failsafe_class":
        return str(int(value))
    if name in _NUMERIC:
        return f"{value:.6f}"
    return str(value)


def records_to_csv(records, metadata: str | None = None) -> str:
    """Render records as CSV text; optional single metadata comment line."""
    out = io.StringIO()
    if metadata is not None:
        out.write(f"# {metadata}\r\n")
    writer = csv.writer(out, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(HEADER)
    for rec in records:
        row = asdict(rec)
        writer.writerow([_format(name, row[name]) for name, _ in FIELDS_WITH_UNITS])
    return out.getvalue()


def write_csv(records, path, metadata: str | None = None) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(records_to_csv(records, metadata))
    except OSError as exc:
        raise OSError(f"cannot write measurement log {path}: {exc}") from exc


def read_csv(path):
    """Load a measurement log back into MeasurementRecord objects."""
    records = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            lines = [ln for ln in fh if not ln.startswith("#")]
    except OSError as exc:
        raise OSError(f"cannot read measurement log {path}: {exc}") from exc
    reader = csv.reader(lines)
    header = next(reader, None)
    if header != HEADER:
        raise ValueError(f"{path}: unexpected CSV header")
    for row in reader:
        kwargs = {}
        for (name, _unit), cell in zip(FIELDS_WITH_UNITS, row):
            if name in ("mode", "cruise_state"):
                kwargs[name] = cell
            elif name == "failsafe_class":
                kwargs[name] = int(cell)
            else:
                kwargs[name] = float(cell)
        records.append(MeasurementRecord(**kwargs))
    return records
