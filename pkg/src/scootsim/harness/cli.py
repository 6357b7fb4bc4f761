"""Command-line interface.

    scootsim run <scenario> [--mode original|vc|both] [--out DIR]
                 [--serve PORT] [--params FILE] [--seed N]
    scootsim compare <original.csv> <vc.csv>
    scootsim calibrate [--out FILE] [--scale S]

<scenario> is a JSON config path or a builtin name (s1, s2, s3,
step_incremental, step_initial, fuel).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from ..powertrain import Mode
from . import calibrate as calibrate_mod
from . import csvlog, cycles, report, scenario
from .runner import Simulation
from .stream import StreamSession


def _load_scenario(spec: str) -> scenario.ScenarioConfig:
    if os.path.exists(spec):
        return scenario.load(spec)
    return cycles.builtin(spec)


def _apply_params_file(cfg: scenario.ScenarioConfig, path: str):
    with open(path, "r", encoding="utf-8") as fh:
        overrides = json.load(fh)
    problems: list = []
    updates = {}
    for key in ("vehicle", "powertrain", "controller", "encoder", "emulation"):
        if key in overrides:
            updates[key] = scenario._override(
                getattr(cfg, key), overrides[key], f"params.{key}", problems)
    if "power_anchors" in overrides:
        updates["power_anchors"] = tuple(tuple(a) for a in overrides["power_anchors"])
    if problems:
        raise scenario.ConfigInvalid(problems)
    return dataclasses.replace(cfg, **updates).validate()


def cmd_run(args) -> int:
    cfg = _load_scenario(args.scenario)
    if args.params:
        cfg = _apply_params_file(cfg, args.params)
    if args.mode != "config":
        cfg = dataclasses.replace(cfg, mode=args.mode.upper()).validate()

    if args.serve is not None:
        mode = Mode.VC if cfg.mode in ("BOTH", "VC") else Mode.ORIGINAL
        live = dataclasses.replace(cfg, duration=args.serve_duration)
        session = StreamSession(live, mode, port=args.serve).start()
        print(f"serving {cfg.name} ({mode.value}) on 127.0.0.1:{session.port}")
        try:
            session.wait()
        except KeyboardInterrupt:
            session.close()
        return 0

    os.makedirs(args.out, exist_ok=True)
    for mode in cfg.modes():
        result = Simulation(cfg, mode).run()
        path = os.path.join(args.out, f"{cfg.name}_{mode.value.lower()}.csv")
        metadata = f"scenario={cfg.name} mode={mode.value} seed={args.seed}"
        csvlog.write_csv(result.records, path, metadata=metadata)
        s = result.summary
        print(f"{cfg.name} [{mode.value}] -> {path}")
        print(f"  distance {s['distance_m'] / 1000.0:.3f} km, "
              f"fuel {s['fuel_total_ml']:.1f} ml, "
              f"consumption {s['consumption_l_per_100km']:.3f} l/100km")
    return 0


def cmd_compare(args) -> int:
    rec_a = csvlog.read_csv(args.original)
    rec_b = csvlog.read_csv(args.vc)
    rep = report.compare(rec_a, rec_b)
    doc = rep.as_dict()
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def cmd_calibrate(args) -> int:
    rep = calibrate_mod.calibrate(scale=args.scale)
    calibrate_mod.write_report(rep, args.out)
    print(f"calibration report written to {args.out}")
    print(json.dumps(rep, indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scootsim",
                                     description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write CSV logs")
    p_run.add_argument("scenario", help="config path or builtin name")
    p_run.add_argument("--mode", choices=["original", "vc", "both", "config"],
                       default="config", help="override the scenario mode")
    p_run.add_argument("--out", default=".", help="output directory for CSV logs")
    p_run.add_argument("--serve", type=int, default=None, metavar="PORT",
                       help="serve a live interactive session instead of batch run")
    p_run.add_argument("--serve-duration", type=float, default=3600.0)
    p_run.add_argument("--params", default=None,
                       help="JSON file with parameter overrides")
    p_run.add_argument("--seed", type=int, default=0,
                       help="recorded in log metadata (model is deterministic)")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="fuel comparison of two mode logs")
    p_cmp.add_argument("original")
    p_cmp.add_argument("vc")
    p_cmp.set_defaults(func=cmd_compare)

    p_cal = sub.add_parser("calibrate", help="fit fuel-model constants")
    p_cal.add_argument("--out", default="calibration_report.json")
    p_cal.add_argument("--scale", type=float, default=0.1,
                       help="fuel-cycle length as a fraction of 50.4 km")
    p_cal.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (scenario.ConfigInvalid, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
