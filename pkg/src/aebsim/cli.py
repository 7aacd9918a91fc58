"""Command-line front end: run, sweep, calibrate, validate.

Exit codes: 0 success, 2 configuration error, 3 output I/O error,
4 sweep-wide failure (every row failed), 5 calibration failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .calibrate import CalibrationError, calibrate_attack_profile
from .config import ConfigError, echo_config, load_config, parse_config
from .perception import ATTACK_PROFILES
from .scenario import (
    CONTROLLER_NAMES,
    PRESETS,
    ScenarioResult,
    SweepRow,
    TraceSample,
    controller_name,
    run_scenario,
    run_sweep,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_SWEEP_FAILED = 4
EXIT_CALIBRATION = 5

TRACE_HEADER = "t,s,v,b,detected_front,detected_side,confidence,est_distance"

SUMMARY_FIELDS = (
    "preset", "attack", "controller", "seed", "stopped", "stop_position",
    "overshoot", "margin", "brake_onset_t", "time_to_complete_stop",
    "distance_at_brake", "error",
)


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def write_trace_csv(path: Path, trace: Sequence[TraceSample]) -> None:
    """Write a trace in the canonical CSV layout (6-decimal floats)."""
    with open(path, "w", newline="") as fh:
        fh.write(TRACE_HEADER + "\n")
        writer = csv.writer(fh)
        for sample in trace:
            writer.writerow([
                f"{sample.t:.6f}", f"{sample.s:.6f}", f"{sample.v:.6f}",
                f"{sample.b:.6f}", int(sample.detected_front),
                int(sample.detected_side), f"{sample.confidence:.6f}",
                _fmt(sample.est_distance),
            ])


def read_trace_csv(path: Path) -> list[TraceSample]:
    """Read back a trace written by write_trace_csv."""
    samples = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != TRACE_HEADER.split(","):
            raise ValueError(f"unexpected trace header in {path}")
        for row in reader:
            samples.append(TraceSample(
                t=float(row["t"]), s=float(row["s"]), v=float(row["v"]),
                b=float(row["b"]),
                detected_front=bool(int(row["detected_front"])),
                detected_side=bool(int(row["detected_side"])),
                confidence=float(row["confidence"]),
                est_distance=float(row["est_distance"]) if row["est_distance"] else None,
            ))
    return samples


def _summary_record(row: SweepRow) -> dict[str, str]:
    config, result = row.config, row.result
    record = {
        "preset": config.preset_name,
        "attack": config.attack.name,
        "controller": controller_name(config.controller),
        "seed": str(config.seed),
        "error": row.error or "",
    }
    if result is not None:
        record.update({
            "stopped": str(int(result.stopped)),
            "stop_position": _fmt(result.stop_position),
            "overshoot": _fmt(result.overshoot),
            "margin": _fmt(result.margin),
            "brake_onset_t": _fmt(result.brake_onset_t),
            "time_to_complete_stop": _fmt(result.time_to_complete_stop),
            "distance_at_brake": _fmt(result.distance_at_brake),
        })
    else:
        record.update({key: "" for key in SUMMARY_FIELDS if key not in record})
    return record


def write_summary_csv(path: Path, rows: Sequence[SweepRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow(_summary_record(row))


def render_table(rows: Sequence[SweepRow]) -> str:
    """Aligned text table of per-row stop metrics."""
    header = ("Preset", "Attack", "Controller", "Stopped",
              "Time to complete stop (s)", "Distance to stop sign (m)",
              "Overshoot (m)", "Margin (m)")
    body = []
    for row in rows:
        if row.result is None:
            body.append((row.config.preset_name, row.config.attack.name,
                         controller_name(row.config.controller),
                         "error", row.error or "", "", "", ""))
            continue
        r = row.result
        body.append((
            row.config.preset_name, row.config.attack.name,
            controller_name(row.config.controller),
            "yes" if r.stopped else "no",
            _fmt(r.time_to_complete_stop), _fmt(r.distance_at_brake),
            _fmt(r.overshoot), _fmt(r.margin),
        ))
    widths = [max(len(str(cell)) for cell in column)
              for column in zip(header, *body)]
    lines = []
    for record in (header, *body):
        lines.append("  ".join(str(cell).ljust(w) for cell, w in zip(record, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _result_line(result: ScenarioResult) -> str:
    return (
        f"stopped={result.stopped} stop_position={result.stop_position:.3f} "
        f"overshoot={_fmt(result.overshoot) or 'n/a'} "
        f"margin={_fmt(result.margin) or 'n/a'} "
        f"time_to_stop={_fmt(result.time_to_complete_stop) or 'n/a'} "
        f"distance_at_brake={_fmt(result.distance_at_brake) or 'n/a'}"
    )


def _out_dir(args) -> Optional[Path]:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_run(args) -> int:
    config = load_config(args.config, preset=args.preset, attack=args.attack,
                         controller=args.controller, seed=args.seed)
    result = run_scenario(config)
    out = _out_dir(args)
    if out is not None:
        write_trace_csv(out / "trace.csv", result.trace)
        write_summary_csv(out / "summary.csv",
                          [SweepRow(config, result, None)])
        (out / "config_echo.ini").write_text(echo_config(config))
        print(f"wrote {out / 'trace.csv'}, {out / 'summary.csv'}, "
              f"{out / 'config_echo.ini'}")
    print(_result_line(result))
    return EXIT_OK


def _split_grid_axis(raw: Optional[str], default: str, all_values: Sequence[str]) -> list[str]:
    text = (raw or default).strip()
    if text.lower() == "all":
        return list(all_values)
    return [item.strip() for item in text.split(",") if item.strip()]


def cmd_sweep(args) -> int:
    presets = _split_grid_axis(args.preset, "all", [p.name for p in PRESETS.values()])
    attacks = _split_grid_axis(args.attack, "none", list(ATTACK_PROFILES))
    controllers = _split_grid_axis(args.controller, "constant", CONTROLLER_NAMES)

    rows: list[SweepRow] = []
    pending: list[tuple[int, object]] = []
    for preset in presets:
        for attack in attacks:
            for controller in controllers:
                try:
                    config = load_config(args.config, preset=preset, attack=attack,
                                         controller=controller, seed=args.seed)
                except ConfigError as exc:
                    if len(presets) * len(attacks) * len(controllers) == 1:
                        raise
                    fallback = replace(load_config(None), preset_name=preset)
                    rows.append(SweepRow(
                        fallback, None, f"{preset}/{attack}/{controller}: {exc}"
                    ))
                    continue
                rows.append(SweepRow(config, None, None))
                pending.append((len(rows) - 1, config))

    if pending:
        outcomes = run_sweep([config for _, config in pending], jobs=args.jobs)
        for (index, _), outcome in zip(pending, outcomes):
            rows[index] = outcome

    out = _out_dir(args)
    table = render_table(rows)
    if out is not None:
        write_summary_csv(out / "summary.csv", rows)
        (out / "table.txt").write_text(table)
        print(f"wrote {out / 'summary.csv'}, {out / 'table.txt'}")
    print(table, end="")

    failed = [row for row in rows if row.error]
    for row in failed:
        print(f"row failed: {row.error}", file=sys.stderr)
    if failed and len(failed) == len(rows):
        return EXIT_SWEEP_FAILED
    return EXIT_OK


def cmd_calibrate(args) -> int:
    config = load_config(args.config, preset=args.preset, attack=args.attack,
                         controller=args.controller or "constant", seed=args.seed)
    try:
        profile = calibrate_attack_profile(args.target, config, tolerance=args.tolerance)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    achieved = run_scenario(replace(config, attack=profile)).overshoot or 0.0
    fragment = "\n".join([
        "[scenario]",
        f"attack = {profile.name}",
        "",
        "[attack]",
        f"confidence_scale = {profile.confidence_scale!r}",
        f"range_scale = {profile.range_scale!r}",
        "",
    ])
    out = _out_dir(args)
    if out is not None:
        (out / "attack_profile.ini").write_text(fragment)
        print(f"wrote {out / 'attack_profile.ini'}")
    else:
        print(fragment, end="")
    print(f"calibrated range_scale={profile.range_scale:.6f} "
          f"achieved_overshoot={achieved:.3f} target={args.target:.3f}")
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.config is None:
        raise ConfigError("validate requires --config")
    parse_config(args.config)
    load_config(args.config, preset=args.preset, attack=args.attack,
                controller=args.controller, seed=args.seed)
    print(f"{args.config}: OK")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file (sections of key = value)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--seed", type=int, help="random seed for stochastic detection")
    parser.add_argument("--preset", help="placement preset name")
    parser.add_argument("--attack", help="degradation profile name")
    parser.add_argument("--controller", help="controller name")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aebsim",
        description="Closed-loop stop-sign braking simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario, write trace and summary")
    _add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a preset x attack x controller grid")
    _add_common(p_sweep)
    p_sweep.add_argument("--jobs", type=int, default=1,
                         help="parallel worker processes (default 1)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_cal = sub.add_parser("calibrate",
                           help="fit a profile's range_scale to a target overshoot")
    _add_common(p_cal)
    p_cal.add_argument("--target", type=float, required=True,
                       help="target overshoot in meters")
    p_cal.add_argument("--tolerance", type=float, default=0.5,
                       help="acceptable |achieved - target| in meters (default 0.5)")
    p_cal.set_defaults(func=cmd_calibrate)

    p_val = sub.add_parser("validate", help="parse and validate a config file")
    _add_common(p_val)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "calibrate" and args.attack is None:
        args.attack = "luv2"
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CalibrationError as exc:
        print(f"calibration error: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
