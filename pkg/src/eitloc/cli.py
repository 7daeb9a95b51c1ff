"""Command-line entry point: ``eitloc {map,compare,scan,calibrate}``.

Exit status: 0 on success, 1 on usage or validation errors, 2 on I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .beams import control_field_maps
from .errors import EitlocError, ValidationError
from .io import (
    RunConfig,
    emit_map,
    emit_report,
    emit_scan,
    load_config,
    make_report,
    write_atomic,
)
from .response import SensingChannel, susceptibility_map
from .scenarios import (
    CALIBRATION_CANDIDATES,
    REFERENCE_SAME_DETUNING,
    ScenarioKind,
    calibration_errors,
    channel_map,
    detuning_scan,
    reference_rows,
    run_scenario,
)

log = logging.getLogger("eitloc")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eitloc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("map", help="write one susceptibility or channel map")
    p.add_argument("--config", type=Path)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--detuning", type=float, default=0.5, help="probe detuning in gamma")
    p.add_argument("--channel", choices=["abs", "eit", "chi"], default="eit")
    p.add_argument("--out", type=Path, help="output file; .json selects json, else csv")

    p = sub.add_parser("compare", help="run one comparison protocol to a report")
    p.add_argument("--config", type=Path)
    p.add_argument("--scenario", choices=[k.value for k in ScenarioKind])
    p.add_argument("--out-dir", type=Path)

    p = sub.add_parser("scan", help="max gradient of one channel over a detuning range")
    p.add_argument("--config", type=Path)
    p.add_argument("--channel", choices=["abs", "eit"])
    p.add_argument("--min", type=float, dest="range_min")
    p.add_argument("--max", type=float, dest="range_max")
    p.add_argument("--steps", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--out", type=Path)

    p = sub.add_parser("calibrate", help="pick the waist that best matches the same-detuning table")
    p.add_argument("--config", type=Path)
    p.add_argument("--candidates", type=float, nargs="+", default=list(CALIBRATION_CANDIDATES))
    p.add_argument("--out", type=Path, help="optional csv of per-candidate errors")
    return parser


def _config(args, **overrides) -> RunConfig:
    return load_config(args.config, overrides)


def _cmd_map(args) -> int:
    run = _config(args)
    cfg = run.scenario
    if args.order < 1:
        raise ValidationError("order: must be >= 1")
    out = args.out or run.output_dir / f"map_{args.channel}_P{args.order}_d{args.detuning:g}.csv"
    if args.channel == "chi":
        o1, o2 = control_field_maps(
            cfg.beam_x.with_order(args.order), cfg.beam_y.with_order(args.order), cfg.grid
        )
        emit_map(susceptibility_map(cfg.atomic, cfg.gamma, args.detuning, o1, o2), out)
    else:
        signal = channel_map(cfg, args.order, SensingChannel.parse(args.channel), args.detuning)
        if not signal.active:
            log.warning("%s channel inactive at detuning %g (raw peak %.3g)",
                        args.channel, args.detuning, signal.raw_peak)
        emit_map(signal, out)
    print(out)
    return 0


def _cmd_compare(args) -> int:
    run = _config(args, **({"scenario": args.scenario} if args.scenario else {}))
    cfg = run.scenario
    out_dir = args.out_dir or run.output_dir
    notes = []
    if not cfg.atomic.weak_probe_valid([cfg.beam_x.peak_rabi, cfg.beam_y.peak_rabi]):
        notes.append("weak-probe regime left: probe_rabi > 0.1 x min control peak")
    report = make_report(cfg, run_scenario(cfg), notes)
    for fmt in run.formats:
        path = emit_report(report, out_dir / f"report_{cfg.kind.value}.{fmt}", fmt)
        print(path)
    return 0


def _cmd_scan(args) -> int:
    run = _config(args)
    scan_cfg = run.scan
    channel = SensingChannel.parse(args.channel or (scan_cfg.channel.value if scan_cfg else "eit"))
    lo = args.range_min if args.range_min is not None else (scan_cfg.range_min if scan_cfg else -0.1)
    hi = args.range_max if args.range_max is not None else (scan_cfg.range_max if scan_cfg else 0.1)
    steps = args.steps if args.steps is not None else (scan_cfg.steps if scan_cfg else 21)
    order = args.order if args.order is not None else (scan_cfg.order if scan_cfg else None)
    result = detuning_scan(run.scenario, channel, lo, hi, steps, order=order)
    out = args.out or run.output_dir / f"scan_{channel.value}.csv"
    emit_scan(result, out)
    print(out)
    return 0


def _cmd_calibrate(args) -> int:
    run = _config(args)
    table = calibration_errors(reference_rows(REFERENCE_SAME_DETUNING), args.candidates, run.scenario)
    best = min(table, key=lambda t: t[1])
    lines = ["waist,sq_rel_error,ratio_P1,ratio_P2,ratio_P3,ratio_P10"]
    for waist, err, ratios in table:
        cells = ["nan" if r is None else f"{r:.6g}" for r in ratios]
        lines.append(f"{waist:g},{err:.6g}," + ",".join(cells))
    text = "\n".join(lines) + "\n"
    if args.out:
        write_atomic(args.out, text)
    sys.stdout.write(text)
    print(f"selected waist: {best[0]:g}")
    return 0


_COMMANDS = {
    "map": _cmd_map,
    "compare": _cmd_compare,
    "scan": _cmd_scan,
    "calibrate": _cmd_calibrate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except OSError as exc:
        print(f"eitloc: I/O error: {exc}", file=sys.stderr)
        return 2
    except EitlocError as exc:
        print(f"eitloc: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
