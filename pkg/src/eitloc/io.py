"""
Run configuration and file emission.

Config files are YAML.  Every key is optional; see README for the schema and
the defaults table.  Output files are written to a temporary sibling and
renamed into place, so a file is either complete or absent.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Union

import yaml

from . import __version__
from .atomic import AtomicParams
from .beams import DEFAULT_PEAK_RABI, DEFAULT_WAIST, SuperGaussianBeam
from .errors import ParseError, ValidationError
from .grid import FieldMap, Grid2D
from .metrics import ComparisonRow
from .response import DEFAULT_EPSILON_ACTIVE, NormalizedSignal, SensingChannel
from .scenarios import DEFAULT_ORDERS, ScanResult, ScenarioConfig, ScenarioKind

OUTPUT_DIR_ENV = "EITLOC_OUTPUT_DIR"
FORMATS = ("csv", "json")
UNDEFINED = "nan"

REPORT_COLUMNS = (
    "P", "max_grad_abs", "max_grad_eit", "gradient_ratio",
    "fwhm_abs", "fwhm_eit", "fwhm_ratio", "notes",
)

_TOP_KEYS = {
    "scenario", "abs_detuning", "eit_detuning", "orders", "gamma", "epsilon_active",
    "atomic", "beam_x", "beam_y", "grid", "output_dir", "formats", "scan",
}
_ATOMIC_KEYS = {"gamma14", "gamma24", "gamma34", "probe_rabi", "prefactor"}
_BEAM_KEYS = {"peak_rabi", "waist"}
_GRID_KEYS = {"x_min", "x_max", "y_min", "y_max", "nx", "ny"}
_SCAN_KEYS = {"channel", "min", "max", "steps", "order"}


@dataclass(frozen=True)
class ScanSpec:
    channel: SensingChannel = SensingChannel.DISPERSION
    range_min: float = -0.1
    range_max: float = 0.1
    steps: int = 21
    order: Optional[int] = None


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    output_dir: Path = Path("out")
    formats: tuple[str, ...] = FORMATS
    scan: Optional[ScanSpec] = None


@dataclass
class Report:
    metadata: dict
    rows: list[ComparisonRow]
    notes: list[str] = field(default_factory=list)


def make_report(config: ScenarioConfig, rows: list[ComparisonRow], notes=()) -> Report:
    metadata = {
        "tool": "eitloc",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": config.as_dict(),
    }
    rows = sorted(rows, key=lambda r: r.order)
    all_notes = list(notes) + [f"P={r.order}: {n}" for r in rows for n in r.notes]
    return Report(metadata, rows, all_notes)


# ---------------------------------------------------------------- config

def _check_keys(section: str, data: dict, allowed: set) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        where = f"{section}." if section else ""
        raise ValidationError(f"{where}{unknown[0]}: unknown key")


def _section(data: dict, name: str, allowed: set) -> dict:
    value = data.get(name) or {}
    if not isinstance(value, dict):
        raise ValidationError(f"{name}: expected a mapping")
    _check_keys(name, value, allowed)
    return value


def _number(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ValidationError(f"{name}: must be finite")
    return float(value)


def _integer(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name}: expected an integer, got {value!r}")
    return value


def _build(name: str, factory, **kwargs):
    # Re-label constructor errors with the config path of the section.
    try:
        return factory(**kwargs)
    except ValidationError as exc:
        raise ValidationError(f"{name}.{exc}") from None


def config_from_dict(data: Optional[dict]) -> RunConfig:
    data = data or {}
    if not isinstance(data, dict):
        raise ValidationError("config: top level must be a mapping")
    _check_keys("", data, _TOP_KEYS)

    kind = ScenarioKind.parse(str(data.get("scenario", "same")))

    orders = data.get("orders", list(DEFAULT_ORDERS))
    if not isinstance(orders, list):
        raise ValidationError("orders: expected a list of integers")
    for p in orders:
        if isinstance(p, bool) or not isinstance(p, int) or p < 1:
            raise ValidationError(f"orders: each order must be an integer >= 1 (P >= 1), got {p!r}")

    atomic_raw = _section(data, "atomic", _ATOMIC_KEYS)
    atomic = _build("atomic", AtomicParams,
                    **{k: _number(v, f"atomic.{k}") for k, v in atomic_raw.items()})

    beams = {}
    for name, axis in (("beam_x", "x"), ("beam_y", "y")):
        raw = _section(data, name, _BEAM_KEYS)
        beams[name] = _build(
            name, SuperGaussianBeam,
            peak_rabi=_number(raw.get("peak_rabi", DEFAULT_PEAK_RABI), f"{name}.peak_rabi"),
            waist=_number(raw.get("waist", DEFAULT_WAIST), f"{name}.waist"),
            axis=axis,
        )

    grid_raw = _section(data, "grid", _GRID_KEYS)
    grid_kwargs = {}
    for k, v in grid_raw.items():
        grid_kwargs[k] = _integer(v, f"grid.{k}") if k in ("nx", "ny") else _number(v, f"grid.{k}")
    grid = _build("grid", Grid2D, **grid_kwargs)

    overrides = {}
    for key in ("abs_detuning", "eit_detuning"):
        if key in data:
            overrides[key] = _number(data[key], key)
    scenario = ScenarioConfig.for_kind(
        kind,
        orders=tuple(orders),
        atomic=atomic,
        gamma=_number(data.get("gamma", 1.0), "gamma"),
        beam_x=beams["beam_x"],
        beam_y=beams["beam_y"],
        grid=grid,
        epsilon_active=_number(data.get("epsilon_active", DEFAULT_EPSILON_ACTIVE), "epsilon_active"),
        **overrides,
    )

    formats = data.get("formats", list(FORMATS))
    if isinstance(formats, str):
        formats = [formats]
    if not isinstance(formats, list) or not formats:
        raise ValidationError("formats: expected a non-empty list drawn from csv, json")
    for f in formats:
        if f not in FORMATS:
            raise ValidationError(f"formats: unsupported format {f!r}")

    output_dir = os.environ.get(OUTPUT_DIR_ENV) or data.get("output_dir", "out")
    if not isinstance(output_dir, str) or not output_dir:
        raise ValidationError("output_dir: expected a path string")

    scan = None
    if data.get("scan") is not None:
        raw = _section(data, "scan", _SCAN_KEYS)
        scan = ScanSpec(
            channel=SensingChannel.parse(str(raw.get("channel", "eit"))),
            range_min=_number(raw.get("min", -0.1), "scan.min"),
            range_max=_number(raw.get("max", 0.1), "scan.max"),
            steps=_integer(raw.get("steps", 21), "scan.steps"),
            order=_integer(raw["order"], "scan.order") if "order" in raw else None,
        )
        if scan.steps < 3:
            raise ValidationError("scan.steps: must be >= 3")
        if not scan.range_min < scan.range_max:
            raise ValidationError("scan.min: must be < scan.max")

    return RunConfig(scenario, Path(output_dir), tuple(dict.fromkeys(formats)), scan)


def load_config(path: Union[str, Path, None], overrides: Optional[dict] = None) -> RunConfig:
    """Parse and validate a YAML config; ``path=None`` means an empty document.

    ``overrides`` replace top-level keys before validation.
    """
    data = None
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ParseError(f"{path}: {exc}") from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be a mapping")
    data.update(overrides or {})
    return config_from_dict(data)


# ---------------------------------------------------------------- emission

def _fmt(value) -> str:
    if value is None:
        return UNDEFINED
    return f"{float(value):.9g}"


def _json_num(value):
    return UNDEFINED if value is None else float(f"{float(value):.9g}")


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _format_from(path: Path, fmt: Optional[str]) -> str:
    fmt = fmt or (path.suffix.lstrip(".").lower() or "csv")
    if fmt not in FORMATS:
        raise ValidationError(f"format: unsupported {fmt!r}")
    return fmt


def emit_map(m: Union[FieldMap, NormalizedSignal], path, fmt: Optional[str] = None) -> Path:
    """Write a map as csv (x-fastest rows) or json (grid + flat row-major values)."""
    path = Path(path)
    fmt = _format_from(path, fmt)
    signal = m if isinstance(m, NormalizedSignal) else None
    fmap = signal.map if signal else m
    grid = fmap.grid
    values = fmap.values

    if fmt == "json":
        doc = {"grid": grid.as_dict(), "order": "row-major, y outer, x inner"}
        if signal is not None:
            doc["active"] = signal.active
            doc["raw_peak"] = float(f"{signal.raw_peak:.9g}")
        if fmap.is_complex:
            doc["re"] = [float(f"{v:.9g}") for v in values.real.ravel()]
            doc["im"] = [float(f"{v:.9g}") for v in values.imag.ravel()]
        else:
            doc["values"] = [float(f"{v:.9g}") for v in values.ravel()]
        write_atomic(path, json.dumps(doc, indent=1) + "\n")
        return path

    buf = io.StringIO()
    if signal is not None:
        state = "active" if signal.active else "inactive"
        buf.write(f"# channel={state} raw_peak={signal.raw_peak:.9g}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "y", "re", "im"] if fmap.is_complex else ["x", "y", "value"])
    xs, ys = grid.x, grid.y
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            v = values[j, i]
            if fmap.is_complex:
                writer.writerow([_fmt(x), _fmt(y), _fmt(v.real), _fmt(v.imag)])
            else:
                writer.writerow([_fmt(x), _fmt(y), _fmt(v)])
    write_atomic(path, buf.getvalue())
    return path


def read_map_csv(path) -> tuple[list[float], list[float], list]:
    """Inverse of the csv branch of :func:`emit_map`: (xs, ys, values)."""
    xs, ys, vals = [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        rows = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(rows)
        for row in rows:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
            if len(header) == 4:
                vals.append(complex(float(row[2]), float(row[3])))
            else:
                vals.append(float(row[2]))
    return xs, ys, vals


def _row_cells(row: ComparisonRow) -> list:
    return [
        int(row.order),
        row.abs_result.max_gradient,
        row.eit_result.max_gradient,
        row.gradient_ratio,
        row.abs_result.fwhm,
        row.eit_result.fwhm,
        row.fwhm_ratio,
    ]


def emit_report(report: Report, path, fmt: Optional[str] = None) -> Path:
    path = Path(path)
    fmt = _format_from(path, fmt)
    if fmt == "json":
        rows = []
        for row in report.rows:
            cells = _row_cells(row)
            rec = {"P": cells[0]}
            rec.update({k: _json_num(v) for k, v in zip(REPORT_COLUMNS[1:7], cells[1:])})
            rec["notes"] = "; ".join(row.notes)
            rows.append(rec)
        doc = {"metadata": report.metadata, "rows": rows, "notes": report.notes}
        write_atomic(path, json.dumps(doc, indent=1) + "\n")
        return path

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in report.rows:
        cells = _row_cells(row)
        writer.writerow([cells[0]] + [_fmt(v) for v in cells[1:]] + ["; ".join(row.notes)])
    write_atomic(path, buf.getvalue())
    return path


def emit_scan(scan: ScanResult, path, fmt: Optional[str] = None) -> Path:
    path = Path(path)
    fmt = _format_from(path, fmt)
    if fmt == "json":
        doc = {
            "channel": scan.channel.value,
            "order": scan.order,
            "best_detuning": _json_num(scan.best_detuning),
            "detunings": [_json_num(d) for d in scan.detunings],
            "max_gradient": [_json_num(v) for v in scan.metric_values],
        }
        write_atomic(path, json.dumps(doc, indent=1) + "\n")
        return path
    buf = io.StringIO()
    buf.write(f"# channel={scan.channel.value} order={scan.order} "
              f"best_detuning={_fmt(scan.best_detuning)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["detuning", "max_gradient", "active"])
    for d, v in zip(scan.detunings, scan.metric_values):
        writer.writerow([_fmt(d), _fmt(v), "true" if v is not None else "false"])
    write_atomic(path, buf.getvalue())
    return path
