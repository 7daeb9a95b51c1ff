import csv
import json
from pathlib import Path

import numpy as np
import pytest

from eitloc.errors import ParseError, ValidationError
from eitloc.grid import FieldMap, Grid2D
from eitloc.io import (
    OUTPUT_DIR_ENV,
    REPORT_COLUMNS,
    config_from_dict,
    emit_map,
    emit_report,
    emit_scan,
    load_config,
    make_report,
    read_map_csv,
    write_atomic,
)
from eitloc.response import NormalizedSignal, SensingChannel
from eitloc.scenarios import ScenarioConfig, ScenarioKind, detuning_scan, run_scenario

TINY = Grid2D(nx=3, ny=3)
COARSE = Grid2D(nx=33, ny=33)


def data_rows(path):
    with open(path, newline="") as fh:
        return [r for r in csv.reader(fh) if not r[0].startswith("#")]


class TestConfig:
    def test_empty_gives_defaults(self):
        run = config_from_dict({})
        assert run.scenario == ScenarioConfig()
        assert run.formats == ("csv", "json")
        assert run.output_dir == Path("out")
        assert run.scan is None

    def test_load_none(self):
        assert load_config(None) == config_from_dict({})

    def test_optimal_defaults(self):
        s = config_from_dict({"scenario": "optimal"}).scenario
        assert s.kind is ScenarioKind.OPTIMAL
        assert (s.abs_detuning, s.eit_detuning) == (0.0, 0.5)

    @pytest.mark.parametrize("orders", [[0], [1, -2], [1.5], ["2"], [True]])
    def test_bad_orders_named(self, orders):
        with pytest.raises(ValidationError, match="orders"):
            config_from_dict({"orders": orders})

    @pytest.mark.parametrize(
        "data,field",
        [
            ({"colour": 1}, "colour"),
            ({"grid": {"nz": 3}}, "grid.nz"),
            ({"beam_x": {"order": 2}}, "beam_x.order"),
            ({"grid": {"nx": 4}}, "grid.nx"),
            ({"beam_y": {"waist": -0.1}}, "beam_y.waist"),
            ({"atomic": {"gamma24": 0}}, "atomic.gamma24"),
            ({"gamma": "one"}, "gamma"),
            ({"formats": ["xml"]}, "formats"),
            ({"scan": {"steps": 2}}, "scan.steps"),
            ({"scenario": "same", "eit_detuning": 0.2}, "eit_detuning"),
        ],
    )
    def test_errors_name_the_field(self, data, field):
        with pytest.raises(ValidationError, match=field.replace(".", r"\.")):
            config_from_dict(data)

    def test_full_document(self, tmp_path):
        p = tmp_path / "c.yaml"
        p.write_text(
            "scenario: switched\norders: [2, 1]\ngrid: {nx: 33, ny: 35}\n"
            "beam_x: {waist: 0.2}\nformats: csv\nscan: {channel: abs, min: 0, max: 1, steps: 5}\n"
        )
        run = load_config(p)
        s = run.scenario
        assert s.kind is ScenarioKind.SWITCHED and s.orders == (2, 1)
        assert s.grid.shape == (35, 33)
        assert (s.beam_x.waist, s.beam_y.waist) == (0.2, 0.1)
        assert run.formats == ("csv",)
        assert run.scan.channel is SensingChannel.ABSORPTION and run.scan.steps == 5

    def test_overrides_replace_keys(self, tmp_path):
        p = tmp_path / "c.yaml"
        p.write_text("scenario: same\n")
        assert load_config(p, {"scenario": "optimal"}).scenario.kind is ScenarioKind.OPTIMAL

    @pytest.mark.parametrize("text", ["a: [1, 2\n", "- 1\n- 2\n"])
    def test_parse_errors(self, tmp_path, text):
        p = tmp_path / "c.yaml"
        p.write_text(text)
        with pytest.raises(ParseError):
            load_config(p)

    def test_env_overrides_output_dir(self, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, "/tmp/elsewhere")
        assert config_from_dict({"output_dir": "here"}).output_dir == Path("/tmp/elsewhere")


class TestEmitMap:
    def test_constant_real_map(self, tmp_path):
        path = emit_map(FieldMap(TINY, np.full(TINY.shape, 0.25)), tmp_path / "m.csv")
        rows = data_rows(path)
        assert rows[0] == ["x", "y", "value"]
        assert len(rows) == 10
        assert {r[2] for r in rows[1:]} == {"0.25"}
        # x varies fastest
        assert [r[0] for r in rows[1:4]] == ["-0.5", "0", "0.5"]
        assert {r[1] for r in rows[1:4]} == {"-0.5"}

    def test_complex_map_has_two_value_columns(self, tmp_path):
        path = emit_map(FieldMap(TINY, np.full(TINY.shape, 1 - 2j)), tmp_path / "c.csv")
        rows = data_rows(path)
        assert rows[0] == ["x", "y", "re", "im"]
        assert rows[1][2:] == ["1", "-2"]

    def test_inactive_comment(self, tmp_path):
        signal = NormalizedSignal(FieldMap(TINY, np.zeros(TINY.shape)), 0.0, False)
        path = emit_map(signal, tmp_path / "i.csv")
        assert path.read_text().splitlines()[0] == "# channel=inactive raw_peak=0"

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(7)
        values = rng.normal(size=(5, 7))
        grid = Grid2D(nx=7, ny=5)
        xs, ys, vals = read_map_csv(emit_map(FieldMap(grid, values), tmp_path / "r.csv"))
        assert np.allclose(np.reshape(vals, values.shape), values, rtol=1e-8, atol=0)
        assert np.allclose(np.reshape(xs, values.shape)[0], grid.x)
        assert np.allclose(np.reshape(ys, values.shape)[:, 0], grid.y)

    def test_byte_stable(self, tmp_path):
        m = FieldMap(COARSE, np.linspace(0, 1, COARSE.nx * COARSE.ny).reshape(COARSE.shape))
        a = emit_map(m, tmp_path / "a.csv").read_bytes()
        b = emit_map(m, tmp_path / "b.csv").read_bytes()
        assert a == b

    def test_json(self, tmp_path):
        doc = json.loads(emit_map(FieldMap(TINY, np.full(TINY.shape, 1j)), tmp_path / "m.json").read_text())
        assert doc["grid"]["nx"] == 3
        assert doc["re"] == [0.0] * 9 and doc["im"] == [1.0] * 9

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValidationError):
            emit_map(FieldMap(TINY, np.zeros(TINY.shape)), tmp_path / "m.xml")


class TestEmitReport:
    def report(self, kind, orders=(1, 2)):
        cfg = ScenarioConfig.for_kind(kind, grid=COARSE, orders=orders)
        return make_report(cfg, run_scenario(cfg))

    def test_columns_and_rows(self, tmp_path):
        rows = data_rows(emit_report(self.report("optimal"), tmp_path / "r.csv"))
        assert tuple(rows[0]) == REPORT_COLUMNS
        assert [r[0] for r in rows[1:]] == ["1", "2"]
        assert float(rows[1][3]) == pytest.approx(float(rows[1][2]) / float(rows[1][1]), rel=1e-8)

    def test_switched_writes_nan(self, tmp_path):
        rows = data_rows(emit_report(self.report("switched"), tmp_path / "r.csv"))
        for r in rows[1:]:
            assert r[2] == r[3] == r[6] == "nan"
            assert "inactive" in r[7]

    def test_empty_orders_header_only(self, tmp_path):
        rows = data_rows(emit_report(self.report("same", orders=()), tmp_path / "r.csv"))
        assert rows == [list(REPORT_COLUMNS)]

    def test_json_report(self, tmp_path):
        doc = json.loads(emit_report(self.report("switched"), tmp_path / "r.json").read_text())
        assert doc["metadata"]["tool"] == "eitloc"
        assert doc["metadata"]["config"]["scenario"] == "switched"
        assert doc["rows"][0]["max_grad_eit"] == "nan"
        assert isinstance(doc["rows"][0]["max_grad_abs"], float)

    def test_csv_deterministic(self, tmp_path):
        a = emit_report(self.report("same"), tmp_path / "a.csv").read_bytes()
        b = emit_report(self.report("same"), tmp_path / "b.csv").read_bytes()
        assert a == b


def test_emit_scan(tmp_path):
    cfg = ScenarioConfig(grid=COARSE)
    scan = detuning_scan(cfg, SensingChannel.DISPERSION, -0.1, 0.1, 21)
    rows = data_rows(emit_scan(scan, tmp_path / "s.csv"))
    assert rows[0] == ["detuning", "max_gradient", "active"]
    assert len(rows) == 22
    assert rows[11] == ["0", "nan", "false"]


def test_write_atomic_leaves_no_temp_files(tmp_path):
    target = tmp_path / "sub" / "f.txt"
    write_atomic(target, "one\n")
    write_atomic(target, "two\n")
    assert target.read_text() == "two\n"
    assert [p.name for p in target.parent.iterdir()] == ["f.txt"]
