import csv

import pytest

from eitloc.cli import main

SMALL = "grid: {nx: 33, ny: 33}\norders: [1, 2]\nformats: [csv]\n"


@pytest.fixture
def cfg(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text(SMALL)
    return p


def rows(path):
    with open(path, newline="") as fh:
        return [r for r in csv.reader(fh) if not r[0].startswith("#")]


def test_compare_switched(cfg, tmp_path, capsys):
    assert main(["compare", "--config", str(cfg), "--scenario", "switched", "--out-dir", str(tmp_path)]) == 0
    report = tmp_path / "report_switched.csv"
    assert capsys.readouterr().out.strip() == str(report)
    body = rows(report)
    assert len(body) == 3
    assert all(r[2] == "nan" for r in body[1:])


def test_compare_weak_probe_note(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text(SMALL + "atomic: {probe_rabi: 1.0}\n")
    assert main(["compare", "--config", str(p), "--out-dir", str(tmp_path)]) == 0


def test_map_inactive_dispersion(cfg, tmp_path):
    out = tmp_path / "m.csv"
    assert main(["map", "--config", str(cfg), "--channel", "eit", "--detuning", "0", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# channel=inactive")
    assert len(lines) == 2 + 33 * 33


def test_map_chi(cfg, tmp_path):
    out = tmp_path / "chi.json"
    assert main(["map", "--config", str(cfg), "--channel", "chi", "--out", str(out)]) == 0
    assert out.exists()


def test_scan(cfg, tmp_path):
    out = tmp_path / "s.csv"
    assert main(["scan", "--config", str(cfg), "--min", "-0.1", "--max", "0.1", "--steps", "21", "--out", str(out)]) == 0
    assert len(rows(out)) == 22


def test_calibrate(cfg, tmp_path, capsys):
    out = tmp_path / "cal.csv"
    assert main(["calibrate", "--config", str(cfg), "--candidates", "0.1", "0.2", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "selected waist:" in text
    assert len(out.read_text().splitlines()) == 3


@pytest.mark.parametrize("argv", [["frobnicate"], ["compare", "--bogus"], [], ["map", "--order", "x"]])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1
    assert "usage:" in capsys.readouterr().err


def test_validation_error_exit_1(tmp_path, capsys):
    p = tmp_path / "bad.yaml"
    p.write_text("orders: [0]\n")
    assert main(["compare", "--config", str(p), "--out-dir", str(tmp_path)]) == 1
    assert "orders" in capsys.readouterr().err


def test_parse_error_exit_1(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("orders: [1\n")
    assert main(["compare", "--config", str(p)]) == 1


def test_missing_config_exit_2(tmp_path):
    assert main(["compare", "--config", str(tmp_path / "nope.yaml")]) == 2


def test_unwritable_output_exit_2(cfg, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["compare", "--config", str(cfg), "--out-dir", str(blocker / "sub")]) == 2
