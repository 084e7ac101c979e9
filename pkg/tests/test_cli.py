import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from thzqlink.cli import read_config, run
from thzqlink.sweeps import COLUMNS, SweepError, build_spec

DATA = Path(__file__).parent / "data"

# Small-grid regression fixtures: (fixture, argv).
GOLDEN = [
    ("eg.csv", ["entanglement-gen", "--points", "4"]),
    ("ed.csv", ["entanglement-dist", "--points", "5"]),
    ("kr.csv", ["keyrate", "--points", "4"]),
    ("af.csv", ["accessible-freq", "--points", "4"]),
    ("ma.csv", ["min-aperture", "--points", "4"]),
    ("radar.csv", ["radar", "--points", "3", "--freq", "1e12:1e13"]),
]


@pytest.mark.parametrize("fixture, argv", GOLDEN)
def test_golden_output(tmp_path, fixture, argv):
    out = tmp_path / fixture
    assert run(argv + ["--out", str(out)]) == 0
    assert out.read_bytes() == (DATA / fixture).read_bytes()


@pytest.mark.parametrize("fixture, argv", GOLDEN)
def test_header_registry(fixture, argv):
    header = (DATA / fixture).read_text().splitlines()[0]
    assert tuple(header.split(",")) == COLUMNS[argv[0]]


def test_rerun_and_parallel_are_byte_identical(tmp_path):
    argv = ["accessible-freq", "--points", "6"]
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    run(argv + ["--out", str(a)])
    run(argv + ["--out", str(b)])
    run(argv + ["--out", str(c), "--workers", "2"])
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_stdout_output(capsys):
    assert run(["entanglement-gen", "--freq", "1e12", "--temp", "173", "--squeeze-db", "10"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1
    assert float(rows[0]["e_ln"]) == pytest.approx(0.4628239, rel=1e-7)


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# keyrate settings\ntemp = 173\ndist = 1e5\nfreq = 1e13\neta = 0.5\n")
    out = tmp_path / "k.csv"
    assert run(["keyrate", "--config", str(cfg), "--eta", "0.1", "--temp", "30", "--out", str(out)]) == 0
    row = next(csv.DictReader(out.open()))
    assert float(row["temp_k"]) == 30.0  # command line beats config
    assert float(row["dist_m"]) == 1e5  # config beats default
    argv = json.loads(Path(str(out) + ".meta.json").read_text())["argv"]
    assert argv[argv.index("--eta") + 1] == "0.1"


def test_read_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense\n")
    with pytest.raises(SweepError):
        read_config(str(bad))
    bad.write_text("colour = red\n")
    with pytest.raises(SweepError):
        read_config(str(bad))
    with pytest.raises(SweepError):
        read_config(str(tmp_path / "missing.cfg"))
    good = tmp_path / "good.cfg"
    good.write_text("log = true\npoints = 7\n")
    assert read_config(str(good)) == ["--log", "--points", "7"]


def test_sidecar_replay(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("eta = 1\n")
    out = tmp_path / "m.csv"
    run(["min-aperture", "--config", str(cfg), "--points", "3", "--out", str(out)])
    meta = json.loads(Path(str(out) + ".meta.json").read_text())
    assert meta["command"] == "min-aperture"
    assert meta["rows"] == 3
    assert meta["columns"] == list(COLUMNS["min-aperture"])
    cfg.unlink()  # the sidecar alone must reproduce the run
    again = tmp_path / "again.csv"
    assert run(["replay", str(out) + ".meta.json", "--out", str(again)]) == 0
    assert again.read_bytes() == out.read_bytes()


def test_exit_code_no_root(tmp_path):
    out = tmp_path / "ma.csv"
    assert run(["min-aperture", "--freq", "1e12", "--eta", "0.1", "--target-rate", "10", "--out", str(out)]) == 1
    assert next(csv.DictReader(out.open()))["status"] == "no_root"


@pytest.mark.parametrize(
    "argv",
    [
        ["keyrate", "--temp", "abc"],
        ["keyrate", "--eta", "0.1,0.5"],
        ["keyrate", "--dist", "5:1"],
        ["keyrate", "--kappa", "0.1"],
        ["entanglement-gen", "--temp", "1:300", "--points", "1"],
        ["min-aperture", "--freq", "-1:5", "--log"],
        ["nonexistent"],
    ],
)
def test_exit_code_bad_arguments(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 2


def test_radar_background_replaces_frequency(capsys):
    assert run(["radar", "--nb", "0.5"]) == 0
    row = next(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert row["freq_hz"] == "" and row["temp_k"] == ""
    assert float(row["nbar_b"]) == 0.5


def test_radar_undefined_advantage(capsys):
    assert run(["radar", "--nb", "1", "--kappa", "0"]) == 0
    row = next(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert row["status"] == "undefined"


def test_nb_only_for_radar():
    with pytest.raises(SweepError):
        build_spec("keyrate", {"nb": "1"})


def test_grid_is_cartesian_product():
    spec = build_spec("entanglement-gen", {"temp": "3:296"}, points=7)
    assert len(spec.grid()) == 2 * 7 * 5


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "thzqlink.cli", "--version"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "0.1.0" in proc.stdout
