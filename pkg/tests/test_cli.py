import csv

import pytest

from wlanlb.cli import run_command
from wlanlb.reports import MOVES_HEADER, SUMMARY_HEADER, TRACE_HEADER


def read(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


def test_run_builtin_writes_csv(tmp_path):
    assert run_command(["run", "fig2.scn", "--mode", "snr-aware", "--out", str(tmp_path)]) == 0
    summary = read(tmp_path / "summary.csv")
    assert summary[0] == SUMMARY_HEADER
    assert [r[4] for r in summary[1:]] == ["cam", "ftp1"]  # two monitored flows -> two rows
    moves = read(tmp_path / "moves.csv")
    assert moves[0] == MOVES_HEADER and len(moves) == 2
    assert not (tmp_path / "trace.csv").exists()


def test_zero_moves_header_only(tmp_path):
    assert run_command(["run", "table1", "--mode", "off", "--out", str(tmp_path), "--trace"]) == 0
    assert (tmp_path / "moves.csv").read_text(encoding="utf-8") == ",".join(MOVES_HEADER) + "\n"
    assert read(tmp_path / "trace.csv")[0] == TRACE_HEADER


def test_sweep_four_runs(tmp_path):
    rc = run_command(["run", "table1", "--sweep", "station.cam.link.ap2.snr_db=20,30,40,50",
                      "--out", str(tmp_path)])
    assert rc == 0
    rows = read(tmp_path / "summary.csv")[1:]
    assert len(rows) == 4
    assert [r[0].split("=")[-1].rstrip("]") for r in rows] == ["20", "30", "40", "50"]
    assert sorted(p.name for p in tmp_path.iterdir() if p.is_dir()) == [f"run_{i:03d}" for i in range(4)]


def test_cartesian_sweep(tmp_path):
    rc = run_command(["run", "table1", "--sweep", "station.cam.link.ap2.snr_db=30,50",
                      "--sweep", "sim.lba_mode=off,snr-aware", "--out", str(tmp_path)])
    assert rc == 0
    assert len(read(tmp_path / "summary.csv")) == 1 + 4


def test_overrides(tmp_path):
    assert run_command(["run", "table1", "--alpha", "0.1", "--seed", "42", "--out", str(tmp_path)]) == 0
    row = read(tmp_path / "summary.csv")[1]
    assert row[1] == "42" and row[3] == "0.1000"


def test_missing_file(tmp_path, capsys):
    assert run_command(["run", str(tmp_path / "nope.scn"), "--out", str(tmp_path)]) == 1
    assert "not found" in capsys.readouterr().err


def test_bad_scenario(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text("[sim]\nhorizon_s = 1\n[station s]\nlink.x.snr_db = 3\n", encoding="utf-8")
    assert run_command(["run", str(bad), "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "missing seed" in err and "line 4" in err


def test_bad_flags(capsys):
    assert run_command(["run", "table1", "--mode", "sideways"]) == 1
    assert run_command(["run", "table1", "--sweep", "novalue"]) == 1


def test_alpha_warning_printed(tmp_path, capsys):
    assert run_command(["run", "table1", "--alpha", "0.35", "--out", str(tmp_path)]) == 0
    assert "recommended" in capsys.readouterr().err


def test_io_error_exit_2(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert run_command(["run", "table1", "--out", str(blocker / "sub")]) == 2


def test_rerun_byte_identical(tmp_path):
    for d in ("a", "b"):
        assert run_command(["run", "fig2", "--trace", "--out", str(tmp_path / d)]) == 0
    for name in ("summary.csv", "moves.csv", "trace.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_list(capsys):
    assert run_command(["list"]) == 0
    assert "fig2.scn" in capsys.readouterr().out
