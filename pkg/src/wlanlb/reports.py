"""CSV emission for simulation runs."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .scenario import Scenario
from .sim import SimReport

SUMMARY_HEADER = [
    "scenario", "seed", "mode", "alpha", "flow", "ap_path", "bitrate_kbps", "mean_delay_ms",
    "mean_abs_jitter_ms", "jitter_range_ms", "psnr_db", "loss_fraction",
]
MOVES_HEADER = ["time_s", "station", "from_ap", "to_ap", "snr_from_db", "snr_to_db"]
TRACE_HEADER = ["flow", "seq", "frame", "size_bits", "send_time_s", "arrival_time_s", "status"]


@dataclass
class RunReport:
    label: str
    scenario: Scenario
    sim: SimReport


def _num(v, digits=6) -> str:
    if v is None:
        return ""
    return f"{v:.{digits}f}"


def summary_rows(runs: Iterable[RunReport]) -> list[list[str]]:
    rows = []
    for run in runs:
        s = run.scenario.sim
        for flow, res in run.sim.flows.items():
            q = res.qos
            rows.append([
                run.label, str(s.seed), s.lba_mode, _num(s.alpha, 4), flow, ">".join(res.ap_path),
                _num(q.bitrate_kbps, 3), _num(q.mean_delay_ms, 3), _num(q.mean_abs_jitter_ms, 3),
                _num(q.jitter_range_ms, 3), _num(q.video_psnr_db, 3), _num(q.loss_fraction, 6),
            ])
    return rows


def _write(path: Path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_summary(runs: list[RunReport], out_dir: Path) -> Path:
    path = Path(out_dir) / "summary.csv"
    _write(path, SUMMARY_HEADER, summary_rows(runs))
    return path


def write_moves(report: SimReport, out_dir: Path) -> Path:
    path = Path(out_dir) / "moves.csv"
    rows = [
        [_num(tm.time_s), tm.move.station, tm.move.from_ap, tm.move.to_ap,
         _num(tm.move.snr_from_db, 3), _num(tm.move.snr_to_db, 3)]
        for tm in report.moves
    ]
    _write(path, MOVES_HEADER, rows)
    return path


def write_trace(report: SimReport, out_dir: Path) -> Path:
    path = Path(out_dir) / "trace.csv"
    rows = []
    for flow, res in report.flows.items():
        for r in res.records:
            rows.append([
                flow, r.seq, "" if r.frame is None else r.frame, _num(r.size_bits, 1),
                _num(r.send_time_s, 9), _num(r.arrival_time_s, 9), r.status,
            ])
    _write(path, TRACE_HEADER, rows)
    return path


def write_reports(run: RunReport, out_dir, trace: bool = False) -> list[Path]:
    """summary.csv, moves.csv and optionally trace.csv for a single run."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = [write_summary([run], out), write_moves(run.sim, out)]
    if trace:
        paths.append(write_trace(run.sim, out))
    return paths
