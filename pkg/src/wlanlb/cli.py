"""Command line: ``wlanlb run <scenario> [--mode ...] [--sweep key=v1,v2] --out DIR``.

Exit status: 0 success, 1 scenario or usage error, 2 runtime or I/O error.
"""
from __future__ import annotations

import argparse
import itertools
import sys
import warnings
from pathlib import Path

from . import reports, sim
from .scenario import BUILTIN, LBA_MODES, ScenarioError, builtin_text, parse_scenario


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wlanlb", description="SNR-aware WLAN load balancing simulator")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="simulate a scenario file and write CSV reports")
    r.add_argument("scenario", help=f"scenario file, or a built-in name ({', '.join(BUILTIN)})")
    r.add_argument("--mode", choices=LBA_MODES)
    r.add_argument("--alpha", type=float)
    r.add_argument("--seed", type=int)
    r.add_argument("--out", default="out")
    r.add_argument("--sweep", action="append", default=[], metavar="KEY=V1,V2,...")
    r.add_argument("--trace", action="store_true", help="also write trace.csv")
    sub.add_parser("list", help="list built-in scenarios")
    return p


def _load_text(name: str) -> tuple[str, str]:
    path = Path(name)
    if path.is_file():
        return path.read_text(encoding="utf-8"), path.stem
    if name in BUILTIN or f"{name}.scn" in BUILTIN:
        fname = name if name in BUILTIN else f"{name}.scn"
        return builtin_text(fname), fname.removesuffix(".scn")
    raise FileNotFoundError(name)


def _sweeps(specs: list[str]) -> list[list[tuple[str, str]]]:
    axes = []
    for spec in specs:
        key, sep, values = spec.partition("=")
        vals = [v.strip() for v in values.split(",") if v.strip()]
        if not sep or not key.strip() or not vals:
            raise UsageError(f"bad --sweep {spec!r}; expected KEY=V1,V2,...")
        axes.append([(key.strip(), v) for v in vals])
    return [list(combo) for combo in itertools.product(*axes)]


def run_command(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"wlanlb: {exc}", file=sys.stderr)
        return 1
    if args.command == "list":
        for name in BUILTIN:
            print(name)
        return 0

    try:
        text, name = _load_text(args.scenario)
    except (FileNotFoundError, OSError):
        print(f"wlanlb: scenario not found: {args.scenario}", file=sys.stderr)
        return 1

    base = {}
    if args.mode:
        base["sim.lba_mode"] = args.mode
    if args.alpha is not None:
        base["sim.alpha"] = repr(args.alpha)
    if args.seed is not None:
        base["sim.seed"] = str(args.seed)

    try:
        combos = _sweeps(args.sweep)
        runs = []
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            for combo in combos:
                scen = parse_scenario(text, name, {**base, **dict(combo)})
                label = name + ("[" + ";".join(f"{k}={v}" for k, v in combo) + "]" if combo else "")
                runs.append((label, scen))
        for w in caught:
            print(f"wlanlb: warning: {w.message}", file=sys.stderr)
    except (ScenarioError, UsageError) as exc:
        print(f"wlanlb: {exc}", file=sys.stderr)
        return 1

    try:
        out = Path(args.out)
        results = [reports.RunReport(label, scen, sim.run(scen)) for label, scen in runs]
        if len(results) == 1:
            reports.write_reports(results[0], out, trace=args.trace)
        else:
            out.mkdir(parents=True, exist_ok=True)
            reports.write_summary(results, out)
            for i, res in enumerate(results):
                sub = out / f"run_{i:03d}"
                sub.mkdir(exist_ok=True)
                reports.write_moves(res.sim, sub)
                if args.trace:
                    reports.write_trace(res.sim, sub)
    except Exception as exc:  # noqa: BLE001 - reported as a runtime failure
        print(f"wlanlb: runtime error: {exc}", file=sys.stderr)
        return 2
    for res in results:
        for flow, fr in res.sim.flows.items():
            q = fr.qos
            print(f"{res.label} {flow} path={'>'.join(fr.ap_path)} bitrate={q.bitrate_kbps:.1f}kbps "
                  f"moves={len(res.sim.moves)}")
    return 0


def main():
    sys.exit(run_command())


if __name__ == "__main__":
    main()
