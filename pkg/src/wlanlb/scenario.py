"""Scenario files: a flat, sectioned key = value format.

    [sim]
    horizon_s = 10
    seed = 1

    [ap ap1]
    bandwidth_hz = 250e3

    [station cam]
    link.ap1.snr_db = 80
    traffic = video
    video.fps = 25

    [monitor]
    flows = cam

Every key has a stable dotted path (``station.cam.link.ap1.snr_db``) used by
command-line overrides and sweeps. Unknown keys are errors.
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from importlib import resources

from .lba import RECOMMENDED_ALPHA
from .sim.traffic import CAMERA_FRAME_RATES, FtpProfile, HttpProfile, Profile, VideoProfile
from .topology import DEFAULT_BANDWIDTH_HZ

LBA_MODES = ("off", "baseline", "snr-aware")


@dataclass(frozen=True)
class Diagnostic:
    line: int | None
    message: str

    def __str__(self):
        return f"line {self.line}: {self.message}" if self.line else self.message


class ScenarioError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class ApSpec:
    id: str
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ
    capacity_cap_bps: float | None = None


@dataclass(frozen=True)
class StationSpec:
    id: str
    links: dict[str, float]
    traffic: Profile | None = None
    demand_up_kbps: float | None = None  # None: mean rate of the traffic profile
    demand_down_kbps: float = 0.0
    join_time_s: float = 0.0
    leave_time_s: float | None = None
    demand_changes: tuple[tuple[float, float, float], ...] = ()

    @property
    def up_kbps(self) -> float:
        if self.demand_up_kbps is not None:
            return self.demand_up_kbps
        return self.traffic.mean_rate_kbps if self.traffic is not None else 0.0


@dataclass(frozen=True)
class SimSpec:
    horizon_s: float
    seed: int
    alpha: float = 0.2
    lba_mode: str = "off"
    handoff_latency_s: float = 0.05
    queue_capacity: int = 100
    lba_period_s: float = 0.0
    max_moves: int = 32


@dataclass(frozen=True)
class MonitorSpec:
    flows: tuple[str, ...] = ()
    video_width: int = 32
    video_height: int = 24
    pattern_seed: int = 0


@dataclass(frozen=True)
class Scenario:
    name: str
    sim: SimSpec
    aps: tuple[ApSpec, ...] = ()
    stations: tuple[StationSpec, ...] = ()
    monitor: MonitorSpec = MonitorSpec()
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def station(self, sid: str) -> StationSpec:
        return next(s for s in self.stations if s.id == sid)


# -- raw layer ---------------------------------------------------------------

_SECTION = re.compile(r"^\[\s*(sim|monitor|ap|station)(?:\s+([A-Za-z0-9_\-]+))?\s*\]$")
_KEYVAL = re.compile(r"^([A-Za-z0-9_.\-]+)\s*=\s*(.*)$")


@dataclass
class _Section:
    kind: str
    id: str | None
    line: int
    entries: dict = field(default_factory=dict)  # key -> (value text, line)

    @property
    def path(self) -> str:
        return self.kind if self.id is None else f"{self.kind}.{self.id}"


def _read_sections(text: str) -> list[_Section]:
    sections: list[_Section] = []
    diags = []
    seen = {}
    current = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SECTION.match(line)
        if m:
            kind, sid = m.group(1), m.group(2)
            if kind in ("ap", "station") and sid is None:
                diags.append(Diagnostic(n, f"[{kind}] section needs an id"))
                current = None
                continue
            if kind in ("sim", "monitor") and sid is not None:
                diags.append(Diagnostic(n, f"[{kind}] section takes no id"))
                current = None
                continue
            current = _Section(kind, sid, n)
            if current.path in seen:
                what = f"duplicate {kind} id {sid!r}" if sid else f"duplicate [{kind}] section"
                diags.append(Diagnostic(n, f"{what} (first at line {seen[current.path]})"))
                current = None
                continue
            seen[current.path] = n
            sections.append(current)
            continue
        m = _KEYVAL.match(line)
        if not m:
            diags.append(Diagnostic(n, f"cannot parse {raw.strip()!r}"))
            continue
        if current is None:
            diags.append(Diagnostic(n, f"key {m.group(1)!r} outside a valid section"))
            continue
        key = m.group(1)
        if key in current.entries:
            diags.append(Diagnostic(n, f"{current.path}: duplicate key {key!r}"))
            continue
        current.entries[key] = (m.group(2).strip(), n)
    if diags:
        raise ScenarioError(diags)
    return sections


def _apply_overrides(sections: list[_Section], overrides: dict[str, str]):
    by_path = {s.path: s for s in sections}
    diags = []
    for dotted, value in overrides.items():
        parts = dotted.split(".")
        if parts[0] in ("sim", "monitor"):
            path, key = parts[0], ".".join(parts[1:])
        else:
            path, key = ".".join(parts[:2]), ".".join(parts[2:])
        if not key:
            diags.append(Diagnostic(None, f"override {dotted!r}: missing key"))
            continue
        sec = by_path.get(path)
        if sec is None:
            if path in ("sim", "monitor"):
                sec = _Section(path, None, 0)
                sections.append(sec)
                by_path[path] = sec
            else:
                diags.append(Diagnostic(None, f"override {dotted!r}: no section {path!r}"))
                continue
        old_line = sec.entries.get(key, (None, sec.line))[1]
        sec.entries[key] = (str(value), old_line)
    if diags:
        raise ScenarioError(diags)


# -- typed layer ---------------------------------------------------------------

class _Reader:
    """Pulls typed values out of one section, collecting diagnostics."""

    def __init__(self, section: _Section, diags: list[Diagnostic]):
        self.sec = section
        self.diags = diags
        self.used = set()

    def has(self, key):
        return key in self.sec.entries

    def _get(self, key):
        self.used.add(key)
        return self.sec.entries[key]

    def err(self, key, msg):
        line = self.sec.entries[key][1] if key in self.sec.entries else self.sec.line
        self.diags.append(Diagnostic(line, f"{self.sec.path}.{key}: {msg}"))

    def float(self, key, default=None, minimum=0.0, strict=False):
        if not self.has(key):
            return default
        text, _ = self._get(key)
        try:
            v = float(text)
        except ValueError:
            self.err(key, f"expected a number, got {text!r}")
            return default
        if not math.isfinite(v):
            self.err(key, "must be finite")
            return default
        if minimum is not None and (v <= minimum if strict else v < minimum):
            self.err(key, f"must be {'>' if strict else '>='} {minimum:g}, got {text}")
            return default
        return v

    def int(self, key, default=None, minimum=0):
        if not self.has(key):
            return default
        text, _ = self._get(key)
        try:
            v = int(text)
        except ValueError:
            self.err(key, f"expected an integer, got {text!r}")
            return default
        if minimum is not None and v < minimum:
            self.err(key, f"must be >= {minimum}, got {v}")
            return default
        return v

    def str(self, key, default=None):
        if not self.has(key):
            return default
        return self._get(key)[0]

    def finish(self):
        for key in self.sec.entries:
            if key not in self.used:
                self.err(key, "unknown key")


def _traffic(r: _Reader) -> Profile | None:
    kind = r.str("traffic", "none")
    try:
        if kind == "none":
            return None
        if kind == "video":
            fps = r.int("video.fps", 25)
            if fps not in CAMERA_FRAME_RATES:
                r.err("video.fps", f"must be one of {CAMERA_FRAME_RATES}")
                return None
            return VideoProfile(
                fps,
                r.float("video.frame_size_bits", 32000.0, strict=True),
                r.int("video.packets_per_frame", 4, minimum=1),
            )
        if kind == "ftp":
            return FtpProfile(
                r.float("ftp.rate_kbps", 1000.0, strict=True),
                r.float("ftp.packet_bits", 12000.0, strict=True),
            )
        if kind == "http":
            return HttpProfile(
                r.float("http.peak_kbps", 1000.0, strict=True),
                r.float("http.mean_on_s", 1.0, strict=True),
                r.float("http.mean_off_s", 1.0, strict=True),
                r.float("http.packet_bits", 12000.0, strict=True),
            )
    except (TypeError, ValueError) as exc:
        r.err("traffic", str(exc))
        return None
    r.err("traffic", f"unknown traffic kind {kind!r} (video, ftp, http, none)")
    return None


def _demand_changes(r: _Reader):
    text = r.str("demand_changes")
    if not text:
        return ()
    out = []
    for item in text.split(","):
        try:
            t, up, down = (float(x) for x in item.strip().split(":"))
        except ValueError:
            r.err("demand_changes", f"expected time:up_kbps:down_kbps, got {item.strip()!r}")
            continue
        if min(t, up, down) < 0:
            r.err("demand_changes", "negative quantity")
            continue
        out.append((t, up, down))
    return tuple(sorted(out))


def _build(sections: list[_Section], name: str) -> Scenario:
    diags: list[Diagnostic] = []
    warn = []
    sim_sec = next((s for s in sections if s.kind == "sim"), None)
    mon_sec = next((s for s in sections if s.kind == "monitor"), None)

    sim = None
    if sim_sec is None:
        diags.append(Diagnostic(None, "missing [sim] section (horizon_s and seed are required)"))
    else:
        r = _Reader(sim_sec, diags)
        horizon = r.float("horizon_s", strict=True)
        seed = r.int("seed")
        if not r.has("horizon_s"):
            diags.append(Diagnostic(sim_sec.line, "sim: missing horizon_s"))
        if not r.has("seed"):
            diags.append(Diagnostic(sim_sec.line, "sim: missing seed"))
        elif seed is not None and seed >= 2**64:
            r.err("seed", "must fit in 64 bits")
        alpha = r.float("alpha", 0.2)
        if alpha is not None and alpha > 1:
            r.err("alpha", "must be <= 1")
        elif alpha is not None and not RECOMMENDED_ALPHA[0] <= alpha <= RECOMMENDED_ALPHA[1]:
            line = sim_sec.entries["alpha"][1]
            warn.append(f"line {line}: alpha={alpha:g} outside recommended range [0.1, 0.2]")
        mode = r.str("lba_mode", "off")
        if mode not in LBA_MODES:
            r.err("lba_mode", f"must be one of {', '.join(LBA_MODES)}")
        sim_kwargs = dict(
            alpha=alpha,
            lba_mode=mode,
            handoff_latency_s=r.float("handoff_latency_s", 0.05),
            queue_capacity=r.int("queue_capacity", 100, minimum=1),
            lba_period_s=r.float("lba_period_s", 0.0),
            max_moves=r.int("max_moves", 32, minimum=1),
        )
        r.finish()
        if horizon is not None and seed is not None:
            sim = SimSpec(horizon, seed, **sim_kwargs)

    aps = []
    for sec in (s for s in sections if s.kind == "ap"):
        r = _Reader(sec, diags)
        aps.append(
            ApSpec(
                sec.id,
                r.float("bandwidth_hz", DEFAULT_BANDWIDTH_HZ, strict=True),
                r.float("capacity_cap_bps", None, strict=True),
            )
        )
        r.finish()
    ap_ids = {a.id for a in aps}

    stations = []
    for sec in (s for s in sections if s.kind == "station"):
        r = _Reader(sec, diags)
        links = {}
        for key in list(sec.entries):
            m = re.fullmatch(r"link\.([A-Za-z0-9_\-]+)\.snr_db", key)
            if not m:
                continue
            snr = r.float(key)
            if m.group(1) not in ap_ids:
                r.err(key, f"station {sec.id!r} links unknown AP {m.group(1)!r}")
            elif snr is not None:
                links[m.group(1)] = snr
        traffic = _traffic(r)
        st = StationSpec(
            sec.id,
            links,
            traffic,
            r.float("demand_up_kbps", None),
            r.float("demand_down_kbps", 0.0),
            r.float("join_time_s", 0.0),
            r.float("leave_time_s", None),
            _demand_changes(r),
        )
        if st.leave_time_s is not None and st.leave_time_s < st.join_time_s:
            r.err("leave_time_s", "must not precede join_time_s")
        r.finish()
        stations.append(st)

    monitor = MonitorSpec()
    if mon_sec is not None:
        r = _Reader(mon_sec, diags)
        flows = tuple(f.strip() for f in (r.str("flows", "") or "").split(",") if f.strip())
        sids = {s.id for s in stations}
        for f in flows:
            if f not in sids:
                r.err("flows", f"unknown flow {f!r}")
        if len(set(flows)) != len(flows):
            r.err("flows", "duplicate flow id")
        monitor = MonitorSpec(
            flows,
            r.int("video.width", 32, minimum=1),
            r.int("video.height", 24, minimum=1),
            r.int("video.pattern_seed", 0),
        )
        r.finish()

    if diags:
        raise ScenarioError(sorted(diags, key=lambda d: (d.line or 0)))
    for w in warn:
        warnings.warn(w, stacklevel=3)
    return Scenario(name, sim, tuple(aps), tuple(stations), monitor, tuple(warn))


def parse_scenario(text: str, name: str = "scenario", overrides: dict[str, str] | None = None) -> Scenario:
    """Parse and validate scenario text, applying dotted-path overrides first.

    Raises ScenarioError carrying line-anchored diagnostics.
    """
    sections = _read_sections(text)
    if overrides:
        _apply_overrides(sections, overrides)
    return _build(sections, name)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_scenario(sc: Scenario) -> str:
    """Canonical text for `sc`; parsing it gives back an equal Scenario."""
    out = ["[sim]"]
    s = sc.sim
    for key in ("horizon_s", "seed", "alpha", "lba_mode", "handoff_latency_s",
                "queue_capacity", "lba_period_s", "max_moves"):
        out.append(f"{key} = {_fmt(getattr(s, key))}")
    for ap in sc.aps:
        out += ["", f"[ap {ap.id}]", f"bandwidth_hz = {_fmt(ap.bandwidth_hz)}"]
        if ap.capacity_cap_bps is not None:
            out.append(f"capacity_cap_bps = {_fmt(ap.capacity_cap_bps)}")
    for st in sc.stations:
        out += ["", f"[station {st.id}]"]
        for ap_id, snr in st.links.items():
            out.append(f"link.{ap_id}.snr_db = {_fmt(snr)}")
        t = st.traffic
        if t is None:
            out.append("traffic = none")
        elif isinstance(t, VideoProfile):
            out += ["traffic = video", f"video.fps = {t.fps}",
                    f"video.frame_size_bits = {_fmt(t.frame_size_bits)}",
                    f"video.packets_per_frame = {t.packets_per_frame}"]
        elif isinstance(t, FtpProfile):
            out += ["traffic = ftp", f"ftp.rate_kbps = {_fmt(t.rate_kbps)}",
                    f"ftp.packet_bits = {_fmt(t.packet_bits)}"]
        else:
            out += ["traffic = http", f"http.peak_kbps = {_fmt(t.peak_kbps)}",
                    f"http.mean_on_s = {_fmt(t.mean_on_s)}",
                    f"http.mean_off_s = {_fmt(t.mean_off_s)}",
                    f"http.packet_bits = {_fmt(t.packet_bits)}"]
        if st.demand_up_kbps is not None:
            out.append(f"demand_up_kbps = {_fmt(st.demand_up_kbps)}")
        out.append(f"demand_down_kbps = {_fmt(st.demand_down_kbps)}")
        out.append(f"join_time_s = {_fmt(st.join_time_s)}")
        if st.leave_time_s is not None:
            out.append(f"leave_time_s = {_fmt(st.leave_time_s)}")
        if st.demand_changes:
            items = ", ".join(":".join(_fmt(x) for x in c) for c in st.demand_changes)
            out.append(f"demand_changes = {items}")
    m = sc.monitor
    out += ["", "[monitor]", f"flows = {', '.join(m.flows)}", f"video.width = {m.video_width}",
            f"video.height = {m.video_height}", f"video.pattern_seed = {m.pattern_seed}"]
    return "\n".join(out) + "\n"


BUILTIN = ("fig2.scn", "table1.scn", "contrast.scn")


def builtin_text(name: str) -> str:
    return resources.files("wlanlb.scenarios").joinpath(name).read_text(encoding="utf-8")


def load_builtin(name: str, overrides: dict[str, str] | None = None) -> Scenario:
    stem = name.removesuffix(".scn")
    return parse_scenario(builtin_text(stem + ".scn"), stem, overrides)
