"""Discrete-event engine: traffic sources, per-station AP queues, association
handling and controller runs, all driven off one time-ordered event heap.
"""
from __future__ import annotations

import enum
import heapq
import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterator

import numpy as np

from .. import lba
from ..channel import effective_throughput
from ..metrics import DELIVERED, DROPPED, QUEUED, PacketRecord, QosReport, qos_report, video_psnr
from ..topology import AccessPoint, MobileStation, NetworkState
from .traffic import HttpProfile, VideoProfile, emissions
from .video import conceal, generate_frames

if TYPE_CHECKING:
    from ..scenario import Scenario


class EventKind(enum.IntEnum):
    PACKET_ARRIVAL_AT_AP = 1
    PACKET_DEPARTURE = 2
    STATION_JOIN = 3
    STATION_LEAVE = 4
    DEMAND_CHANGE = 5
    LBA_RUN = 6
    MOVE_COMMAND = 7
    FRAME_DEADLINE = 8


class MsgKind(str, enum.Enum):
    ASSOC_REQUEST = "AssocRequest"
    ASSOC_ACCEPT = "AssocAccept"
    ASSOC_REJECT = "AssocReject"
    MOVE_COMMAND = "MoveCommand"
    LOAD_REPORT = "LoadReport"


@dataclass(frozen=True)
class AssocMessage:
    time_s: float
    kind: MsgKind
    station: str | None = None
    ap: str | None = None
    to_ap: str | None = None
    value: float | None = None  # required bandwidth or reported load, kbps


@dataclass(frozen=True)
class TimedMove:
    time_s: float  # when the controller issued it
    move: lba.Move


@dataclass
class FlowResult:
    flow: str
    qos: QosReport
    ap_path: list[str]
    records: list[PacketRecord]
    frames_sent: int = 0
    frames_delivered: int = 0


@dataclass
class SimReport:
    flows: dict[str, FlowResult]
    moves: list[TimedMove]
    plans: list[tuple[float, lba.MovePlan]]
    messages: list[AssocMessage]
    counters: Counter
    conservation: dict[str, dict[str, int]]
    final_classification: lba.LoadClassification | None


class _Lane:
    """One station's FIFO at its serving AP, drained at the station's serving rate."""

    __slots__ = ("station", "ap", "queue", "busy", "remaining", "rate", "since", "token", "paused")

    def __init__(self, station: str):
        self.station = station
        self.ap = None
        self.queue: deque[PacketRecord] = deque()
        self.busy: PacketRecord | None = None
        self.remaining = 0.0
        self.rate = 0.0
        self.since = 0.0
        self.token = 0
        self.paused = False

    def __len__(self):
        return len(self.queue) + (self.busy is not None)


class Simulator:
    """Single-threaded engine for one scenario; call `run()` once."""

    def __init__(self, scenario: Scenario):
        self.sc = scenario
        self.sim = scenario.sim
        self.now = 0.0
        self._heap: list = []
        self._seq = itertools.count()
        self.aps = {a.id: AccessPoint(a.id, a.bandwidth_hz, a.capacity_cap_bps) for a in scenario.aps}
        self.specs = {s.id: s for s in scenario.stations}
        self.order = [s.id for s in scenario.stations]
        self.demand = {s.id: (s.up_kbps, s.demand_down_kbps) for s in scenario.stations}
        self.assoc: dict[str, str | None] = {}
        self.pending: dict[str, str] = {}
        self.joined: set[str] = set()
        self.lanes = {sid: _Lane(sid) for sid in self.order}
        self.records: dict[str, list[PacketRecord]] = {sid: [] for sid in self.order}
        self.sources: dict[str, Iterator] = {}
        self.paths: dict[str, list[str]] = {sid: [] for sid in self.order}
        self.frame_status: dict[str, dict[int, bool]] = {sid: {} for sid in self.order}
        self.frame_pkts: dict[str, dict[int, list[PacketRecord]]] = {sid: {} for sid in self.order}
        self._seqno: Counter = Counter()
        self.moves: list[TimedMove] = []
        self.plans: list[tuple[float, lba.MovePlan]] = []
        self.messages: list[AssocMessage] = []
        self.counters: Counter = Counter()
        self.drops: Counter = Counter()
        self.mode = self.sim.lba_mode
        if self.mode != "off":
            self.params = lba.BalanceParams(self.sim.alpha, lba.BalanceMode(self.mode), self.sim.max_moves)
        seeds = np.random.SeedSequence(self.sim.seed).spawn(len(self.order))
        self.rngs = {sid: np.random.default_rng(s) for sid, s in zip(self.order, seeds)}

    # -- event plumbing --------------------------------------------------

    def schedule(self, t: float, kind: EventKind, *payload):
        heapq.heappush(self._heap, (t, next(self._seq), kind, payload))

    def run(self) -> SimReport:
        for sid in sorted(self.order, key=lambda s: self.specs[s].join_time_s):
            spec = self.specs[sid]
            self.schedule(spec.join_time_s, EventKind.STATION_JOIN, sid)
            if spec.leave_time_s is not None:
                self.schedule(spec.leave_time_s, EventKind.STATION_LEAVE, sid)
            for t, up, down in spec.demand_changes:
                self.schedule(t, EventKind.DEMAND_CHANGE, sid, up, down)
        if self.mode != "off" and self.sim.lba_period_s > 0:
            self.schedule(self.sim.lba_period_s, EventKind.LBA_RUN, True)

        handlers = {
            EventKind.PACKET_ARRIVAL_AT_AP: self._on_packet,
            EventKind.PACKET_DEPARTURE: self._on_departure,
            EventKind.STATION_JOIN: self.on_station_join,
            EventKind.STATION_LEAVE: self._on_leave,
            EventKind.DEMAND_CHANGE: self._on_demand_change,
            EventKind.LBA_RUN: self.on_lba_run,
            EventKind.MOVE_COMMAND: self._on_move,
            EventKind.FRAME_DEADLINE: self._on_deadline,
        }
        horizon = self.sim.horizon_s
        while self._heap and self._heap[0][0] <= horizon:
            t, _, kind, payload = heapq.heappop(self._heap)
            self.now = t
            self.counters[kind.name] += 1
            handlers[kind](*payload)
        self.now = horizon
        return self._report()

    # -- network views ----------------------------------------------------

    def snapshot(self) -> NetworkState:
        """Controller view: joined stations, with in-flight handoffs at their target."""
        stations = []
        for sid in self.order:
            if sid not in self.joined:
                continue
            spec = self.specs[sid]
            up, down = self.demand[sid]
            ap = self.pending.get(sid, self.assoc.get(sid))
            stations.append(MobileStation(sid, dict(spec.links), ap, up, down))
        return NetworkState(tuple(self.aps.values()), tuple(stations))

    def _members(self, ap_id: str) -> list[str]:
        return [
            sid for sid in self.order
            if sid in self.joined and self.assoc.get(sid) == ap_id and sid not in self.pending
        ]

    def _refresh_rates(self, ap_id: str):
        members = self._members(ap_id)
        share = effective_throughput(
            self.aps[ap_id],
            [(sid, sum(self.demand[sid]) * 1000.0, self.specs[sid].links[ap_id]) for sid in members],
        )
        for sid in members:
            self._set_rate(self.lanes[sid], share[sid].serving_bps)

    # -- lanes ------------------------------------------------------------

    def _set_rate(self, lane: _Lane, rate: float):
        if lane.busy is not None and not lane.paused:
            lane.remaining = max(0.0, lane.remaining - lane.rate * (self.now - lane.since))
        lane.since = self.now
        lane.rate = rate
        lane.token += 1
        if lane.busy is not None:
            self._schedule_departure(lane)
        else:
            self._start(lane)

    def _pause(self, lane: _Lane):
        if lane.busy is not None and not lane.paused:
            lane.remaining = max(0.0, lane.remaining - lane.rate * (self.now - lane.since))
        lane.paused = True
        lane.rate = 0.0
        lane.since = self.now
        lane.token += 1

    def _schedule_departure(self, lane: _Lane):
        if lane.paused or lane.busy is None:
            return
        if lane.remaining == 0:
            self.schedule(self.now, EventKind.PACKET_DEPARTURE, lane.station, lane.token)
        elif lane.rate > 0:
            self.schedule(self.now + lane.remaining / lane.rate, EventKind.PACKET_DEPARTURE,
                          lane.station, lane.token)

    def _start(self, lane: _Lane):
        if lane.busy is not None or not lane.queue or lane.paused:
            return
        lane.busy = lane.queue.popleft()
        lane.remaining = lane.busy.size_bits
        lane.since = self.now
        self._schedule_departure(lane)

    def _on_packet(self, sid: str, rec: PacketRecord):
        self.records[sid].append(rec)
        self._next_emission(sid)
        lane = self.lanes[sid]
        if len(lane) >= self.sim.queue_capacity:
            rec.status = DROPPED
            self.drops[sid] += 1
            return
        lane.queue.append(rec)
        self._start(lane)

    def _on_departure(self, sid: str, token: int):
        lane = self.lanes[sid]
        if token != lane.token or lane.busy is None:
            return
        rec = lane.busy
        rec.arrival_time_s = self.now
        rec.status = DELIVERED
        lane.busy = None
        lane.since = self.now
        self._start(lane)

    def _next_emission(self, sid: str):
        src = self.sources.get(sid)
        if src is None:
            return
        t, frame, size = next(src)
        if t >= self.sim.horizon_s:
            self.sources.pop(sid)
            return
        spec = self.specs[sid]
        if spec.leave_time_s is not None and t >= spec.leave_time_s:
            self.sources.pop(sid)
            return
        seq = self._seqno[sid]
        self._seqno[sid] += 1
        rec = PacketRecord(sid, seq, size, t, None, frame, QUEUED)
        self.schedule(t, EventKind.PACKET_ARRIVAL_AT_AP, sid, rec)
        if frame is not None:
            if frame not in self.frame_status[sid]:
                self.frame_status[sid][frame] = False
                self.frame_pkts[sid][frame] = []
                self.schedule(t + spec.traffic.period_s, EventKind.FRAME_DEADLINE, sid, frame)
            self.frame_pkts[sid][frame].append(rec)

    def _on_deadline(self, sid: str, frame: int):
        # deadlines sort before same-time departures, so delivery must be strictly earlier
        pkts = self.frame_pkts[sid].pop(frame)
        self.frame_status[sid][frame] = all(r.delivered for r in pkts)

    # -- association and controller ---------------------------------------

    def on_station_join(self, sid: str):
        spec = self.specs[sid]
        up, down = self.demand[sid]
        self.messages.append(AssocMessage(self.now, MsgKind.ASSOC_REQUEST, sid, value=up + down))
        if not spec.links:
            self.messages.append(AssocMessage(self.now, MsgKind.ASSOC_REJECT, sid))
            return
        target = min(spec.links, key=lambda ap: (-spec.links[ap], ap))
        self.joined.add(sid)
        self.assoc[sid] = target
        self.paths[sid].append(target)
        self.lanes[sid].ap = target
        self.messages.append(AssocMessage(self.now, MsgKind.ASSOC_ACCEPT, sid, target))
        self._refresh_rates(target)

        if spec.traffic is not None:
            rng = self.rngs[sid] if isinstance(spec.traffic, HttpProfile) else None
            self.sources[sid] = emissions(spec.traffic, spec.join_time_s, rng)
            self._next_emission(sid)

        if self.mode != "off":
            loads = self.snapshot().loads()
            anl = lba.average_network_load(list(loads.values()))
            delta1, _ = lba.thresholds(anl, self.sim.alpha)
            if loads[target] > delta1:
                self.schedule(self.now, EventKind.LBA_RUN, False)

    def _on_leave(self, sid: str):
        if sid not in self.joined:
            return
        self.joined.discard(sid)
        self.sources.pop(sid, None)
        ap = self.assoc.pop(sid)
        self.pending.pop(sid, None)
        lane = self.lanes[sid]
        for rec in ([lane.busy] if lane.busy else []) + list(lane.queue):
            rec.status = DROPPED
            self.drops[sid] += 1
        lane.queue.clear()
        lane.busy = None
        lane.token += 1
        self._refresh_rates(ap)
        if self.mode != "off":
            self.schedule(self.now, EventKind.LBA_RUN, False)

    def _on_demand_change(self, sid: str, up: float, down: float):
        self.demand[sid] = (up, down)
        if sid in self.joined and sid not in self.pending:
            self._refresh_rates(self.assoc[sid])
        if self.mode != "off" and sid in self.joined:
            self.schedule(self.now, EventKind.LBA_RUN, False)

    def on_lba_run(self, periodic: bool = False):
        if periodic:
            self.schedule(self.now + self.sim.lba_period_s, EventKind.LBA_RUN, True)
        net = self.snapshot()
        if not net.stations:
            return
        for ap_id, load in net.loads().items():
            self.messages.append(AssocMessage(self.now, MsgKind.LOAD_REPORT, ap=ap_id, value=load))
        plan = lba.rebalance(net, self.params)
        self.plans.append((self.now, plan))
        for m in plan.moves:
            self.moves.append(TimedMove(self.now, m))
            self.messages.append(AssocMessage(self.now, MsgKind.MOVE_COMMAND, m.station, m.from_ap, m.to_ap))
            src = self.assoc[m.station]
            self.pending[m.station] = m.to_ap
            self._pause(self.lanes[m.station])
            self._refresh_rates(src)
            self.schedule(self.now + self.sim.handoff_latency_s, EventKind.MOVE_COMMAND,
                          m.station, m.to_ap)

    def _on_move(self, sid: str, to_ap: str):
        if sid not in self.joined or self.pending.get(sid) != to_ap:
            return
        del self.pending[sid]
        self.assoc[sid] = to_ap
        self.paths[sid].append(to_ap)
        lane = self.lanes[sid]
        lane.ap = to_ap
        lane.paused = False
        self._refresh_rates(to_ap)

    # -- reporting --------------------------------------------------------

    def _report(self) -> SimReport:
        mon = self.sc.monitor
        flows = {}
        for sid in mon.flows:
            spec = self.specs[sid]
            recs = self.records[sid]
            psnr = None
            sent = delivered = 0
            if isinstance(spec.traffic, VideoProfile) and self.frame_status[sid]:
                status = dict(self.frame_status[sid])
                for frame, pkts in self.frame_pkts[sid].items():
                    # deadline past the horizon: judged on what arrived by then
                    status[frame] = all(r.delivered for r in pkts)
                n = max(status) + 1
                flags = []
                for i in range(n):
                    ok = status.get(i, False)
                    flags.append(ok)
                ref = generate_frames(mon.pattern_seed, n, mon.video_width, mon.video_height)
                psnr = video_psnr(ref, conceal(ref, flags))
                sent, delivered = n, sum(flags)
            start = min(spec.join_time_s, self.sim.horizon_s)
            if start >= self.sim.horizon_s:
                start = 0.0
            qos = qos_report(recs, start, self.sim.horizon_s, psnr)
            flows[sid] = FlowResult(sid, qos, list(self.paths[sid]), recs, sent, delivered)

        conservation = {}
        for sid in self.order:
            recs = self.records[sid]
            conservation[sid] = {
                "generated": len(recs),
                "delivered": sum(r.status == DELIVERED for r in recs),
                "dropped": sum(r.status == DROPPED for r in recs),
                "queued": len(self.lanes[sid]) if sid in self.joined else 0,
            }
        net = self.snapshot()
        final = lba.classify(net, self.sim.alpha) if net.aps else None
        return SimReport(flows, self.moves, self.plans, self.messages, self.counters,
                         conservation, final)


def run(scenario: Scenario) -> SimReport:
    """Simulate `scenario` to its horizon. Identical scenarios give identical reports."""
    return Simulator(scenario).run()
