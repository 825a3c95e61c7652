"""Link capacity and proportional-airtime contention.

Every SNR entering this module is in dB and is converted to a linear ratio
exactly once, in `link_budget`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .topology import AccessPoint

AIRTIME_EPS = 1e-9


def db_to_linear(snr_db: float) -> float:
    if not math.isfinite(snr_db):
        raise ValueError(f"SNR must be finite, got {snr_db}")
    return 10.0 ** (snr_db / 10.0)


def shannon_capacity(bandwidth_hz: float, snr_linear: float) -> float:
    """Shannon bound BW * log2(1 + SNR) in bits/s."""
    if bandwidth_hz < 0 or snr_linear < 0:
        raise ValueError("bandwidth and SNR must be non-negative")
    return bandwidth_hz * math.log2(1.0 + snr_linear)


@dataclass(frozen=True)
class LinkBudget:
    snr_db: float
    snr_linear: float
    capacity_bps: float


def link_budget(ap: AccessPoint, snr_db: float) -> LinkBudget:
    lin = db_to_linear(snr_db)
    cap = shannon_capacity(ap.bandwidth_hz, lin)
    if ap.capacity_cap_bps is not None:
        cap = min(cap, ap.capacity_cap_bps)
    return LinkBudget(snr_db, lin, cap)


@dataclass(frozen=True)
class StationShare:
    airtime: float
    achieved_bps: float
    serving_bps: float
    capacity_bps: float
    starved: bool = False


@dataclass(frozen=True)
class AirtimeShare:
    stations: dict[str, StationShare]
    requested_airtime: float

    @property
    def total_airtime(self) -> float:
        return sum(s.airtime for s in self.stations.values())

    def __getitem__(self, station_id: str) -> StationShare:
        return self.stations[station_id]


def effective_throughput(
    ap: AccessPoint, members: Sequence[tuple[str, float, float]]
) -> AirtimeShare:
    """Split one AP's airtime among `members` = (station id, demand bps, SNR dB).

    Each station asks for demand / capacity of airtime. When the requests
    sum to more than 1 every share is scaled by 1/sum, so achieved rates
    are demand * min(1, 1/sum).

    `serving_bps` is the rate a backlogged station drains its queue at when
    all airtime is handed out in the same proportions (work conserving):
    demand / sum. It equals `achieved_bps` under overload and exceeds it
    otherwise. A station with zero demand is served from idle airtime only.
    """
    budgets = {}
    requested = {}
    starved = set()
    for sid, demand, snr_db in members:
        if demand < 0:
            raise ValueError(f"station {sid!r}: negative demand")
        b = link_budget(ap, snr_db)
        budgets[sid] = b
        if b.capacity_bps <= 0:
            if demand > 0:
                starved.add(sid)
            requested[sid] = 0.0
        else:
            requested[sid] = demand / b.capacity_bps
    total = sum(requested.values())
    scale = 1.0 if total <= 1.0 else 1.0 / total
    idle = max(0.0, 1.0 - total)

    shares = {}
    for sid, demand, _ in members:
        cap = budgets[sid].capacity_bps
        if sid in starved:
            shares[sid] = StationShare(0.0, 0.0, 0.0, cap, starved=True)
            continue
        air = requested[sid] * scale
        achieved = demand * scale
        if demand > 0:
            serving = demand / total
        else:
            serving = cap * idle
        shares[sid] = StationShare(air, achieved, serving, cap)
    return AirtimeShare(shares, total)


def packet_service_time(size_bits: float, rate_bps: float) -> float:
    """Seconds to push `size_bits` at `rate_bps`; infinite when the rate is zero."""
    if size_bits < 0 or rate_bps < 0:
        raise ValueError("size and rate must be non-negative")
    if size_bits == 0:
        return 0.0
    if rate_bps == 0:
        return math.inf
    return size_bits / rate_bps
