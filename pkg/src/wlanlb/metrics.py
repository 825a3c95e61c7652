"""Receiver-side QoS metrics: bitrate, delay, jitter, MSE and PSNR."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

PSNR_CAP_DB = 100.0
PEAK = 255.0


@dataclass(frozen=True, eq=False)
class Frame:
    """8-bit luma frame; `samples` has shape (height, width)."""

    samples: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.samples)
        if a.ndim != 2 or a.size == 0:
            raise ValueError("frame must be a non-empty 2-D array")
        if a.dtype != np.uint8:
            if a.min() < 0 or a.max() > 255:
                raise ValueError("samples must lie in [0, 255]")
            a = a.astype(np.uint8)
        object.__setattr__(self, "samples", a)

    @classmethod
    def from_rows(cls, width: int, height: int, values: Sequence[int]) -> Frame:
        if len(values) != width * height:
            raise ValueError("sample count does not match width * height")
        return cls(np.asarray(values).reshape(height, width))

    @property
    def width(self) -> int:
        return self.samples.shape[1]

    @property
    def height(self) -> int:
        return self.samples.shape[0]

    def __eq__(self, other):
        return isinstance(other, Frame) and np.array_equal(self.samples, other.samples)


def mse(a: Frame, b: Frame) -> float:
    if a.samples.shape != b.samples.shape:
        raise ValueError(f"frame shapes differ: {a.samples.shape} vs {b.samples.shape}")
    d = a.samples.astype(np.float64) - b.samples.astype(np.float64)
    return float(np.mean(d * d))


def psnr_from_mse(err: float) -> float:
    if err == 0:
        return PSNR_CAP_DB
    return min(PSNR_CAP_DB, 20.0 * math.log10(PEAK / math.sqrt(err)))


def psnr(a: Frame, b: Frame) -> float:
    """20 log10(255 / RMSE) in dB, capped at 100 dB for identical frames."""
    return psnr_from_mse(mse(a, b))


def video_psnr(reference: Sequence[Frame], received: Sequence[Frame]) -> float:
    if len(reference) != len(received):
        raise ValueError("reference and received sequences differ in length")
    if not reference:
        raise ValueError("no frames to score")
    return math.fsum(psnr(a, b) for a, b in zip(reference, received)) / len(reference)


DELIVERED = "delivered"
DROPPED = "dropped"
QUEUED = "queued"


@dataclass
class PacketRecord:
    flow: str
    seq: int
    size_bits: float
    send_time_s: float
    arrival_time_s: float | None = None  # None: lost (dropped or still queued)
    frame: int | None = None
    status: str = QUEUED

    @property
    def delivered(self) -> bool:
        return self.arrival_time_s is not None


def frame_timings(records: Iterable[PacketRecord]) -> list[tuple[float, float | None]]:
    """Collapse packets to (send time, arrival of last packet or None) per frame.

    Packets without a frame index stand alone. Result is in send order.
    """
    groups: dict = defaultdict(list)
    for r in records:
        key = ("f", r.frame) if r.frame is not None else ("p", r.seq)
        groups[key].append(r)
    out = []
    for pkts in groups.values():
        send = min(p.send_time_s for p in pkts)
        arrival = None
        if all(p.delivered for p in pkts):
            arrival = max(p.arrival_time_s for p in pkts)
        out.append((send, arrival))
    out.sort(key=lambda t: t[0])
    return out


def jitter_stats(records: Iterable[PacketRecord]) -> tuple[float, float]:
    """Mean absolute jitter and jitter range, both in ms.

    Jitter of a frame is its arrival gap to the previous delivered frame
    minus the matching send gap; lost frames are skipped, so a loss merges
    two gaps into one.
    """
    timings = [(s, a) for s, a in frame_timings(records) if a is not None]
    if len(timings) < 3:
        raise ValueError("jitter needs at least 3 delivered frames")
    s = np.array([t[0] for t in timings])
    a = np.array([t[1] for t in timings])
    j = np.diff(a) - np.diff(s)
    return float(np.mean(np.abs(j)) * 1e3), float((j.max() - j.min()) * 1e3)


def bitrate(records: Iterable[PacketRecord], window_start_s: float, window_end_s: float) -> float:
    """Delivered kbps counting arrivals in [window_start_s, window_end_s]."""
    if not window_end_s > window_start_s:
        raise ValueError("window end must be after its start")
    bits = math.fsum(
        r.size_bits
        for r in records
        if r.delivered and window_start_s <= r.arrival_time_s <= window_end_s
    )
    return bits / ((window_end_s - window_start_s) * 1000.0)


def mean_delay(records: Iterable[PacketRecord]) -> float:
    delays = [r.arrival_time_s - r.send_time_s for r in records if r.delivered]
    if not delays:
        raise ValueError("no delivered packets")
    return math.fsum(delays) / len(delays) * 1e3


def loss_fraction(records: Sequence[PacketRecord]) -> float:
    if not records:
        return 0.0
    return sum(1 for r in records if not r.delivered) / len(records)


@dataclass(frozen=True)
class QosReport:
    bitrate_kbps: float
    mean_delay_ms: float | None
    mean_abs_jitter_ms: float | None
    jitter_range_ms: float | None
    video_psnr_db: float | None
    loss_fraction: float


def qos_report(
    records: Sequence[PacketRecord],
    window_start_s: float,
    window_end_s: float,
    video_psnr_db: float | None = None,
) -> QosReport:
    try:
        delay = mean_delay(records)
    except ValueError:
        delay = None
    try:
        jit, jrange = jitter_stats(records)
    except ValueError:
        jit = jrange = None
    return QosReport(
        bitrate(records, window_start_s, window_end_s),
        delay,
        jit,
        jrange,
        video_psnr_db,
        loss_fraction(records),
    )
