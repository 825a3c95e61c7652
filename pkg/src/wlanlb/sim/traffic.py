"""Traffic source profiles and their packet emission schedules."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

CAMERA_FRAME_RATES = (1, 3, 7, 15, 25)


@dataclass(frozen=True)
class VideoProfile:
    """Constant-bitrate camera stream; all packets of a frame leave together."""

    fps: int = 25
    frame_size_bits: float = 32000.0
    packets_per_frame: int = 4

    kind = "video"

    def __post_init__(self):
        if self.fps not in CAMERA_FRAME_RATES:
            raise ValueError(f"fps must be one of {CAMERA_FRAME_RATES}, got {self.fps}")
        if self.frame_size_bits <= 0 or self.packets_per_frame < 1:
            raise ValueError("frame size and packets per frame must be positive")

    @property
    def mean_rate_kbps(self) -> float:
        return self.fps * self.frame_size_bits / 1000.0

    @property
    def period_s(self) -> float:
        return 1.0 / self.fps


@dataclass(frozen=True)
class FtpProfile:
    rate_kbps: float = 1000.0
    packet_bits: float = 12000.0

    kind = "ftp"

    def __post_init__(self):
        if self.rate_kbps <= 0 or self.packet_bits <= 0:
            raise ValueError("ftp rate and packet size must be positive")

    @property
    def mean_rate_kbps(self) -> float:
        return self.rate_kbps


@dataclass(frozen=True)
class HttpProfile:
    """On/off source: sends at `peak_kbps` during exponentially long on periods."""

    peak_kbps: float = 1000.0
    mean_on_s: float = 1.0
    mean_off_s: float = 1.0
    packet_bits: float = 12000.0

    kind = "http"

    def __post_init__(self):
        if min(self.peak_kbps, self.mean_on_s, self.mean_off_s, self.packet_bits) <= 0:
            raise ValueError("http parameters must be positive")

    @property
    def mean_rate_kbps(self) -> float:
        return self.peak_kbps * self.mean_on_s / (self.mean_on_s + self.mean_off_s)


Profile = VideoProfile | FtpProfile | HttpProfile


def emissions(
    profile: Profile, start_s: float, rng: np.random.Generator | None = None
) -> Iterator[tuple[float, int | None, float]]:
    """Yield (send time, frame index or None, size bits) forever, in time order."""
    if isinstance(profile, VideoProfile):
        size = profile.frame_size_bits / profile.packets_per_frame
        i = 0
        while True:
            t = start_s + i * profile.period_s
            for _ in range(profile.packets_per_frame):
                yield t, i, size
            i += 1
    elif isinstance(profile, FtpProfile):
        gap = profile.packet_bits / (profile.rate_kbps * 1000.0)
        i = 0
        while True:
            yield start_s + i * gap, None, profile.packet_bits
            i += 1
    elif isinstance(profile, HttpProfile):
        if rng is None:
            raise ValueError("http source needs a seeded generator")
        gap = profile.packet_bits / (profile.peak_kbps * 1000.0)
        t = start_s
        while True:
            on_end = t + rng.exponential(profile.mean_on_s)
            while t < on_end:
                yield t, None, profile.packet_bits
                t += gap
            t = on_end + rng.exponential(profile.mean_off_s)
    else:
        raise TypeError(f"unknown profile {profile!r}")
