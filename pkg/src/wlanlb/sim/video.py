"""Synthetic frame sequences and freeze-frame concealment."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..metrics import Frame

MID_GRAY = 128


def generate_frames(pattern_seed: int, count: int, width: int, height: int) -> list[Frame]:
    """Shifting ramp: sample(x, y, i) = (x + y + 7 i + pattern_seed) mod 256."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if width < 1 or height < 1:
        raise ValueError("frame dimensions must be positive")
    y, x = np.mgrid[0:height, 0:width]
    base = x + y + pattern_seed
    return [Frame(((base + 7 * i) % 256).astype(np.uint8)) for i in range(count)]


def conceal(reference: Sequence[Frame], delivered: Sequence[bool]) -> list[Frame]:
    """Repeat the last delivered frame over losses; mid-gray before the first delivery."""
    if len(reference) != len(delivered):
        raise ValueError("one delivery flag per frame required")
    out = []
    last = None
    for frame, ok in zip(reference, delivered):
        if ok:
            last = frame
        elif last is None:
            last_gray = Frame(np.full(frame.samples.shape, MID_GRAY, dtype=np.uint8))
            out.append(last_gray)
            continue
        out.append(last)
    return out
