"""Deterministic 64-bit generator used for every seeded table draw.

The generator is splitmix64: a Weyl sequence with increment
0x9E3779B97F4A7C15 passed through two xor-multiply finalizer rounds.
Seeds are always explicit, never environmental, so any search or
experiment replays bit-exactly on any host.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
WEYL = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """Finalizer round mapping a 64-bit state to a 64-bit output."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Sequential form: output i is mix64(seed + (i+1)*WEYL)."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next64(self) -> int:
        self.state = (self.state + WEYL) & MASK64
        return mix64(self.state)


def stream(seed: int, count: int) -> np.ndarray:
    """First `count` outputs of SplitMix64(seed) as a uint64 array."""
    if count < 0:
        raise ValueError("negative count")
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + idx * np.uint64(WEYL)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        return z ^ (z >> np.uint64(31))
