"""Deterministic randomness: splitmix64 and a fair-bit stream on top of it.

splitmix64 uses the standard published constants, so any run is reproducible
from its 64-bit seed alone.  Per-trial streams derive as seed + trial index
pushed through a single splitmix64 step.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """The splitmix64 generator; one next_u64() per state advance."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)


class BitStream:
    """Fair bits drawn from a SplitMix64 word stream, LSB first."""

    def __init__(self, seed: int):
        self._gen = SplitMix64(seed)
        self._word = 0
        self._left = 0

    def next_bit(self) -> int:
        if self._left == 0:
            self._word = self._gen.next_u64()
            self._left = 64
        bit = self._word & 1
        self._word >>= 1
        self._left -= 1
        return bit


def derive_seed(seed: int, index: int) -> int:
    """Per-trial seed: one splitmix64 step from seed + index (mod 2^64)."""
    return SplitMix64((seed + index) & _MASK64).next_u64()
