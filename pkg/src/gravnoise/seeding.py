"""Deterministic substream seed derivation.

Realization seeds are a pure function of (master seed, index) through one
round of splitmix64, so that independent implementations can reproduce the
exact substreams:

    z = (master + index * 0x9E3779B97F4A7C15) mod 2^64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB   mod 2^64
    z = z ^ (z >> 31)
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def substream_seed(master_seed: int, index: int) -> int:
    """64-bit seed for substream ``index`` of ``master_seed``."""
    if index < 0:
        raise ValueError("substream index must be nonnegative")
    z = (int(master_seed) + index * _GAMMA) & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def substream_seeds(master_seed: int, count: int) -> list[int]:
    """Seeds for substreams 0 .. count-1."""
    return [substream_seed(master_seed, i) for i in range(count)]
