"""Hierarchical seeding.

All randomness is derived from a single 64-bit run seed by hashing the
coordinates of the decision (V-cycle, level, round, PE, ...) with
SplitMix64.  Streams are drawn from numpy's Philox4x64 counter-based
generator so they are identical on every platform.
"""
import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(seed: int, *parts: int) -> int:
    h = splitmix64(int(seed) & _MASK)
    for p in parts:
        h = splitmix64(h ^ (int(p) & _MASK))
    return h


def make_rng(seed: int, *parts: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(derive_seed(seed, *parts)))
