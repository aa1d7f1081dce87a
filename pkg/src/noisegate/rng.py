"""Deterministic seeded randomness for experiment reproducibility.

Input bit streams use a splitmix64 generator so that the exact bit
sequences are reproducible from the integer seed alone, independent of
any numpy version or platform.  The update rule is part of the tool's
external interface and is frozen here:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9  mod 2^64
    z <- (z xor (z >> 27)) * 0x94D049BB133111EB  mod 2^64
    output <- z xor (z >> 31)

One experiment seed is expanded into per-input substreams in a fixed
order (see `derive_input_streams`): first a bit-stream seed for every
input port, then a noise seed for every input port.  Gaussian noise
itself is drawn from numpy's PCG64 generator keyed by the derived noise
seed; the derivation chain keeps the whole experiment a pure function
of the config.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """64-bit splitmix generator; the reference stream for input bits."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_bit(self) -> int:
        return self.next_u64() >> 63


def bitstream(seed: int, count: int) -> np.ndarray:
    """Return `count` bits (uint8), bit i = top bit of the i-th splitmix64 draw."""
    gen = SplitMix64(seed)
    return np.array([gen.next_bit() for _ in range(count)], dtype=np.uint8)


def derive_input_streams(seed: int, n_inputs: int) -> list[tuple[int, int]]:
    """Expand an experiment seed into (bit_seed, noise_seed) per input port.

    Draw order is fixed: n_inputs bit seeds first, then n_inputs noise
    seeds, all from one splitmix64 stream seeded with `seed`.
    """
    master = SplitMix64(seed)
    bit_seeds = [master.next_u64() for _ in range(n_inputs)]
    noise_seeds = [master.next_u64() for _ in range(n_inputs)]
    return list(zip(bit_seeds, noise_seeds))


def gaussian_noise(seed: int, sigma: float, count: int) -> np.ndarray:
    """Deterministic Gaussian samples (numpy PCG64 keyed by `seed`)."""
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, sigma, count)
