"""Reproducible random streams.

Every stochastic routine derives its randomness from an integer seed plus a
tuple key (typically ``(sample, layer)``), so runs are bit-reproducible and
samples can be evaluated concurrently without sharing generator state.
"""

from __future__ import annotations

import numpy as np


def seed_sequence(seed: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the given seed and key tuple."""
    return np.random.default_rng(seed_sequence(seed, *key))
