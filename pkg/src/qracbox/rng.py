"""Deterministic, counter-based random streams.

All randomness flows from Philox 4x64 generators keyed by the pair
(seed, stream).  An experiment with N trials draws trial i from the
stream keyed (seed, i), so any trial can be replayed in isolation and
trials may run in any order, or in parallel, without changing results.
"""
from __future__ import annotations

import numpy as np


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for the Philox stream keyed (seed, stream)."""
    if not 0 <= int(seed) < 2**64:
        raise ValueError("seed must be an integer in [0, 2**64)")
    if not 0 <= int(stream) < 2**64:
        raise ValueError("stream must be an integer in [0, 2**64)")
    key = np.array([int(seed), int(stream)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
