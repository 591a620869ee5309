"""Seeded randomness. Every stochastic routine takes a seed or a Generator."""

from __future__ import annotations

import zlib

import numpy as np


def derive_seed(seed: int, label: str) -> np.random.SeedSequence:
    """Child seed sequence for a named stage; stable across runs and platforms."""
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFF, zlib.crc32(label.encode())])


def derive_rng(seed: int, label: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, label))


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(0 if seed is None else seed)
