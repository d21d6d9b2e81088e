"""Deterministic RNG derivation.

Every random draw in the package flows from a 64-bit seed through numpy
SeedSequence spawning, so a rerun with the same seed reproduces identical
bytes no matter how work is scheduled across processes.
"""

import numpy as np


def seed_sequence(seed: int, *keys: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Fresh PCG64 generator for (seed, keys)."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *keys)))


def derive_seed(seed: int, *keys: int) -> int:
    """Collapse (seed, keys) into a fresh 64-bit seed."""
    return int(seed_sequence(seed, *keys).generate_state(1, dtype=np.uint64)[0])
