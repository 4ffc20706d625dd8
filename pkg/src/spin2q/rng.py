"""Deterministic counter-derived random streams.

All stochastic code takes an explicit ``numpy.random.Generator``. Parallel
shots derive independent streams from one root seed and integer indices, so
results are reproducible regardless of execution order or thread count.
"""

from __future__ import annotations

import numpy as np

__all__ = ["root_generator", "derive", "derive_many"]


def root_generator(seed: int) -> np.random.Generator:
    """Philox generator for a 64-bit root seed."""
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def derive(seed: int, *indices: int) -> np.random.Generator:
    """Stream for (seed, i0, i1, ...), independent across distinct index tuples."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(i) for i in indices))
    return np.random.Generator(np.random.Philox(ss))


def derive_many(seed: int, n: int, *prefix: int) -> list[np.random.Generator]:
    """n streams (seed, *prefix, 0..n-1)."""
    return [derive(seed, *prefix, i) for i in range(n)]
