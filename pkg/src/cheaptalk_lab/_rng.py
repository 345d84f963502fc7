"""Deterministic chunked random streams for reproducible Monte Carlo.

Work is split into fixed-size chunks, each with its own generator spawned
from the root seed.  The partition depends only on (seed, total), never on
how chunks are scheduled, so reports are bit-identical across worker counts.
"""

from __future__ import annotations

import numpy as np

CHUNK_SIZE = 1 << 15


def chunked_generators(entropy, total: int, chunk_size: int = CHUNK_SIZE
                       ) -> list[tuple[int, np.random.Generator]]:
    """Ordered (count, generator) pairs covering ``total`` draws."""
    if total < 1:
        raise ValueError("total must be >= 1")
    if isinstance(entropy, np.random.SeedSequence):
        root = entropy
    else:
        root = np.random.SeedSequence(entropy)
    n_chunks = (total + chunk_size - 1) // chunk_size
    children = root.spawn(n_chunks)
    out = []
    done = 0
    for child in children:
        count = min(chunk_size, total - done)
        done += count
        out.append((count, np.random.default_rng(child)))
    return out
