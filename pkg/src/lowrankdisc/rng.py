"""Seeded randomness for the whole package.

All random choices flow from one 64-bit seed through a counter-based
generator (Philox), so identical seeds give identical results across
platforms and regardless of how work is split between workers.  Independent
streams are derived from integer tags, e.g. generator(seed, STREAM_ROUND, i)
for rounding trial i.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# stream tags; keep stable, they are part of reproducibility
STREAM_GEN = 0        # matrix generators
STREAM_ROUND = 1      # hyperplane rounding trials
STREAM_SEARCH = 2     # local-search restarts


def generator(seed: int, *stream: int) -> np.random.Generator:
    """Return a Philox-backed generator for (seed, stream...)."""
    ss = np.random.SeedSequence(entropy=int(seed) & _MASK64,
                                spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))
