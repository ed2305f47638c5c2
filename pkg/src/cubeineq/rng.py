"""Deterministic random streams.

All randomness in the package flows through Philox, a counter-based 64-bit
generator.  A stream is identified by the pair (seed, stream); the same pair
always produces the same sample sequence on every platform, and independent
stream ids give statistically independent substreams, so Monte-Carlo batches
can be split across workers without losing reproducibility.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def stream_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for substream `stream` of the experiment keyed by `seed`."""
    key = np.array([seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
