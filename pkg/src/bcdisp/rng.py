"""Counter-based random streams keyed by (seed, purpose tag, index).

Every trial, codebook batch and RCU sample owns a Philox stream whose key
comes from the seed and whose counter encodes the tag and index, so draws
never depend on how work is split across processes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

TAG_CODEBOOK = 1
TAG_TRIAL = 2
TAG_RCU = 3
TAG_FADING = 4


@lru_cache(maxsize=64)
def _key(seed: int) -> tuple[int, int]:
    state = np.random.SeedSequence(seed).generate_state(2, np.uint64)
    return int(state[0]), int(state[1])


def stream(seed: int, tag: int, index: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    if index < 0:
        raise ValueError("stream index must be nonnegative")
    key = np.array(_key(int(seed)), dtype=np.uint64)
    counter = np.array([0, 0, index, tag], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))
