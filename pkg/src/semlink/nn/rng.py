"""Seeded, portable random streams.

All randomness in the package flows through PCG64 generators derived
from a single run seed via SeedSequence spawn keys, so independent
consumers (layer init, dropout masks, data shuffles, negative sampling)
get non-overlapping streams and every run is bit-reproducible.

Spawn-key namespaces used by this package:
  (layer_index, 0)  parameter initialization of layer layer_index
  (layer_index, 1)  dropout mask stream of layer layer_index
  (SHUFFLE_SPACE,)            train/validation split permutation
  (SHUFFLE_SPACE, 1 + epoch)  per-epoch minibatch shuffle
  (SAMPLING_SPACE, ...)       negative sampling during NTL training
"""

import numpy as np

SHUFFLE_SPACE = 1_000_000
SAMPLING_SPACE = 2_000_000


def stream(seed: int, *spawn_key: int) -> np.random.Generator:
    """A PCG64 generator at (seed, spawn_key)."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(spawn_key))
    return np.random.Generator(np.random.PCG64(ss))
