"""Label-keyed random substreams.

Every task (placement, one mobility step, the floods of one source in one
snapshot, ...) gets its own generator derived from the run seed and an
ordered tuple of integer labels. Streams never depend on worker identity,
so serial and parallel runs draw the same numbers.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

# first label of every stream: what the stream is used for
PLACEMENT = 0
MOBILITY = 1
FLOOD = 2
SOURCE_SAMPLE = 3
MONTE_CARLO = 4


def derive_substream(seed: int, labels: Sequence[int]) -> np.random.Generator:
    labels = tuple(int(x) for x in labels)
    if any(x < 0 for x in labels):
        raise ValueError(f"stream labels must be non-negative, got {labels}")
    ss = np.random.SeedSequence(int(seed), spawn_key=labels)
    return np.random.Generator(np.random.PCG64(ss))
