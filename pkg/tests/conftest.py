import numpy as np
import pytest

import zdlab as z


@pytest.fixture
def m() -> z.PayoffMatrix:
    return z.DEFAULT_PAYOFFS


@pytest.fixture
def random_strategies():
    """Factory for seeded batches of random memory-one strategies."""

    def make(n: int, seed: int = 0) -> list[z.MemoryOneStrategy]:
        rng = np.random.Generator(np.random.PCG64(seed))
        return [z.MemoryOneStrategy(tuple(rng.random(4))) for _ in range(n)]

    return make
