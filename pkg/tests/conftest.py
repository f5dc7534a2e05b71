import numpy as np
import pytest


class StubRng:
    """Drop-in for RngStream with scripted uniform draws (cycled)."""

    def __init__(self, draws):
        self.draws = list(draws)
        self.k = 0
        self.seed = 0

    def _next(self):
        value = self.draws[self.k % len(self.draws)]
        self.k += 1
        return value

    def uniform(self, size=None):
        if size is None:
            return self._next()
        if isinstance(size, tuple):
            flat = [self._next() for _ in range(int(np.prod(size)))]
            return np.asarray(flat).reshape(size)
        return np.asarray([self._next() for _ in range(size)])


@pytest.fixture
def stub_rng():
    return StubRng
