import numpy as np
import pytest

from gpaley.graphs import Graph


def random_graph(rng: np.random.Generator, n: int, density: float = 0.5) -> Graph:
    upper = np.triu(rng.random((n, n)) < density, 1)
    return Graph(upper | upper.T)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
