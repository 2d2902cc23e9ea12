import random

import pytest

from digraphsub.core import Digraph, build_digraph


def rand_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    """Random digraph: each ordered pair becomes an arc with probability p."""
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return build_digraph(n, arcs)


def rand_out_digraph(rng: random.Random, n: int, k: int) -> Digraph:
    """Every vertex gets exactly k distinct random out-neighbours."""
    if k > n - 1:
        raise ValueError("k too large")
    arcs = []
    for u in range(n):
        others = [v for v in range(n) if v != u]
        for v in rng.sample(others, k):
            arcs.append((u, v))
    return build_digraph(n, arcs)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xD1F)
