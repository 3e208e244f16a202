"""Graphs shared by the test modules."""

import random
from functools import lru_cache

from ricci_idleness.graphkit import (
    cartesian_product,
    complete,
    cycle,
    distances_from,
    dodecahedral,
    from_edge_list,
    hypercube,
    path,
    petersen,
    star,
)

FIVE_VERTEX = [(0, 1), (0, 4), (2, 3), (0, 3), (1, 2), (4, 3)]
SEVEN_VERTEX = FIVE_VERTEX + [(5, 6), (0, 5), (1, 6)]
FIGURE_EDGE = (0, 1)

RANDOM_SEED = 20240611
RANDOM_COUNT = 200


def five_vertex():
    return from_edge_list(FIVE_VERTEX)


def seven_vertex():
    return from_edge_list(SEVEN_VERTEX)


def named_graphs():
    """Every built-in or hand-made graph the suites run on, by label."""
    out = {"K2": path(2), "P4": path(4)}
    for n in range(3, 13):
        out[f"C{n}"] = cycle(n)
    out["five_vertex"] = five_vertex()
    out["seven_vertex"] = seven_vertex()
    for n in (3, 4, 5):
        out[f"star{n}"] = star(n)
    out["K4"] = complete(4)
    out["K5"] = complete(5)
    out["Q3"] = hypercube(3)
    out["petersen"] = petersen()
    out["dodecahedral"] = dodecahedral()
    out["C3xC4"] = cartesian_product(cycle(3), cycle(4))
    out["C4xC4"] = cartesian_product(cycle(4), cycle(4))
    out["K2xC5"] = cartesian_product(path(2), cycle(5))
    return out


def is_connected(g):
    return all(d is not None for d in distances_from(g, 0))


def random_connected(rng, max_n=12):
    while True:
        n = rng.randint(3, max_n)
        q = rng.uniform(0.3, 0.6)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < q]
        g = from_edge_list(pairs, n)
        if is_connected(g):
            return g


@lru_cache(maxsize=None)
def random_graphs(count=RANDOM_COUNT, seed=RANDOM_SEED):
    rng = random.Random(seed)
    return tuple(random_connected(rng) for _ in range(count))
