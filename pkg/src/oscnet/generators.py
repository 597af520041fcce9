"""Deterministic graph generators used by the CLI and the test suites.

All undirected families are emitted as symmetric digraphs (both directions
carry the same weight).
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidParams
from .graph import WeightedDigraph, build_graph, complete_graph


def _symmetric(n, pairs) -> WeightedDigraph:
    edges = []
    for i, j, w in pairs:
        edges.append((i, j, w))
        edges.append((j, i, w))
    return build_graph(n, edges)


def path_graph(n: int, w: float = 1.0) -> WeightedDigraph:
    if n < 2:
        raise InvalidParams("path needs n >= 2")
    return _symmetric(n, [(i, i + 1, w) for i in range(n - 1)])


def cycle_graph(n: int, w: float = 1.0) -> WeightedDigraph:
    if n < 3:
        raise InvalidParams("cycle needs n >= 3")
    return _symmetric(n, [(i, (i + 1) % n, w) for i in range(n)])


def star_graph(n: int, w: float = 1.0) -> WeightedDigraph:
    if n < 2:
        raise InvalidParams("star needs n >= 2")
    return _symmetric(n, [(0, i, w) for i in range(1, n)])


def two_cluster_graph(
    sizes: tuple[int, int],
    intra: float = 1.0,
    bridge: float = 0.1,
    bridges: int = 2,
    chord_prob: float = 0.3,
    seed: int | None = 0,
) -> WeightedDigraph:
    """Two sparse clusters (ring plus random chords) joined by weak bridges.

    Mirrors the "two clusters about to polarize" topology: intra-cluster links
    weigh ``intra``, the ``bridges`` cross links weigh ``bridge``.
    """
    if len(sizes) != 2 or min(sizes) < 3:
        raise InvalidParams("two-cluster needs two sizes, each >= 3")
    if bridges < 1 or bridges > sizes[0] * sizes[1]:
        raise InvalidParams(f"bridges must be in [1, {sizes[0] * sizes[1]}]")
    rng = np.random.default_rng(seed)
    pairs = []
    offset = 0
    for size in sizes:
        members = range(offset, offset + size)
        ring = {(offset + k, offset + (k + 1) % size) for k in range(size)}
        ring = {tuple(sorted(p)) for p in ring}
        for i in members:
            for j in members:
                if i < j and (i, j) not in ring and rng.random() < chord_prob:
                    ring.add((i, j))
        pairs += [(i, j, intra) for i, j in sorted(ring)]
        offset += size
    left = np.arange(sizes[0])
    right = np.arange(sizes[0], sizes[0] + sizes[1])
    cross = [(int(i), int(j)) for i in left for j in right]
    picks = rng.choice(len(cross), size=bridges, replace=False)
    pairs += [(*cross[k], bridge) for k in sorted(picks)]
    return _symmetric(sum(sizes), pairs)


def random_graph(
    n: int,
    p: float = 0.3,
    wmin: float = 0.5,
    wmax: float = 2.0,
    directed: bool = False,
    seed: int | None = 0,
    connected: bool = True,
) -> WeightedDigraph:
    """Erdos-Renyi style graph with uniform random weights.

    With ``connected=True`` a random spanning path (both directions) is laid
    down first, so every node has positive out-degree.
    """
    if n < 2 or not 0 <= p <= 1 or not 0 < wmin <= wmax:
        raise InvalidParams("random graph needs n >= 2, 0 <= p <= 1, 0 < wmin <= wmax")
    rng = np.random.default_rng(seed)
    weights: dict[tuple[int, int], float] = {}

    def weight():
        return float(rng.uniform(wmin, wmax))

    if connected:
        order = rng.permutation(n)
        for a, b in zip(order[:-1], order[1:]):
            a, b = int(a), int(b)
            w = weight()
            weights[(a, b)] = w
            weights[(b, a)] = w if not directed else weight()
    for i in range(n):
        for j in range(n):
            if i == j or (i, j) in weights:
                continue
            if not directed and j < i:
                continue
            if rng.random() < p:
                w = weight()
                weights[(i, j)] = w
                if not directed:
                    weights[(j, i)] = w
    return build_graph(n, [(i, j, w) for (i, j), w in weights.items()])


def generate(kind: str, **params) -> WeightedDigraph:
    kinds = {
        "path": path_graph,
        "cycle": cycle_graph,
        "complete": complete_graph,
        "star": star_graph,
        "two-cluster": two_cluster_graph,
        "random": random_graph,
    }
    if kind not in kinds:
        raise InvalidParams(f"unknown graph kind {kind!r}")
    return kinds[kind](**params)
