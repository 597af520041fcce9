"""Weighted digraphs, their Laplacian family, and fragmentation.

Node indices are 0-based. Kronecker conventions elsewhere in the package
assume the matrices built here are indexed the same way as the nodes.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DuplicateEdge,
    IndexOutOfRange,
    InvalidParams,
    InvalidSize,
    InvalidWeight,
    SelfLoop,
    ValidationError,
    ZeroOutDegree,
)

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class WeightedDigraph:
    """Immutable weighted directed graph.

    Edges are stored sorted by (source, target); weights are strictly positive.
    Build instances through :func:`build_graph` so the invariants are checked.
    """

    n: int
    edges: tuple[Edge, ...]

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j, w in self.edges:
            A[i, j] = w
        return A

    def out_degrees(self) -> np.ndarray:
        d = np.zeros(self.n)
        for i, _, w in self.edges:
            d[i] += w
        return d

    def is_symmetric(self) -> bool:
        lookup = {(i, j): w for i, j, w in self.edges}
        return all(lookup.get((j, i)) == w for (i, j), w in lookup.items())

    def subgraph(self, nodes: Sequence[int]) -> "WeightedDigraph":
        """Induced subgraph, relabelled so that ``nodes[k]`` becomes node ``k``."""
        index = {v: k for k, v in enumerate(nodes)}
        edges = [
            (index[i], index[j], w)
            for i, j, w in self.edges
            if i in index and j in index
        ]
        return build_graph(len(nodes), edges)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [[i, j, w] for i, j, w in self.edges]}

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def build_graph(n: int, edges: Iterable[Sequence]) -> WeightedDigraph:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidSize(f"node count must be a positive integer, got {n!r}")
    n = int(n)
    seen: dict[tuple[int, int], float] = {}
    for edge in edges:
        if len(edge) != 3:
            raise InvalidParams(f"edge must be (source, target, weight), got {edge!r}")
        i, j, w = edge
        if int(i) != i or int(j) != j:
            raise IndexOutOfRange(f"edge endpoints must be integers, got {edge!r}")
        i, j, w = int(i), int(j), float(w)
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"edge ({i}, {j}) outside [0, {n})")
        if i == j:
            raise SelfLoop(f"self-loop at node {i}")
        if not math.isfinite(w) or w < 0:
            raise InvalidWeight(f"edge ({i}, {j}) has invalid weight {w!r}")
        if (i, j) in seen:
            raise DuplicateEdge(f"duplicate edge ({i}, {j})")
        seen[(i, j)] = w
    canonical = tuple(sorted((i, j, w) for (i, j), w in seen.items() if w > 0))
    return WeightedDigraph(n, canonical)


def complete_graph(n: int, w: float = 1.0) -> WeightedDigraph:
    if n < 2:
        raise InvalidSize(f"complete graph needs n >= 2, got {n}")
    if not w > 0:
        raise InvalidWeight(f"clique weight must be positive, got {w}")
    return build_graph(n, [(i, j, w) for i in range(n) for j in range(n) if i != j])


@dataclass(frozen=True)
class LaplacianBundle:
    """A, D, L plus the semi-normalized H and normalized N of one graph."""

    graph: WeightedDigraph
    A: np.ndarray
    D: np.ndarray
    L: np.ndarray
    H: np.ndarray
    N: np.ndarray

    @property
    def degrees(self) -> np.ndarray:
        return np.diag(self.D).copy()

    @property
    def sqrt_D(self) -> np.ndarray:
        return np.diag(np.sqrt(self.degrees))

    @property
    def inv_sqrt_D(self) -> np.ndarray:
        return np.diag(1.0 / np.sqrt(self.degrees))


def laplacian_matrix(g: WeightedDigraph) -> np.ndarray:
    """L = D - A, defined for any graph (isolated nodes give zero rows)."""
    A = g.adjacency()
    return np.diag(A.sum(axis=1)) - A


def laplacian_bundle(g: WeightedDigraph) -> LaplacianBundle:
    A = g.adjacency()
    d = A.sum(axis=1)
    zero = np.flatnonzero(d <= 0)
    if zero.size:
        raise ZeroOutDegree(int(zero[0]))
    D = np.diag(d)
    L = D - A
    s = 1.0 / np.sqrt(d)
    H = s[:, None] * L
    N = s[:, None] * L * s[None, :]
    return LaplacianBundle(g, A, D, L, H, N)


def weakly_connected_components(g: WeightedDigraph) -> list[tuple[int, ...]]:
    """Components ignoring edge direction, ordered by smallest member."""
    if g.num_edges:
        rows, cols, _ = zip(*g.edges)
    else:
        rows, cols = (), ()
    adj = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
    _, labels = connected_components(adj, directed=True, connection="weak")
    groups: dict[int, list[int]] = {}
    for node, label in enumerate(labels):
        groups.setdefault(int(label), []).append(node)
    return sorted((tuple(v) for v in groups.values()), key=lambda c: c[0])


@dataclass(frozen=True)
class FragmentationResult:
    components: list[tuple[int, ...]]
    cut_edges: list[Edge]
    completed_graph: WeightedDigraph
    clique_weight: float
    singletons: list[int] = field(default_factory=list)


def fragment(g: WeightedDigraph, threshold: float, clique_weight: float = 1.0) -> FragmentationResult:
    """Cut every edge lighter than ``threshold`` and turn each remaining
    weak component into a uniform-weight complete digraph.

    A threshold of 0 cuts nothing.
    """
    if not threshold >= 0:
        raise InvalidParams(f"threshold must be >= 0, got {threshold}")
    if not clique_weight > 0:
        raise InvalidWeight(f"clique weight must be positive, got {clique_weight}")
    kept = [e for e in g.edges if e[2] >= threshold]
    cut = [e for e in g.edges if e[2] < threshold]
    components = weakly_connected_components(WeightedDigraph(g.n, tuple(kept)))
    completed = [
        (i, j, clique_weight)
        for comp in components
        for i in comp
        for j in comp
        if i != j
    ]
    return FragmentationResult(
        components=components,
        cut_edges=cut,
        completed_graph=build_graph(g.n, completed),
        clique_weight=float(clique_weight),
        singletons=[c[0] for c in components if len(c) == 1],
    )


# --- file formats -----------------------------------------------------------

def graph_from_dict(data: dict) -> WeightedDigraph:
    try:
        return build_graph(data["n"], data["edges"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed graph object: {exc}") from exc


def parse_edgelist(text: str) -> WeightedDigraph:
    """Parse the text format: first data line is ``n``, then ``i j w`` lines.

    Blank lines and ``#`` comments are ignored.
    """
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or len(lines[0]) != 1:
        raise ValidationError("edge list must start with a line holding the node count")
    try:
        n = int(lines[0][0])
        edges = []
        for ln in lines[1:]:
            if len(ln) != 3:
                raise ValidationError(f"expected 'i j w', got {' '.join(ln)!r}")
            edges.append((int(ln[0]), int(ln[1]), float(ln[2])))
    except ValueError as exc:
        raise ValidationError(f"malformed edge list: {exc}") from exc
    return build_graph(n, edges)


def format_edgelist(g: WeightedDigraph) -> str:
    out = [str(g.n)]
    out += [f"{i} {j} {w!r}" for i, j, w in g.edges]
    return "\n".join(out) + "\n"


def load_graph(path: str | Path) -> WeightedDigraph:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: {exc}") from exc
        return graph_from_dict(data)
    return parse_edgelist(text)


def dump_graph(g: WeightedDigraph, path: str | Path) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(g.to_dict(), sort_keys=True) + "\n")
    else:
        path.write_text(format_edgelist(g))
