"""Affinity graphs over class-center nodes and maximal-clique enumeration.

A first-order graph connects unit node features whose cosine similarity
strictly exceeds a threshold. The second-order graph keeps only first-order
edges that also lie on a 2-path, which prunes redundant edges when centers
crowd together. The threshold grows linearly with the number of samples
tested, capped at 1.

Clique enumeration is Bron-Kerbosch with pivoting, with the outer loop over
a degeneracy ordering. Output is deterministic: cliques are emitted as
index-sorted tuples, sorted lexicographically. Isolated nodes come out as
singleton cliques, so the cliques always cover the node set.

Construction and enumeration are pure given their inputs; the two feature
spaces' graphs can be built and searched in parallel. Search within one
graph is single-threaded.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import Space
from .errors import NonUnitNode, WrongOrder


class GraphOrder(enum.Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass
class AffinityGraph:
    node_features: np.ndarray
    adjacency: np.ndarray
    order: GraphOrder
    space: Space
    threshold: float

    @property
    def n_nodes(self) -> int:
        return self.adjacency.shape[0]


@dataclass
class ThresholdSchedule:
    """Affinity threshold min(1, t0 + growth * i) after i samples tested."""

    t0: float
    growth: float
    i: int = 0

    def current(self) -> float:
        return min(1.0, self.t0 + self.growth * self.i)


def advance_threshold(sched: ThresholdSchedule) -> float:
    """Return the threshold for the sample being processed, then step the counter."""
    value = sched.current()
    sched.i += 1
    return value


def build_fog(features: np.ndarray, threshold: float, space: Space) -> AffinityGraph:
    """First-order graph: edge (i, j) iff cosine(F_i, F_j) > threshold, i != j."""
    features = np.asarray(features, dtype=np.float64)
    norms = np.linalg.norm(features, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-4):
        bad = int(np.argmax(np.abs(norms - 1.0)))
        raise NonUnitNode(f"node {bad} has norm {norms[bad]:.6f}")
    sims = features @ features.T
    upper = np.triu(sims > threshold, k=1)
    adj = upper | upper.T
    return AffinityGraph(
        node_features=features,
        adjacency=adj,
        order=GraphOrder.FIRST,
        space=space,
        threshold=threshold,
    )


def build_sog(fog: AffinityGraph) -> AffinityGraph:
    """Second-order graph: FOG edges that also have a completing 2-path.

    Elementwise product of the adjacency with its boolean square, so an edge
    (i, j) survives iff some k is adjacent to both endpoints. The zero
    diagonal guarantees k differs from i and j.
    """
    if fog.order is not GraphOrder.FIRST:
        raise WrongOrder("second-order graph must be derived from a first-order graph")
    a = fog.adjacency.astype(np.int64)
    two_path = (a @ a) > 0
    adj = fog.adjacency & two_path
    np.fill_diagonal(adj, False)
    return AffinityGraph(
        node_features=fog.node_features,
        adjacency=adj,
        order=GraphOrder.SECOND,
        space=fog.space,
        threshold=fog.threshold,
    )


@dataclass
class CliqueSet:
    """Maximal cliques of a source graph, as lexicographically sorted index tuples."""

    cliques: list[tuple[int, ...]]
    source: str = ""

    def __len__(self) -> int:
        return len(self.cliques)

    def covered_nodes(self) -> set[int]:
        return set().union(*map(set, self.cliques)) if self.cliques else set()


def _degeneracy_order(neighbors: list[set[int]]) -> list[int]:
    """Repeatedly remove a minimum-degree vertex; ties go to the smaller index."""
    n = len(neighbors)
    degree = [len(nb) for nb in neighbors]
    removed = [False] * n
    order: list[int] = []
    for _ in range(n):
        v = min((u for u in range(n) if not removed[u]), key=lambda u: (degree[u], u))
        removed[v] = True
        order.append(v)
        for w in neighbors[v]:
            if not removed[w]:
                degree[w] -= 1
    return order


def _bron_kerbosch_pivot(
    r: set[int],
    p: set[int],
    x: set[int],
    neighbors: list[set[int]],
    out: list[tuple[int, ...]],
) -> None:
    if not p and not x:
        out.append(tuple(sorted(r)))
        return
    pivot = max(p | x, key=lambda u: (len(p & neighbors[u]), -u))
    for v in sorted(p - neighbors[pivot]):
        _bron_kerbosch_pivot(
            r | {v}, p & neighbors[v], x & neighbors[v], neighbors, out
        )
        p.remove(v)
        x.add(v)


def maximal_cliques(graph: AffinityGraph) -> CliqueSet:
    """Enumerate all maximal cliques of the graph's adjacency."""
    adj = graph.adjacency
    n = adj.shape[0]
    neighbors = [set(np.flatnonzero(adj[v]).tolist()) for v in range(n)]
    order = _degeneracy_order(neighbors)
    pos = {v: idx for idx, v in enumerate(order)}
    out: list[tuple[int, ...]] = []
    for v in order:
        later = {w for w in neighbors[v] if pos[w] > pos[v]}
        earlier = neighbors[v] - later
        _bron_kerbosch_pivot({v}, later, earlier, neighbors, out)
    out.sort()
    return CliqueSet(cliques=out, source=f"{graph.space.value}-{graph.order.value}")
