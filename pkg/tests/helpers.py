"""Shared test oracles, independent of the library's own algorithms."""

from __future__ import annotations

import numpy as np

from cliqueadapt.core import Space
from cliqueadapt.graph import AffinityGraph, GraphOrder


def graph_from_adjacency(adj: np.ndarray) -> AffinityGraph:
    """Wrap a boolean adjacency in a graph object (features unused by clique search)."""
    n = adj.shape[0]
    return AffinityGraph(
        node_features=np.eye(n),
        adjacency=adj.astype(bool),
        order=GraphOrder.FIRST,
        space=Space.CSS,
        threshold=0.0,
    )


def random_adjacency(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return upper | upper.T


def brute_force_maximal_cliques(adj: np.ndarray) -> set[tuple[int, ...]]:
    """Enumerate all 2^n subsets, keep complete ones, filter to maximal.

    A subset is complete iff every member is adjacent to every other member;
    it is maximal iff the common neighborhood of its members adds no outside
    vertex. Bitmask arithmetic keeps n <= 12 fast.
    """
    n = adj.shape[0]
    nbr = [int(sum(1 << u for u in np.flatnonzero(adj[v]))) for v in range(n)]
    result: set[tuple[int, ...]] = set()
    full = (1 << n) - 1
    for mask in range(1, 1 << n):
        complete = True
        common = full
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            if (mask & ~(1 << v)) & ~nbr[v]:
                complete = False
                break
            common &= nbr[v]
        if complete and not (common & ~mask):
            result.add(tuple(v for v in range(n) if mask >> v & 1))
    return result


def resimulate_cache(
    sequence: list[tuple[float, int]], capacity: int
) -> list[tuple[float, int]]:
    """Directly re-simulate the three-branch admission rule on one class.

    sequence holds (entropy, arrival_index) pairs in arrival order; returns
    the retained pairs. Written against the rule as stated, list-based, with
    the oldest entry evicted on max-entropy ties.
    """
    kept: list[tuple[float, int]] = []
    for entropy, arrival in sequence:
        if len(kept) < capacity:
            kept.append((entropy, arrival))
            continue
        max_entropy = max(e for e, _ in kept)
        if entropy < max_entropy:
            oldest = min(
                (pair for pair in kept if pair[0] == max_entropy), key=lambda p: p[1]
            )
            kept.remove(oldest)
            kept.append((entropy, arrival))
    return kept


def random_unit_rows(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    m = rng.standard_normal((n, dim))
    return m / np.linalg.norm(m, axis=1, keepdims=True)
