"""Hyper-classes: clique centroids ranked by affinity to a test feature.

Each maximal clique becomes one hyper-class whose center is the unit-
normalized mean of its member node features. For a test feature, cliques
are ranked by cosine to their centers; the top ceil(r * m) cliques are the
inliers and their member nodes form a boolean mask over the node set. The
remaining nodes are treated as outliers by the masked predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import normalize
from .errors import DimensionMismatch, EmptyCliqueSet
from .graph import CliqueSet


@dataclass
class HyperClass:
    member_nodes: tuple[int, ...]
    center: np.ndarray


def make_hyperclasses(cliques: CliqueSet, features: np.ndarray) -> list[HyperClass]:
    """One hyper-class per clique: unit-normalized centroid of member features."""
    features = np.asarray(features, dtype=np.float64)
    return [
        HyperClass(member_nodes=c, center=normalize(features[list(c)].mean(axis=0)))
        for c in cliques.cliques
    ]


def rank_by_affinity(query: np.ndarray, hyper: list[HyperClass]) -> list[int]:
    """Clique indices sorted by descending cosine(query, center); ties by index."""
    query = np.asarray(query, dtype=np.float64)
    for h in hyper:
        if h.center.shape != query.shape:
            raise DimensionMismatch(
                f"query shape {query.shape} vs center shape {h.center.shape}"
            )
    qn = normalize(query)
    affinity = [float(qn @ h.center) for h in hyper]
    return sorted(range(len(hyper)), key=lambda i: (-affinity[i], i))


def select_top_r(ranked: list[int], m: int, r: float) -> list[int]:
    """First ceil(r * m) entries of the ranking, r in (0, 1]."""
    if m < 1:
        raise EmptyCliqueSet("need at least one clique to select from")
    if not 0.0 < r <= 1.0:
        raise ValueError(f"selection ratio must be in (0, 1], got {r}")
    k = math.ceil(r * m)
    return list(ranked[:k])


def build_mask(selected: list[int], cliques: CliqueSet, n_nodes: int) -> np.ndarray:
    """Boolean node mask: bit i set iff node i belongs to a selected clique."""
    mask = np.zeros(n_nodes, dtype=bool)
    for idx in selected:
        mask[list(cliques.cliques[idx])] = True
    return mask
