"""Entropy-gated per-class bounded caches and class-center computation.

Each class owns a small store of (feature, entropy) pairs. Below capacity
every sample is admitted; at capacity a new sample displaces the single
worst (highest-entropy) cached entry only if it is more confident, so the
max entropy in a full cache never increases.

A DualCache holds one cache array per feature space and is a single-writer
structure: one adaptation stream mutates it sequentially. Snapshots are
plain arrays and may be shared across threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import adaptation_fn, normalize, softmax
from .errors import DimensionMismatch, EmptyCache, MissingQuery


@dataclass(eq=False)
class CacheEntry:
    """One admitted test feature: unit vector, its gated prediction entropy, stream position.

    Identity-compared: two entries are interchangeable only if they are the
    same object, which keeps list removal unambiguous for array payloads.
    """

    feature: np.ndarray
    entropy: float
    arrival_index: int


class InsertStatus(enum.Enum):
    INSERTED = "inserted"
    REPLACED = "replaced"
    REJECTED = "rejected"


@dataclass
class InsertResult:
    status: InsertStatus
    evicted: CacheEntry | None = None


@dataclass
class ClassCache:
    """Bounded entry store for one class in one feature space."""

    class_id: int
    capacity: int
    dim: int
    entries: list[CacheEntry] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")

    def max_entropy(self) -> float:
        if not self.entries:
            raise EmptyCache(f"class {self.class_id} cache is empty")
        return max(e.entropy for e in self.entries)

    def matrix(self) -> np.ndarray:
        """Cached features stacked by arrival order, shape (n, dim)."""
        if not self.entries:
            return np.zeros((0, self.dim))
        ordered = sorted(self.entries, key=lambda e: e.arrival_index)
        return np.stack([e.feature for e in ordered])


def consider_insert(cache: ClassCache, entry: CacheEntry) -> InsertResult:
    """Apply the three-branch admission rule to one candidate entry.

    Below capacity: insert. At capacity with entry.entropy strictly below the
    cached maximum: evict the max-entropy entry (oldest first on ties) and
    insert. Otherwise: reject. Capacity is never exceeded.
    """
    if entry.feature.shape != (cache.dim,):
        raise DimensionMismatch(
            f"entry dim {entry.feature.shape} does not match cache dim ({cache.dim},)"
        )
    if len(cache.entries) < cache.capacity:
        cache.entries.append(entry)
        return InsertResult(InsertStatus.INSERTED)
    worst = max(cache.entries, key=lambda e: (e.entropy, -e.arrival_index))
    if entry.entropy < worst.entropy:
        cache.entries.remove(worst)
        cache.entries.append(entry)
        return InsertResult(InsertStatus.REPLACED, evicted=worst)
    return InsertResult(InsertStatus.REJECTED)


def css_class_center(cache: ClassCache, query: np.ndarray, alpha: float) -> np.ndarray:
    """Query-adaptive visual class center: phi-weighted sum of cached features.

    Weights are adaptation_fn(query . feature, alpha); the weighted sum is
    unit-normalized so downstream cosine thresholds stay meaningful.
    """
    m = cache.matrix()
    if m.shape[0] == 0:
        raise EmptyCache(f"class {cache.class_id} cache is empty")
    if query.shape != (cache.dim,):
        raise DimensionMismatch(f"query dim {query.shape} vs cache dim ({cache.dim},)")
    weights = adaptation_fn(m @ query, alpha)
    return normalize(weights @ m)


def afv_class_center(
    cache: ClassCache,
    query: np.ndarray | None = None,
    mode: str = "average",
    attn_tau: float = 0.01,
    ema_decay: float = 0.1,
) -> np.ndarray:
    """Auxiliary class center from cached fine-grained features.

    average: unit-normalized arithmetic mean.
    attn_weighted: softmax(query . features / attn_tau)-weighted mean.
    ema: running average c <- (1-decay)*c + decay*e over entries in arrival
    order, initialized at the first entry.
    """
    m = cache.matrix()
    if m.shape[0] == 0:
        raise EmptyCache(f"class {cache.class_id} cache is empty")
    if mode == "average":
        return normalize(m.mean(axis=0))
    if mode == "attn_weighted":
        if query is None:
            raise MissingQuery("attn_weighted center needs a query feature")
        if query.shape != (cache.dim,):
            raise DimensionMismatch(f"query dim {query.shape} vs cache dim ({cache.dim},)")
        weights = softmax(m @ query, attn_tau)
        return normalize(weights @ m)
    if mode == "ema":
        c = m[0]
        for row in m[1:]:
            c = (1.0 - ema_decay) * c + ema_decay * row
        return normalize(c)
    raise ValueError(f"unknown AFV center mode: {mode!r}")


@dataclass
class DualCache:
    """K per-class caches for each of the two feature spaces."""

    css: list[ClassCache]
    afv: list[ClassCache]

    @classmethod
    def create(cls, n_classes: int, d1: int, d2: int, l1: int, l2: int) -> "DualCache":
        return cls(
            css=[ClassCache(class_id=i, capacity=l1, dim=d1) for i in range(n_classes)],
            afv=[ClassCache(class_id=i, capacity=l2, dim=d2) for i in range(n_classes)],
        )

    @property
    def n_classes(self) -> int:
        return len(self.css)


def space_matrices(caches: list[ClassCache], n_classes: int) -> tuple[np.ndarray, np.ndarray]:
    """Stack one space's cached features and their one-hot pseudo-labels.

    Rows are ordered by (class_id, arrival_index). Returns (features, labels)
    with shapes (n, dim) and (n, n_classes); both have zero rows when every
    cache is empty.
    """
    dim = caches[0].dim if caches else 0
    feats: list[np.ndarray] = []
    labels: list[np.ndarray] = []
    for cache in caches:
        for entry in sorted(cache.entries, key=lambda e: e.arrival_index):
            feats.append(entry.feature)
            row = np.zeros(n_classes)
            row[cache.class_id] = 1.0
            labels.append(row)
    if not feats:
        return np.zeros((0, dim)), np.zeros((0, n_classes))
    return np.stack(feats), np.stack(labels)


@dataclass
class SnapshotMatrices:
    """Stacked cache contents; pseudo_labels rows align with css_matrix rows."""

    css_matrix: np.ndarray
    afv_matrix: np.ndarray
    pseudo_labels: np.ndarray


def snapshot_matrices(dual: DualCache) -> SnapshotMatrices:
    """Stack both spaces' caches into matrices ordered by (class, arrival)."""
    k = dual.n_classes
    css_m, css_l = space_matrices(dual.css, k)
    afv_m, _ = space_matrices(dual.afv, k)
    return SnapshotMatrices(css_matrix=css_m, afv_matrix=afv_m, pseudo_labels=css_l)
