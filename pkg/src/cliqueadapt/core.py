"""Deterministic math kernels shared by every other module.

Feature vectors are plain float64 numpy arrays. The engine keeps all stored
features unit-normalized at ingestion, so cosine similarity between stored
features reduces to a dot product; :func:`cosine` still divides by norms so
it is a true cosine for arbitrary inputs.

Prediction vectors are length-K nonnegative arrays. Softmax outputs sum to 1;
masked or fused vectors generally do not, and only genuine probability
vectors may be fed to :func:`entropy`.

All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import (
    DimensionMismatch,
    NonPositiveTemperature,
    NotAProbability,
    ZeroVector,
)


class Space(enum.Enum):
    """The two feature spaces the engine operates in.

    CSS: the shared space holding text features and coarse visual centers.
    AFV: the auxiliary fine-grained visual space.
    """

    CSS = "css"
    AFV = "afv"


def normalize(v: np.ndarray) -> np.ndarray:
    """Scale ``v`` to unit Euclidean norm, preserving direction.

    Raises ZeroVector if every entry is zero.
    """
    v = np.asarray(v, dtype=np.float64)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ZeroVector("cannot normalize an all-zero vector")
    return v / n


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity between two nonzero vectors of equal length."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cosine operands differ in shape: {a.shape} vs {b.shape}")
    denom = float(np.linalg.norm(a)) * float(np.linalg.norm(b))
    return float(np.dot(a, b) / denom)


def softmax(logits: np.ndarray, temperature: float) -> np.ndarray:
    """Temperature softmax with max-subtraction for numerical stability."""
    if not temperature > 0:
        raise NonPositiveTemperature(f"temperature must be > 0, got {temperature}")
    z = np.asarray(logits, dtype=np.float64) / temperature
    z = z - np.max(z)
    e = np.exp(z)
    return e / np.sum(e)


def entropy(p: np.ndarray) -> float:
    """Shannon entropy of a probability vector, in nats. 0*log(0) counts as 0."""
    p = np.asarray(p, dtype=np.float64)
    if np.any(p < 0):
        raise NotAProbability("negative entries")
    total = float(np.sum(p))
    if abs(total - 1.0) > 1e-4:
        raise NotAProbability(f"entries sum to {total}, not 1")
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def adaptation_fn(similarity: np.ndarray | float, alpha: float) -> np.ndarray | float:
    """Map similarity x to exp(-alpha * (1 - x)).

    Equals 1 at x = 1 and is strictly increasing in x for alpha > 0; this is
    the weighting applied to cache similarities before label aggregation.
    Accepts scalars or arrays elementwise.
    """
    x = np.asarray(similarity, dtype=np.float64)
    out = np.exp(-alpha * (1.0 - x))
    return float(out) if out.ndim == 0 else out
