"""Prediction paths: zero-shot, cache-adapted baseline, masked dual-space
predictions, and the weighted fusion that produces the final scores.

Masked probabilities are deliberately NOT renormalized after the elementwise
mask; fusion consumes them as-is so the relative magnitudes of the three
paths are preserved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import adaptation_fn, entropy, softmax
from .errors import (
    DimensionMismatch,
    EmptyAFV,
    EmptyCache,
    EmptyStream,
    MissingCenters,
)


@dataclass
class FusionWeights:
    """Nonnegative logit weights for the zero-shot, CSS, and AFV paths."""

    beta1: float = 1.0
    beta2: float = 1.0
    beta3: float = 1.0

    def __post_init__(self) -> None:
        if min(self.beta1, self.beta2, self.beta3) < 0:
            raise ValueError("fusion weights must be nonnegative")
        if max(self.beta1, self.beta2, self.beta3) <= 0:
            raise ValueError("at least one fusion weight must be positive")


@dataclass
class ViewBatch:
    """All augmented views of one test sample, one feature per space per view.

    Row 0 of each array is the un-augmented original view. selection_ratio is
    the fraction of views (lowest entropy first) the confidence gate keeps.
    """

    css: np.ndarray  # (n_views, d1)
    afv: np.ndarray  # (n_views, d2)
    selection_ratio: float = 1.0

    @property
    def n_views(self) -> int:
        return self.css.shape[0]


def zero_shot(query: np.ndarray, text_features: np.ndarray, temperature: float) -> np.ndarray:
    """Probability over classes from similarities to per-class text features."""
    query = np.asarray(query, dtype=np.float64)
    text_features = np.asarray(text_features, dtype=np.float64)
    if text_features.shape[1] != query.shape[0]:
        raise DimensionMismatch(
            f"query dim {query.shape[0]} vs text dim {text_features.shape[1]}"
        )
    return softmax(text_features @ query, temperature)


def marginal_entropy_gate(
    batch: ViewBatch, text_features: np.ndarray, temperature: float
) -> tuple[np.ndarray, float, int]:
    """Confidence-gated mean prediction over a sample's augmented views.

    Computes per-view zero-shot probabilities, keeps the ceil(R * N) views
    with the lowest per-view entropy, and averages their probability
    vectors. Returns (mean probability, its entropy, its argmax).
    """
    probs = np.stack([zero_shot(v, text_features, temperature) for v in batch.css])
    view_entropies = np.array([entropy(p) for p in probs])
    keep = max(1, math.ceil(batch.selection_ratio * batch.n_views))
    chosen = np.argsort(view_entropies, kind="stable")[:keep]
    mean_p = probs[chosen].mean(axis=0)
    return mean_p, entropy(mean_p), int(np.argmax(mean_p))


def tda_adapted(
    query: np.ndarray, cache_matrix: np.ndarray, pseudo_labels: np.ndarray, alpha: float
) -> np.ndarray:
    """Cache-adapted class scores: adaptation-weighted pseudo-label aggregation."""
    if cache_matrix.shape[0] == 0:
        raise EmptyCache("adapted prediction needs a nonempty cache")
    weights = adaptation_fn(cache_matrix @ np.asarray(query, dtype=np.float64), alpha)
    return weights @ pseudo_labels


def cache_logits_centroid_form(
    query: np.ndarray, cache_matrix: np.ndarray, pseudo_labels: np.ndarray
) -> np.ndarray:
    """Unweighted cache logits grouped through the per-class feature sums.

    Computes query @ (F^T L); column c of F^T L is the sum of cached
    features of class c, so this equals the naive grouping (query F^T) L up
    to float associativity.
    """
    class_sums = cache_matrix.T @ pseudo_labels
    return np.asarray(query, dtype=np.float64) @ class_sums


def css_prediction(
    query: np.ndarray,
    text_features: np.ndarray,
    css_centers: np.ndarray,
    mask: np.ndarray,
    temperature: float,
) -> np.ndarray:
    """Masked shared-space prediction folded back to K classes.

    Softmax over similarities to the 2K stacked nodes [text; visual centers],
    masked elementwise, then text and visual halves averaged per class. Not
    renormalized.
    """
    text_features = np.asarray(text_features, dtype=np.float64)
    css_centers = np.asarray(css_centers, dtype=np.float64)
    k, d = text_features.shape
    if css_centers.shape != (k, d):
        raise DimensionMismatch(
            f"centers shape {css_centers.shape}, expected {(k, d)}"
        )
    if np.any(~np.isfinite(css_centers)):
        raise MissingCenters("a visual center row is unset; apply the text fallback first")
    if mask.shape != (2 * k,):
        raise DimensionMismatch(f"mask length {mask.shape[0]}, expected {2 * k}")
    unified = np.vstack([text_features, css_centers])
    p_initial = softmax(unified @ np.asarray(query, dtype=np.float64), temperature)
    p_initial = p_initial * mask
    return (p_initial[:k] + p_initial[k:]) / 2.0


def afv_prediction(
    query_aux: np.ndarray,
    afv_centers: np.ndarray,
    mask: np.ndarray,
    temperature: float,
) -> np.ndarray:
    """Masked fine-grained-space prediction over K class centers. Not renormalized."""
    afv_centers = np.asarray(afv_centers, dtype=np.float64)
    if afv_centers.shape[0] == 0:
        raise EmptyAFV("no auxiliary class centers available")
    if afv_centers.shape[1] != np.shape(query_aux)[0]:
        raise DimensionMismatch(
            f"query dim {np.shape(query_aux)[0]} vs center dim {afv_centers.shape[1]}"
        )
    if mask.shape != (afv_centers.shape[0],):
        raise DimensionMismatch(
            f"mask length {mask.shape[0]}, expected {afv_centers.shape[0]}"
        )
    p = softmax(afv_centers @ np.asarray(query_aux, dtype=np.float64), temperature)
    return p * mask


def fuse(
    p_zs: np.ndarray, p_css: np.ndarray, p_afv: np.ndarray, w: FusionWeights
) -> np.ndarray:
    """Weighted sum of the three path scores; the argmax is the prediction."""
    if not (p_zs.shape == p_css.shape == p_afv.shape):
        raise DimensionMismatch(
            f"path shapes differ: {p_zs.shape}, {p_css.shape}, {p_afv.shape}"
        )
    return w.beta1 * p_zs + w.beta2 * p_css + w.beta3 * p_afv


@dataclass
class PathRecord:
    """Per-sample path outputs retained for weight sweeping."""

    p_zs: np.ndarray
    p_css: np.ndarray
    p_afv: np.ndarray
    label: int


@dataclass
class SweepResult:
    weights: FusionWeights
    accuracy: float
    grid: list[tuple[float, float, float]]  # (beta2, beta3, accuracy) per point


def sweep_betas(records: list[PathRecord], step: float, max_value: float) -> SweepResult:
    """Grid-search (beta2, beta3) with beta1 fixed at 1, maximizing top-1 accuracy.

    The three path outputs per sample do not depend on the weights, so one
    recorded pass over the stream supports the whole grid. Ties go to the
    lexicographically smaller (beta2, beta3).
    """
    if not records:
        raise EmptyStream("weight sweep needs at least one sample")
    if step <= 0:
        raise ValueError(f"grid step must be > 0, got {step}")
    n_steps = int(round(max_value / step))
    values = [round(j * step, 10) for j in range(n_steps + 1)]
    zs = np.stack([r.p_zs for r in records])
    css = np.stack([r.p_css for r in records])
    afv = np.stack([r.p_afv for r in records])
    labels = np.array([r.label for r in records])
    grid: list[tuple[float, float, float]] = []
    best: tuple[float, float, float] | None = None  # (-acc, beta2, beta3)
    for b2 in values:
        for b3 in values:
            fused = zs + b2 * css + b3 * afv
            acc = float(np.mean(np.argmax(fused, axis=1) == labels))
            grid.append((b2, b3, acc))
            key = (-acc, b2, b3)
            if best is None or key < best:
                best = key
    acc, b2, b3 = -best[0], best[1], best[2]
    return SweepResult(weights=FusionWeights(1.0, b2, b3), accuracy=acc, grid=grid)
