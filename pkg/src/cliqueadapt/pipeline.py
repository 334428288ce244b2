"""Streaming orchestration: gate, cache update, periodic graph rebuild,
hyper-class masking, and fused prediction, with per-path accuracy accounting.

One engine instance serves one stream, sequentially; independent streams can
run in parallel processes with no shared state. Graphs and clique sets are
rebuilt every ``graph_update_interval`` samples and reused in between, while
class centers that feed the prediction logits are recomputed per sample
(the shared-space centers are query-weighted, so they cannot be cached).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .cache import (
    CacheEntry,
    DualCache,
    InsertStatus,
    afv_class_center,
    consider_insert,
    css_class_center,
    space_matrices,
)
from .core import Space, normalize
from .errors import SchemaMismatch
from .graph import (
    AffinityGraph,
    CliqueSet,
    ThresholdSchedule,
    advance_threshold,
    build_fog,
    build_sog,
    maximal_cliques,
)
from .hyperclass import HyperClass, build_mask, make_hyperclasses, rank_by_affinity, select_top_r
from .predict import (
    FusionWeights,
    PathRecord,
    ViewBatch,
    afv_prediction,
    css_prediction,
    fuse,
    marginal_entropy_gate,
    tda_adapted,
    zero_shot,
)

logger = logging.getLogger("cliqueadapt")

_AFV_PLACEHOLDER_SEED = 0xA5F0_0000

PATHS = ("zs", "tda", "css", "afv", "fused")


@dataclass
class EngineConfig:
    """All tunables for one adaptation stream.

    k, d1, d2 describe the label and embedding spaces; tau is the softmax
    temperature shared by every prediction path; alpha the sharpness of the
    cache adaptation weighting; l1/l2 the per-class cache capacities; t0/g
    the affinity-threshold schedule; r the clique selection ratio; view_ratio
    the fraction of augmented views the confidence gate keeps; betas the
    fusion weights. graph_update_interval > 1 trades mask freshness for
    speed. threshold_advance="per_insert" only steps the schedule on samples
    that were actually cached. seed is recorded for provenance; the engine
    itself draws no randomness.
    """

    k: int
    d1: int
    d2: int
    tau: float = 0.01
    alpha: float = 5.0
    l1: int = 3
    l2: int = 6
    t0: float = 0.3
    g: float = 1e-4
    r: float = 0.2
    view_ratio: float = 0.1
    betas: FusionWeights = field(default_factory=FusionWeights)
    afv_center_mode: str = "average"
    graph_update_interval: int = 1
    seed: int = 0
    ema_decay: float = 0.1
    attn_tau: float | None = None
    zs_from_gate: bool = True
    threshold_advance: str = "per_sample"

    def __post_init__(self) -> None:
        if isinstance(self.betas, (list, tuple)):
            self.betas = FusionWeights(*self.betas)
        checks = [
            (self.k >= 1, "k must be >= 1"),
            (self.d1 >= 2 and self.d2 >= 2, "dimensions must be >= 2"),
            (self.tau > 0, "tau must be > 0"),
            (self.alpha > 0, "alpha must be > 0"),
            (self.l1 >= 1 and self.l2 >= 1, "cache capacities must be >= 1"),
            (0.0 <= self.t0 <= 1.0, "t0 must be in [0, 1]"),
            (self.g >= 0, "threshold growth must be >= 0"),
            (0.0 < self.r <= 1.0, "r must be in (0, 1]"),
            (0.0 < self.view_ratio <= 1.0, "view_ratio must be in (0, 1]"),
            (self.afv_center_mode in ("average", "attn_weighted", "ema"),
             f"unknown afv_center_mode {self.afv_center_mode!r}"),
            (self.graph_update_interval >= 1, "graph_update_interval must be >= 1"),
            (0.0 < self.ema_decay <= 1.0, "ema_decay must be in (0, 1]"),
            (self.attn_tau is None or self.attn_tau > 0, "attn_tau must be > 0"),
            (self.threshold_advance in ("per_sample", "per_insert"),
             f"unknown threshold_advance {self.threshold_advance!r}"),
        ]
        for ok, msg in checks:
            if not ok:
                raise SchemaMismatch(msg)

    def to_dict(self) -> dict:
        d = {
            "k": self.k, "d1": self.d1, "d2": self.d2,
            "tau": self.tau, "alpha": self.alpha,
            "l1": self.l1, "l2": self.l2,
            "t0": self.t0, "g": self.g,
            "r": self.r, "view_ratio": self.view_ratio,
            "betas": [self.betas.beta1, self.betas.beta2, self.betas.beta3],
            "afv_center_mode": self.afv_center_mode,
            "graph_update_interval": self.graph_update_interval,
            "seed": self.seed,
            "ema_decay": self.ema_decay,
            "attn_tau": self.attn_tau,
            "zs_from_gate": self.zs_from_gate,
            "threshold_advance": self.threshold_advance,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise SchemaMismatch(f"unknown config keys: {sorted(unknown)}")
        for key in ("k", "d1", "d2"):
            if key not in d:
                raise SchemaMismatch(f"config is missing required key {key!r}")
        return cls(**d)


@dataclass
class SampleRecord:
    """Everything recorded about one processed sample."""

    index: int
    true_label: int
    pseudo_label: int
    entropy: float
    predicted: dict[str, int]
    css_mask_size: int
    afv_mask_size: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "true_label": self.true_label,
            "pseudo_label": self.pseudo_label,
            "entropy": self.entropy,
            "predicted": dict(self.predicted),
            "css_mask_size": self.css_mask_size,
            "afv_mask_size": self.afv_mask_size,
        }


@dataclass
class StreamResult:
    records: list[SampleRecord]
    accuracy: dict[str, float]
    paths: list[PathRecord] | None = None

    @property
    def n_samples(self) -> int:
        return len(self.records)


@dataclass
class StreamData:
    """A loaded evaluation stream: text anchors plus labeled view batches.

    afv_dim records the auxiliary dimension even when the sample list is
    empty (file loaders know it from their headers).
    """

    text_features: np.ndarray
    samples: list[tuple[ViewBatch, int]]
    afv_dim: int | None = None

    def __post_init__(self) -> None:
        self.text_features = np.stack([normalize(t) for t in self.text_features])
        if self.afv_dim is None and self.samples:
            self.afv_dim = int(self.samples[0][0].afv.shape[1])


class EngineState:
    """Mutable per-stream state: caches, threshold schedules, built graphs."""

    def __init__(self, config: EngineConfig, text_features: np.ndarray):
        text_features = np.asarray(text_features, dtype=np.float64)
        if text_features.shape != (config.k, config.d1):
            raise SchemaMismatch(
                f"text features shape {text_features.shape}, expected {(config.k, config.d1)}"
            )
        self.config = config
        self.text_features = np.stack([normalize(t) for t in text_features])
        self.dual = DualCache.create(config.k, config.d1, config.d2, config.l1, config.l2)
        self.css_sched = ThresholdSchedule(t0=config.t0, growth=config.g)
        self.afv_sched = ThresholdSchedule(t0=config.t0, growth=config.g)
        self.sample_count = 0
        self.css_fog: AffinityGraph | None = None
        self.css_sog: AffinityGraph | None = None
        self.css_cliques: CliqueSet | None = None
        self.css_hypers: list[HyperClass] = []
        self.afv_fog: AffinityGraph | None = None
        self.afv_sog: AffinityGraph | None = None
        self.afv_cliques: CliqueSet | None = None
        self.afv_hypers: list[HyperClass] = []
        self.rebuild_graphs(None, None)

    # ----- class centers -----

    def _afv_placeholder(self, class_id: int) -> np.ndarray:
        rng = np.random.default_rng(_AFV_PLACEHOLDER_SEED + class_id)
        return normalize(rng.standard_normal(self.config.d2))

    def css_centers(self, query: np.ndarray | None) -> np.ndarray:
        """Per-class shared-space visual centers; empty classes reuse the text row.

        With a query, centers are adaptation-weighted toward it; without one
        (state dumps) weights are uniform.
        """
        cfg = self.config
        rows = []
        for c in range(cfg.k):
            cache = self.dual.css[c]
            if not cache.entries:
                rows.append(self.text_features[c])
            elif query is None:
                rows.append(normalize(cache.matrix().mean(axis=0)))
            else:
                rows.append(css_class_center(cache, query, cfg.alpha))
        return np.stack(rows)

    def afv_centers(self, query: np.ndarray | None) -> np.ndarray:
        """Per-class auxiliary centers; empty classes get fixed unit placeholders."""
        cfg = self.config
        mode = cfg.afv_center_mode
        if mode == "attn_weighted" and query is None:
            mode = "average"
        rows = []
        for c in range(cfg.k):
            cache = self.dual.afv[c]
            if not cache.entries:
                rows.append(self._afv_placeholder(c))
            else:
                rows.append(
                    afv_class_center(
                        cache,
                        query=query,
                        mode=mode,
                        attn_tau=cfg.attn_tau if cfg.attn_tau is not None else cfg.tau,
                        ema_decay=cfg.ema_decay,
                    )
                )
        return np.stack(rows)

    def afv_cache_empty(self) -> bool:
        return all(not cache.entries for cache in self.dual.afv)

    # ----- graph maintenance -----

    def rebuild_graphs(self, css_query: np.ndarray | None, afv_query: np.ndarray | None) -> None:
        """Rebuild both spaces' graphs, clique sets, and hyper-class centers."""
        css_nodes = np.vstack([self.text_features, self.css_centers(css_query)])
        self.css_fog = build_fog(css_nodes, self.css_sched.current(), Space.CSS)
        self.css_sog = build_sog(self.css_fog)
        self.css_cliques = maximal_cliques(self.css_sog)
        self.css_hypers = make_hyperclasses(self.css_cliques, css_nodes)

        afv_nodes = self.afv_centers(afv_query)
        self.afv_fog = build_fog(afv_nodes, self.afv_sched.current(), Space.AFV)
        self.afv_sog = build_sog(self.afv_fog)
        self.afv_cliques = maximal_cliques(self.afv_sog)
        self.afv_hypers = make_hyperclasses(self.afv_cliques, afv_nodes)


def _query_mask(
    query: np.ndarray,
    hypers: list[HyperClass],
    cliques: CliqueSet,
    n_nodes: int,
    r: float,
) -> np.ndarray:
    """Rank cliques against the query, select the top r, union into a mask."""
    if not cliques.cliques:
        logger.warning("no cliques available; falling back to all-ones mask")
        return np.ones(n_nodes, dtype=bool)
    ranked = rank_by_affinity(query, hypers)
    selected = select_top_r(ranked, len(cliques.cliques), r)
    mask = build_mask(selected, cliques, n_nodes)
    if not mask.any():
        logger.warning("selection produced an empty mask; falling back to all-ones")
        return np.ones(n_nodes, dtype=bool)
    return mask


def process_sample(
    state: EngineState, batch: ViewBatch, true_label: int
) -> tuple[SampleRecord, PathRecord]:
    """Run the full per-sample protocol and return its record.

    Order: confidence gate, cache insertion under the pseudo-label, threshold
    step, periodic graph rebuild, per-sample clique masks, the five
    prediction paths. Caches are only ever mutated here, via the insertion
    rule.
    """
    cfg = state.config
    k = cfg.k
    p_mean, gate_entropy, pseudo = marginal_entropy_gate(batch, state.text_features, cfg.tau)
    w_v = batch.css[0]
    w_aux = batch.afv[0]

    arrival = state.sample_count
    css_res = consider_insert(
        state.dual.css[pseudo], CacheEntry(np.array(w_v), gate_entropy, arrival)
    )
    afv_res = consider_insert(
        state.dual.afv[pseudo], CacheEntry(np.array(w_aux), gate_entropy, arrival)
    )

    if cfg.threshold_advance == "per_sample" or css_res.status is not InsertStatus.REJECTED:
        advance_threshold(state.css_sched)
    if cfg.threshold_advance == "per_sample" or afv_res.status is not InsertStatus.REJECTED:
        advance_threshold(state.afv_sched)

    if state.sample_count % cfg.graph_update_interval == 0:
        state.rebuild_graphs(w_v, w_aux)

    css_mask = _query_mask(w_v, state.css_hypers, state.css_cliques, 2 * k, cfg.r)
    afv_mask = _query_mask(w_aux, state.afv_hypers, state.afv_cliques, k, cfg.r)

    p_zs = p_mean if cfg.zs_from_gate else zero_shot(w_v, state.text_features, cfg.tau)
    p_css = css_prediction(w_v, state.text_features, state.css_centers(w_v), css_mask, cfg.tau)
    if state.afv_cache_empty():
        p_afv = np.zeros(k)
    else:
        p_afv = afv_prediction(w_aux, state.afv_centers(w_aux), afv_mask, cfg.tau)
    p_fused = fuse(p_zs, p_css, p_afv, cfg.betas)

    css_matrix, css_labels = space_matrices(state.dual.css, k)
    if css_matrix.shape[0] > 0:
        p_tda = tda_adapted(w_v, css_matrix, css_labels, cfg.alpha)
    else:
        p_tda = p_zs

    record = SampleRecord(
        index=state.sample_count,
        true_label=int(true_label),
        pseudo_label=pseudo,
        entropy=float(gate_entropy),
        predicted={
            "zs": int(np.argmax(p_zs)),
            "tda": int(np.argmax(p_tda)),
            "css": int(np.argmax(p_css)),
            "afv": int(np.argmax(p_afv)),
            "fused": int(np.argmax(p_fused)),
        },
        css_mask_size=int(css_mask.sum()),
        afv_mask_size=int(afv_mask.sum()),
    )
    paths = PathRecord(p_zs=p_zs, p_css=p_css, p_afv=p_afv, label=int(true_label))
    state.sample_count += 1
    return record, paths


def run_stream(
    config: EngineConfig,
    data: StreamData,
    *,
    collect_paths: bool = False,
    state: EngineState | None = None,
) -> StreamResult:
    """Process every sample of a stream and account per-path top-1 accuracy.

    Deterministic: identical config and input bytes give identical results.
    Pass a pre-built EngineState to keep a handle on the final caches (for
    state dumps); otherwise one is created from the stream's text features.
    """
    if data.text_features.shape[0] != config.k:
        raise SchemaMismatch(
            f"stream has {data.text_features.shape[0]} classes, config.k = {config.k}"
        )
    if state is None:
        state = EngineState(config, data.text_features)
    records: list[SampleRecord] = []
    paths: list[PathRecord] = []
    correct = {p: 0 for p in PATHS}
    for batch, label in data.samples:
        if not 0 <= label < config.k:
            raise SchemaMismatch(f"label {label} outside [0, {config.k})")
        batch = replace(batch, selection_ratio=config.view_ratio)
        record, path = process_sample(state, batch, label)
        records.append(record)
        if collect_paths:
            paths.append(path)
        for p in PATHS:
            correct[p] += int(record.predicted[p] == record.true_label)
    n = len(records)
    accuracy = {p: (correct[p] / n if n else 0.0) for p in PATHS}
    return StreamResult(records=records, accuracy=accuracy, paths=paths if collect_paths else None)
