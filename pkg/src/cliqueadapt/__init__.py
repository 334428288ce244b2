"""Training-free test-time adaptation over precomputed embedding streams.

The engine adapts a zero-shot classifier's predictions as test samples
arrive: confident samples populate entropy-gated per-class caches in two
feature spaces, cached class centers become nodes of thresholded similarity
graphs, maximal cliques of those graphs define hyper-classes, and per-sample
inlier masks gate the final weighted logit fusion.
"""

from .cache import (
    CacheEntry,
    ClassCache,
    DualCache,
    InsertResult,
    InsertStatus,
    afv_class_center,
    consider_insert,
    css_class_center,
    snapshot_matrices,
    space_matrices,
)
from .core import Space, adaptation_fn, cosine, entropy, normalize, softmax
from .datagen import SynthSpec, generate
from .graph import (
    AffinityGraph,
    CliqueSet,
    GraphOrder,
    ThresholdSchedule,
    advance_threshold,
    build_fog,
    build_sog,
    maximal_cliques,
)
from .hyperclass import HyperClass, build_mask, make_hyperclasses, rank_by_affinity, select_top_r
from .pipeline import (
    EngineConfig,
    EngineState,
    SampleRecord,
    StreamData,
    StreamResult,
    process_sample,
    run_stream,
)
from .predict import (
    FusionWeights,
    PathRecord,
    SweepResult,
    ViewBatch,
    afv_prediction,
    cache_logits_centroid_form,
    css_prediction,
    fuse,
    marginal_entropy_gate,
    sweep_betas,
    tda_adapted,
    zero_shot,
)

__version__ = "0.1.0"

__all__ = [
    "AffinityGraph", "CacheEntry", "ClassCache", "CliqueSet", "DualCache",
    "EngineConfig", "EngineState", "FusionWeights", "GraphOrder", "HyperClass",
    "InsertResult", "InsertStatus", "PathRecord", "SampleRecord", "Space",
    "StreamData", "StreamResult", "SweepResult", "SynthSpec", "ThresholdSchedule",
    "ViewBatch", "adaptation_fn", "advance_threshold", "afv_class_center",
    "afv_prediction", "build_fog", "build_mask", "build_sog",
    "cache_logits_centroid_form", "consider_insert", "cosine", "css_class_center",
    "css_prediction", "entropy", "fuse", "generate", "make_hyperclasses",
    "marginal_entropy_gate", "maximal_cliques", "normalize", "process_sample",
    "rank_by_affinity", "run_stream", "select_top_r", "snapshot_matrices",
    "softmax", "space_matrices", "sweep_betas", "tda_adapted", "zero_shot",
]
