"""Binary feature files, dataset manifests, state dumps, and reports.

Feature files carry a 16-byte little-endian header (magic "CSMF", version,
space tag, dtype code, dim, count) followed by count*dim float32 values.
Vectors are validated to unit norm on both write and read. Manifests are
JSON indexes tying the text/stream/label files of one dataset together,
with paths resolved relative to the manifest's directory.

State dumps are versioned JSON with cache features embedded as base64
little-endian float32; a dump after n samples is identical to the dump of a
fresh replay of those n samples.

Readers are reentrant; writers assume exclusive access to their path.
"""

from __future__ import annotations

import base64
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cache import CacheEntry
from .core import Space
from .errors import (
    BadMagic,
    NonUnitVectors,
    SchemaMismatch,
    TruncatedPayload,
    VersionUnsupported,
)
from .pipeline import EngineConfig, EngineState, StreamData
from .predict import ViewBatch

MAGIC = b"CSMF"
FORMAT_VERSION = 1
STATE_VERSION = 1
REPORT_VERSION = 1
_HEADER = struct.Struct("<4sHBBII")
_SPACE_CODE = {Space.CSS: 0, Space.AFV: 1}
_CODE_SPACE = {v: k for k, v in _SPACE_CODE.items()}


def write_feature_file(path: str | Path, matrix: np.ndarray, space: Space) -> None:
    """Write a (count, dim) matrix of unit vectors as float32."""
    matrix = np.ascontiguousarray(np.asarray(matrix), dtype="<f4")
    if matrix.ndim != 2:
        raise SchemaMismatch(f"feature matrix must be 2-D, got shape {matrix.shape}")
    _check_unit_rows(matrix, str(path))
    count, dim = matrix.shape
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, _SPACE_CODE[space], 0, dim, count)
    Path(path).write_bytes(header + matrix.tobytes())


def read_feature_file(path: str | Path) -> tuple[np.ndarray, Space]:
    """Read a feature file back as a float32 (count, dim) matrix plus its space."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise TruncatedPayload(f"{path}: file shorter than header")
    magic, version, space_code, dtype_code, dim, count = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagic(f"{path}: magic {magic!r}, expected {MAGIC!r}")
    if version != FORMAT_VERSION:
        raise VersionUnsupported(f"{path}: version {version}")
    if dtype_code != 0 or space_code not in _CODE_SPACE:
        raise VersionUnsupported(
            f"{path}: unknown dtype/space codes ({dtype_code}, {space_code})"
        )
    expected = count * dim * 4
    payload = raw[_HEADER.size :]
    if len(payload) < expected:
        raise TruncatedPayload(
            f"{path}: payload {len(payload)} bytes, header declares {expected}"
        )
    matrix = np.frombuffer(payload[:expected], dtype="<f4").reshape(count, dim)
    _check_unit_rows(matrix, str(path))
    return matrix, _CODE_SPACE[space_code]


def _check_unit_rows(matrix: np.ndarray, label: str) -> None:
    if matrix.shape[0] == 0:
        return
    norms = np.linalg.norm(matrix.astype(np.float64), axis=1)
    off = np.abs(norms - 1.0)
    if np.any(off > 1e-4):
        bad = int(np.argmax(off))
        raise NonUnitVectors(f"{label}: row {bad} has norm {norms[bad]:.6f}")


def write_labels(path: str | Path, labels: np.ndarray) -> None:
    np.ascontiguousarray(labels, dtype="<u4").tofile(str(path))


def read_labels(path: str | Path) -> np.ndarray:
    return np.fromfile(str(path), dtype="<u4")


# ----- manifest -----


@dataclass
class Manifest:
    k: int
    class_names: list[str]
    text_features: str
    css_stream: str
    afv_stream: str
    labels: str
    views_per_sample: int

    _FIELDS = (
        "k", "class_names", "text_features", "css_stream",
        "afv_stream", "labels", "views_per_sample",
    )

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self._FIELDS}

    @classmethod
    def load(cls, path: str | Path) -> "Manifest":
        data = json.loads(Path(path).read_text())
        missing = [name for name in cls._FIELDS if name not in data]
        if missing:
            raise SchemaMismatch(f"manifest missing keys: {missing}")
        return cls(**{name: data[name] for name in cls._FIELDS})

    def save(self, path: str | Path, extra: dict | None = None) -> None:
        data = self.to_dict()
        if extra:
            data.update(extra)
        Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def load_stream(manifest_path: str | Path) -> tuple[Manifest, StreamData]:
    """Load a manifest and its files into an in-memory stream.

    Validates the manifest arithmetic: view counts divide the stream counts,
    both spaces hold the same number of rows, and one label exists per
    sample. All features are re-normalized to float64 unit vectors.
    """
    manifest = Manifest.load(manifest_path)
    base = Path(manifest_path).parent
    text, text_space = read_feature_file(base / manifest.text_features)
    css, css_space = read_feature_file(base / manifest.css_stream)
    afv, afv_space = read_feature_file(base / manifest.afv_stream)
    labels = read_labels(base / manifest.labels)

    if text_space is not Space.CSS or css_space is not Space.CSS or afv_space is not Space.AFV:
        raise SchemaMismatch("feature files carry unexpected space tags")
    if len(manifest.class_names) != manifest.k or text.shape[0] != manifest.k:
        raise SchemaMismatch(
            f"manifest declares k={manifest.k} but has {len(manifest.class_names)} "
            f"names and {text.shape[0]} text rows"
        )
    v = manifest.views_per_sample
    if v < 1 or css.shape[0] % v != 0:
        raise SchemaMismatch(
            f"css stream rows ({css.shape[0]}) not divisible by views_per_sample ({v})"
        )
    if afv.shape[0] != css.shape[0]:
        raise SchemaMismatch(
            f"css stream has {css.shape[0]} rows but afv stream has {afv.shape[0]}"
        )
    n = css.shape[0] // v
    if labels.shape[0] != n:
        raise SchemaMismatch(f"expected {n} labels, found {labels.shape[0]}")

    if n == 0:
        samples = []
    else:
        css64 = _unit_rows_f64(css).reshape(n, v, -1)
        afv64 = _unit_rows_f64(afv).reshape(n, v, -1)
        samples = [
            (ViewBatch(css=css64[i], afv=afv64[i]), int(labels[i])) for i in range(n)
        ]
    return manifest, StreamData(
        text_features=text.astype(np.float64), samples=samples, afv_dim=afv.shape[1]
    )


def _unit_rows_f64(matrix: np.ndarray) -> np.ndarray:
    m = matrix.astype(np.float64)
    return m / np.linalg.norm(m, axis=1, keepdims=True)


def write_stream(
    out_dir: str | Path,
    text_features: np.ndarray,
    samples: list[tuple[ViewBatch, int]],
    class_names: list[str] | None = None,
    extra: dict | None = None,
) -> Path:
    """Write a stream as feature files plus manifest; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    k = text_features.shape[0]
    views = samples[0][0].n_views if samples else 1
    css = np.vstack([b.css for b, _ in samples]) if samples else np.zeros((0, text_features.shape[1]))
    afv = np.vstack([b.afv for b, _ in samples]) if samples else np.zeros((0, 2))
    labels = np.array([label for _, label in samples], dtype="<u4")
    write_feature_file(out / "text.csmf", text_features, Space.CSS)
    write_feature_file(out / "css.csmf", css, Space.CSS)
    write_feature_file(out / "afv.csmf", afv, Space.AFV)
    write_labels(out / "labels.bin", labels)
    manifest = Manifest(
        k=k,
        class_names=class_names or [f"class_{i}" for i in range(k)],
        text_features="text.csmf",
        css_stream="css.csmf",
        afv_stream="afv.csmf",
        labels="labels.bin",
        views_per_sample=views,
    )
    manifest_path = out / "manifest.json"
    manifest.save(manifest_path, extra=extra)
    return manifest_path


# ----- state dumps -----


def _encode_feature(v: np.ndarray) -> str:
    return base64.b64encode(np.ascontiguousarray(v, dtype="<f4").tobytes()).decode("ascii")


def _decode_feature(s: str) -> np.ndarray:
    return np.frombuffer(base64.b64decode(s), dtype="<f4").astype(np.float64)


def state_to_dict(state: EngineState) -> dict:
    def dump_space(caches):
        return [
            [
                {
                    "feature": _encode_feature(e.feature),
                    "entropy": e.entropy,
                    "arrival_index": e.arrival_index,
                }
                for e in sorted(cache.entries, key=lambda e: e.arrival_index)
            ]
            for cache in caches
        ]

    return {
        "version": STATE_VERSION,
        "config": state.config.to_dict(),
        "sample_count": state.sample_count,
        "threshold_state": {
            "css": {"t0": state.css_sched.t0, "growth": state.css_sched.growth, "i": state.css_sched.i},
            "afv": {"t0": state.afv_sched.t0, "growth": state.afv_sched.growth, "i": state.afv_sched.i},
        },
        "css_cache": dump_space(state.dual.css),
        "afv_cache": dump_space(state.dual.afv),
        "text_features": [_encode_feature(t) for t in state.text_features],
    }


def state_from_dict(data: dict) -> EngineState:
    if data.get("version") != STATE_VERSION:
        raise VersionUnsupported(f"state dump version {data.get('version')}")
    config = EngineConfig.from_dict(data["config"])
    text = np.stack([_decode_feature(t) for t in data["text_features"]])
    state = EngineState(config, text)
    for space_key, caches in (("css_cache", state.dual.css), ("afv_cache", state.dual.afv)):
        for class_id, entries in enumerate(data[space_key]):
            caches[class_id].entries = [
                CacheEntry(
                    feature=_decode_feature(e["feature"]),
                    entropy=float(e["entropy"]),
                    arrival_index=int(e["arrival_index"]),
                )
                for e in entries
            ]
    for key, sched in (("css", state.css_sched), ("afv", state.afv_sched)):
        ts = data["threshold_state"][key]
        sched.t0, sched.growth, sched.i = float(ts["t0"]), float(ts["growth"]), int(ts["i"])
    state.sample_count = int(data["sample_count"])
    state.rebuild_graphs(None, None)
    return state


def save_state(path: str | Path, state: EngineState) -> None:
    Path(path).write_text(canonical_json(state_to_dict(state)) + "\n")


def load_state(path: str | Path) -> EngineState:
    return state_from_dict(json.loads(Path(path).read_text()))


# ----- reports -----


def make_report(result, config: EngineConfig, verbose: bool = False) -> dict:
    report = {
        "version": REPORT_VERSION,
        "n_samples": result.n_samples,
        "accuracy": {k: result.accuracy[k] for k in sorted(result.accuracy)},
        "config": config.to_dict(),
    }
    if verbose:
        report["records"] = [r.to_dict() for r in result.records]
    return report


def write_report(path: str | Path, report: dict) -> None:
    Path(path).write_text(canonical_json(report) + "\n")


def load_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


def canonical_json(obj) -> str:
    """Deterministic JSON serialization: sorted keys, no whitespace, no NaN."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)
