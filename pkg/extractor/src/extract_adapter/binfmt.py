"""Writers for the adaptation engine's on-disk formats.

Implemented against the format contract rather than by importing the
engine, so the engine's own readers double as a conformance check on our
output: a 16-byte little-endian header (magic "CSMF", version 1, space tag,
dtype 0 = f32, dim, count) followed by count*dim float32 values; labels as
raw little-endian u32; the manifest as JSON.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"CSMF"
VERSION = 1
SPACE_CSS = 0
SPACE_AFV = 1
_HEADER = struct.Struct("<4sHBBII")


def write_features(path: str | Path, matrix: np.ndarray, space_code: int) -> None:
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    count, dim = matrix.shape
    norms = np.linalg.norm(matrix.astype(np.float64), axis=1)
    if count and np.abs(norms - 1.0).max() > 1e-4:
        raise ValueError("feature rows must be unit-normalized")
    header = _HEADER.pack(MAGIC, VERSION, space_code, 0, dim, count)
    Path(path).write_bytes(header + matrix.tobytes())


def write_labels(path: str | Path, labels: np.ndarray) -> None:
    np.ascontiguousarray(labels, dtype="<u4").tofile(str(path))


def write_manifest(
    path: str | Path,
    k: int,
    class_names: list[str],
    views_per_sample: int,
    skipped: list[str],
) -> None:
    manifest = {
        "k": k,
        "class_names": class_names,
        "text_features": "text.csmf",
        "css_stream": "css.csmf",
        "afv_stream": "afv.csmf",
        "labels": "labels.bin",
        "views_per_sample": views_per_sample,
        "skipped": skipped,
    }
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
