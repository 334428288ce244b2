"""Extraction jobs: images in, engine-ready manifest plus feature files out.

The image root is one subdirectory per class. Every image yields a fixed
number of views: view 0 is the untouched original, later views are seeded
random resized crops with optional horizontal flips, so a job is
deterministic given its seed. Undecodable files are skipped with a warning
and recorded in the manifest.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from . import binfmt
from .encoders import build_encoder
from .errors import DecodeError, ExtractError
from .presets import prompt_templates

logger = logging.getLogger("extract_adapter")

IMAGE_SUFFIXES = {".jpg", ".jpeg", ".png", ".bmp", ".gif", ".webp"}


@dataclass
class ExtractionJob:
    image_root: Path
    class_prompts: list[str]
    output_dir: Path
    views: int = 16
    clip_encoder: str = "clip:openai/clip-vit-base-patch32"
    aux_encoder: str = "dinov2:facebook/dinov2-small"
    seed: int = 0
    local_files_only: bool = field(default=False)

    def __post_init__(self) -> None:
        self.image_root = Path(self.image_root)
        self.output_dir = Path(self.output_dir)
        if self.views < 1:
            raise ValueError("views must be >= 1")
        if not self.class_prompts:
            raise ValueError("at least one prompt template is required")

    @classmethod
    def from_preset(cls, image_root, preset: str, output_dir, **kwargs) -> "ExtractionJob":
        return cls(
            image_root=image_root,
            class_prompts=prompt_templates(preset),
            output_dir=output_dir,
            **kwargs,
        )


def discover_classes(image_root: Path) -> dict[str, list[Path]]:
    """Map sorted class subdirectory names to their sorted image paths."""
    if not image_root.is_dir():
        raise ExtractError(f"image root {image_root} is not a directory")
    classes = {}
    for sub in sorted(p for p in image_root.iterdir() if p.is_dir()):
        images = sorted(
            p for p in sub.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES
        )
        classes[sub.name] = images
    if not classes:
        raise ExtractError(f"no class subdirectories under {image_root}")
    return classes


def load_image(path: Path) -> Image.Image:
    try:
        with Image.open(path) as img:
            return img.convert("RGB")
    except Exception as exc:
        raise DecodeError(f"cannot decode {path}: {exc}") from exc


def augment_views(image: Image.Image, n_views: int, rng: np.random.Generator) -> list[Image.Image]:
    """View 0 untouched; later views are random resized crops plus flips."""
    views = [image]
    width, height = image.size
    for _ in range(n_views - 1):
        scale = float(rng.uniform(0.5, 1.0))
        crop_w = max(1, int(width * np.sqrt(scale)))
        crop_h = max(1, int(height * np.sqrt(scale)))
        left = int(rng.integers(0, width - crop_w + 1))
        top = int(rng.integers(0, height - crop_h + 1))
        view = image.crop((left, top, left + crop_w, top + crop_h)).resize(
            (width, height), Image.BILINEAR
        )
        if rng.random() < 0.5:
            view = view.transpose(Image.FLIP_LEFT_RIGHT)
        views.append(view)
    return views


def _encode_text_features(encoder, templates: list[str], class_names: list[str]) -> np.ndarray:
    """One unit feature per class: template encodings mean-pooled."""
    rows = []
    for name in class_names:
        prompts = [t.format(name) for t in templates]
        pooled = encoder.encode_texts(prompts).mean(axis=0)
        rows.append(pooled / np.linalg.norm(pooled))
    return np.stack(rows)


def extract(job: ExtractionJob) -> Path:
    """Run the extraction job; returns the manifest path."""
    classes = discover_classes(job.image_root)
    class_names = list(classes)
    clip_enc = build_encoder(job.clip_encoder, local_files_only=job.local_files_only)
    aux_enc = build_encoder(job.aux_encoder, local_files_only=job.local_files_only)

    text_features = _encode_text_features(clip_enc, job.class_prompts, class_names)

    css_rows: list[np.ndarray] = []
    afv_rows: list[np.ndarray] = []
    labels: list[int] = []
    skipped: list[str] = []
    image_index = 0
    for class_id, name in enumerate(class_names):
        for path in classes[name]:
            try:
                image = load_image(path)
            except DecodeError as exc:
                logger.warning("skipping %s: %s", path, exc)
                skipped.append(str(path.relative_to(job.image_root)))
                continue
            rng = np.random.default_rng((job.seed, image_index))
            views = augment_views(image, job.views, rng)
            css_rows.append(clip_enc.encode_images(views))
            afv_rows.append(aux_enc.encode_images(views))
            labels.append(class_id)
            image_index += 1

    if not labels:
        raise ExtractError("every image failed to decode; nothing to write")

    job.output_dir.mkdir(parents=True, exist_ok=True)
    binfmt.write_features(job.output_dir / "text.csmf", text_features, binfmt.SPACE_CSS)
    binfmt.write_features(job.output_dir / "css.csmf", np.vstack(css_rows), binfmt.SPACE_CSS)
    binfmt.write_features(job.output_dir / "afv.csmf", np.vstack(afv_rows), binfmt.SPACE_AFV)
    binfmt.write_labels(job.output_dir / "labels.bin", np.array(labels, dtype="<u4"))
    manifest_path = job.output_dir / "manifest.json"
    binfmt.write_manifest(
        manifest_path,
        k=len(class_names),
        class_names=class_names,
        views_per_sample=job.views,
        skipped=skipped,
    )
    logger.info(
        "extracted %d images x %d views across %d classes (%d skipped)",
        len(labels), job.views, len(class_names), len(skipped),
    )
    return manifest_path
