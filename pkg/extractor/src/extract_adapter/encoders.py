"""Encoder backends behind one small interface.

An encoder spec is a string "<backend>:<argument>":

  toy:<dim>            deterministic offline encoder (seeded projections of
                       downscaled pixels; text via hashed prompts). No
                       model weights, suitable for tests and dry runs.
  clip:<hf_model_id>   CLIP image+text encoding via transformers.
  dinov2:<hf_model_id> DINOv2 image encoding via transformers.

Real backends import torch/transformers lazily and wrap any load failure
in ModelLoadError, so offline environments fail fast and clearly.
"""

from __future__ import annotations

import hashlib

import numpy as np
from PIL import Image

from .errors import ModelLoadError

_TOY_PATCH = 16  # images are grayscaled and downscaled to this square
_TOY_SEED = 0x70F0


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _unit_rows(m: np.ndarray) -> np.ndarray:
    return m / np.linalg.norm(m, axis=1, keepdims=True)


class ToyEncoder:
    """Deterministic stand-in encoder: fixed random projection of pixels."""

    def __init__(self, dim: int):
        self.dim = dim
        rng = np.random.default_rng(_TOY_SEED + dim)
        self._projection = rng.standard_normal((_TOY_PATCH * _TOY_PATCH, dim))

    def encode_images(self, images: list[Image.Image]) -> np.ndarray:
        rows = []
        for image in images:
            small = image.convert("L").resize((_TOY_PATCH, _TOY_PATCH), Image.BILINEAR)
            pixels = np.asarray(small, dtype=np.float64).reshape(-1) / 255.0
            pixels = pixels - pixels.mean()
            if not pixels.any():
                pixels[0] = 1.0  # constant images still need a direction
            rows.append(_unit(pixels @ self._projection))
        return np.stack(rows)

    def encode_texts(self, prompts: list[str]) -> np.ndarray:
        rows = []
        for prompt in prompts:
            digest = hashlib.sha256(prompt.encode("utf-8")).digest()
            seed = int.from_bytes(digest[:8], "little")
            rows.append(_unit(np.random.default_rng(seed).standard_normal(self.dim)))
        return np.stack(rows)


class ClipEncoder:
    """CLIP image/text encoder via transformers."""

    def __init__(self, model_id: str, local_files_only: bool = False):
        try:
            import torch
            from transformers import CLIPModel, CLIPProcessor

            self._torch = torch
            self._model = CLIPModel.from_pretrained(model_id, local_files_only=local_files_only)
            self._processor = CLIPProcessor.from_pretrained(
                model_id, local_files_only=local_files_only
            )
            self._model.eval()
        except Exception as exc:
            raise ModelLoadError(f"cannot load CLIP backend {model_id!r}: {exc}") from exc
        self.dim = int(self._model.config.projection_dim)

    def encode_images(self, images: list[Image.Image]) -> np.ndarray:
        inputs = self._processor(images=images, return_tensors="pt")
        with self._torch.no_grad():
            feats = self._model.get_image_features(**inputs)
        return _unit_rows(feats.cpu().numpy().astype(np.float64))

    def encode_texts(self, prompts: list[str]) -> np.ndarray:
        inputs = self._processor(text=prompts, return_tensors="pt", padding=True)
        with self._torch.no_grad():
            feats = self._model.get_text_features(**inputs)
        return _unit_rows(feats.cpu().numpy().astype(np.float64))


class Dinov2Encoder:
    """DINOv2 image encoder via transformers (pooled CLS features)."""

    def __init__(self, model_id: str, local_files_only: bool = False):
        try:
            import torch
            from transformers import AutoImageProcessor, AutoModel

            self._torch = torch
            self._model = AutoModel.from_pretrained(model_id, local_files_only=local_files_only)
            self._processor = AutoImageProcessor.from_pretrained(
                model_id, local_files_only=local_files_only
            )
            self._model.eval()
        except Exception as exc:
            raise ModelLoadError(f"cannot load DINOv2 backend {model_id!r}: {exc}") from exc
        self.dim = int(self._model.config.hidden_size)

    def encode_images(self, images: list[Image.Image]) -> np.ndarray:
        inputs = self._processor(images=images, return_tensors="pt")
        with self._torch.no_grad():
            out = self._model(**inputs)
        feats = out.pooler_output if out.pooler_output is not None else out.last_hidden_state[:, 0]
        return _unit_rows(feats.cpu().numpy().astype(np.float64))

    def encode_texts(self, prompts: list[str]) -> np.ndarray:
        raise ModelLoadError("DINOv2 has no text tower; use it as the auxiliary encoder only")


def build_encoder(spec: str, local_files_only: bool = False):
    """Instantiate an encoder from its spec string."""
    backend, _, arg = spec.partition(":")
    if backend == "toy":
        try:
            dim = int(arg)
        except ValueError:
            raise ModelLoadError(f"toy encoder needs an integer dim, got {arg!r}") from None
        if dim < 2:
            raise ModelLoadError(f"toy encoder dim must be >= 2, got {dim}")
        return ToyEncoder(dim)
    if backend == "clip":
        return ClipEncoder(arg, local_files_only=local_files_only)
    if backend == "dinov2":
        return Dinov2Encoder(arg, local_files_only=local_files_only)
    raise ModelLoadError(f"unknown encoder backend {backend!r} in spec {spec!r}")
