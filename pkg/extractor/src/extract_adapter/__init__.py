"""Offline feature extraction: labeled image folders in, engine manifests out."""

from .encoders import ClipEncoder, Dinov2Encoder, ToyEncoder, build_encoder
from .errors import DecodeError, ExtractError, ModelLoadError
from .job import ExtractionJob, augment_views, discover_classes, extract
from .presets import PRESETS, prompt_templates

__version__ = "0.1.0"

__all__ = [
    "ClipEncoder", "DecodeError", "Dinov2Encoder", "ExtractError",
    "ExtractionJob", "ModelLoadError", "PRESETS", "ToyEncoder",
    "augment_views", "build_encoder", "discover_classes", "extract",
    "prompt_templates",
]
