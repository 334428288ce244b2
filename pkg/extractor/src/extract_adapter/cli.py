"""CLI for the extraction tool.

    extract --images DIR --dataset-preset NAME --views 16 --out DIR

Encoder specs default to real CLIP/DINOv2 checkpoints (requires torch,
transformers, and locally available weights); pass toy:<dim> specs for a
deterministic offline run.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import ExtractError
from .job import ExtractionJob, extract


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extract",
        description="Encode a labeled image folder into engine-ready feature files",
    )
    parser.add_argument("--images", required=True, help="root dir, one subdirectory per class")
    parser.add_argument("--dataset-preset", required=True, help="prompt template preset name")
    parser.add_argument("--views", type=int, default=16, help="views per image incl. the original")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--clip-encoder", default="clip:openai/clip-vit-base-patch32")
    parser.add_argument("--aux-encoder", default="dinov2:facebook/dinov2-small")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--local-files-only", action="store_true",
        help="never hit the network for model weights",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        job = ExtractionJob.from_preset(
            image_root=args.images,
            preset=args.dataset_preset,
            output_dir=args.out,
            views=args.views,
            clip_encoder=args.clip_encoder,
            aux_encoder=args.aux_encoder,
            seed=args.seed,
            local_files_only=args.local_files_only,
        )
        manifest = extract(job)
    except (ExtractError, OSError, KeyError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    print(json.dumps({"manifest": str(manifest)}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
