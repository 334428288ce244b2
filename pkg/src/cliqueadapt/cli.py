"""Command-line interface.

Subcommands: run (evaluate a manifest stream), gen-synth (write a synthetic
dataset), sweep-betas (grid-search fusion weights), dump-graph (serialize a
state's graphs and cliques), eval (compare reports side by side).

Any failure exits nonzero with a one-line JSON error object on stderr. The
COSMIC_LOG environment variable (error|warn|info|debug) controls logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import datagen, fileio, predict
from .errors import EngineError, SchemaMismatch
from .pipeline import EngineConfig, EngineState, run_stream

_LOG_LEVELS = {
    "error": logging.ERROR,
    "warn": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def _setup_logging() -> None:
    level = os.environ.get("COSMIC_LOG", "warn").lower()
    if level not in _LOG_LEVELS:
        raise SchemaMismatch(f"COSMIC_LOG must be one of {sorted(_LOG_LEVELS)}, got {level!r}")
    logging.basicConfig(level=_LOG_LEVELS[level], format="%(levelname)s %(name)s: %(message)s")


def _load_config(path: str, manifest_data=None) -> EngineConfig:
    """Read a config JSON; k/d1/d2 may be omitted when derivable from the stream."""
    raw = json.loads(Path(path).read_text())
    if manifest_data is not None:
        manifest, data = manifest_data
        derived = {
            "k": manifest.k,
            "d1": data.text_features.shape[1],
            "d2": data.afv_dim if data.afv_dim else 2,
        }
        for key, value in derived.items():
            if key not in raw:
                raw[key] = value
            elif raw[key] != value:
                raise SchemaMismatch(
                    f"config {key}={raw[key]} conflicts with stream {key}={value}"
                )
    return EngineConfig.from_dict(raw)


def _cmd_run(args: argparse.Namespace) -> int:
    manifest, data = fileio.load_stream(args.manifest)
    config = _load_config(args.config, (manifest, data))
    state = EngineState(config, data.text_features)
    result = run_stream(config, data, state=state)
    report = fileio.make_report(result, config, verbose=args.verbose)
    if args.report:
        fileio.write_report(args.report, report)
    if args.dump_state:
        fileio.save_state(args.dump_state, state)
    print(json.dumps({"n_samples": result.n_samples, "accuracy": report["accuracy"]}, sort_keys=True))
    return 0


def _cmd_gen_synth(args: argparse.Namespace) -> int:
    raw = json.loads(Path(args.spec).read_text())
    known = {f.name for f in fields(datagen.SynthSpec)}
    unknown = set(raw) - known
    if unknown:
        raise SchemaMismatch(f"unknown synth spec keys: {sorted(unknown)}")
    spec = datagen.SynthSpec(**raw)
    text, stream = datagen.generate(spec)
    manifest_path = fileio.write_stream(args.out, text, stream)
    print(json.dumps({"manifest": str(manifest_path), "samples": len(stream), "k": spec.k}))
    return 0


def _cmd_sweep_betas(args: argparse.Namespace) -> int:
    manifest, data = fileio.load_stream(args.manifest)
    config = _load_config(args.config, (manifest, data))
    result = run_stream(config, data, collect_paths=True)
    sweep = predict.sweep_betas(result.paths, step=args.step, max_value=args.max)
    w = sweep.weights
    print("best_beta1,best_beta2,best_beta3,best_accuracy")
    print(f"{w.beta1},{w.beta2},{w.beta3},{sweep.accuracy}")
    print("beta1,beta2,beta3,accuracy")
    for b2, b3, acc in sweep.grid:
        print(f"1.0,{b2},{b3},{acc}")
    return 0


def _graph_obj(graph) -> dict:
    i, j = np.nonzero(np.triu(graph.adjacency, k=1))
    return {
        "n": int(graph.n_nodes),
        "edges": [[int(a), int(b)] for a, b in zip(i, j)],
        "threshold": float(graph.threshold),
        "order": graph.order.value,
    }


def _cmd_dump_graph(args: argparse.Namespace) -> int:
    state = fileio.load_state(args.state)
    if args.space == "css":
        fog, sog, cliques = state.css_fog, state.css_sog, state.css_cliques
    else:
        fog, sog, cliques = state.afv_fog, state.afv_sog, state.afv_cliques
    obj = {
        "space": args.space,
        "fog": _graph_obj(fog),
        "sog": _graph_obj(sog),
        "cliques": [list(c) for c in cliques.cliques],
    }
    Path(args.out).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    print(json.dumps({"out": args.out, "n_cliques": len(cliques.cliques)}))
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    reports = [(path, fileio.load_report(path)) for path in args.report]
    names = [Path(p).name for p, _ in reports]
    width = max(len(n) for n in names + ["path"]) + 2
    print("path".ljust(8) + "".join(n.rjust(width) for n in names))
    for path_name in ("zs", "tda", "css", "afv", "fused"):
        row = path_name.ljust(8)
        for _, rep in reports:
            row += f"{rep['accuracy'][path_name]:.4f}".rjust(width)
        print(row)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliqueadapt",
        description="Training-free test-time adaptation over precomputed embedding streams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a manifest stream and write a report")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", required=True, help="engine config JSON")
    p.add_argument("--dump-state", default=None, help="write final engine state JSON here")
    p.add_argument("--report", default=None, help="write report JSON here")
    p.add_argument("--verbose", action="store_true", help="include per-sample records in the report")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("gen-synth", help="generate a synthetic dual-space dataset")
    p.add_argument("--spec", required=True, help="synth spec JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_gen_synth)

    p = sub.add_parser("sweep-betas", help="grid-search fusion weights on a stream")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--max", type=float, default=10.0)
    p.set_defaults(func=_cmd_sweep_betas)

    p = sub.add_parser("dump-graph", help="serialize a state's graphs and clique sets")
    p.add_argument("--state", required=True, help="state dump JSON from run --dump-state")
    p.add_argument("--space", required=True, choices=("css", "afv"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_dump_graph)

    p = sub.add_parser("eval", help="side-by-side accuracy table for reports")
    p.add_argument("--report", action="append", required=True, help="repeatable")
    p.set_defaults(func=_cmd_eval)

    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        _setup_logging()
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (EngineError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
