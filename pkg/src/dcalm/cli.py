"""Command-line entry points: run, compare, synth, serve.

``run`` executes an experiment grid from a JSON config (flags override
the file), ``compare`` summarizes curve files as pairwise win counts,
``synth`` emits a synthetic corpus, and ``serve`` starts the annotation
service.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .dataset import SyntheticConfig, generate_synthetic, save_corpus
from .harness import COMPARE_THRESHOLDS, compare, load_experiment_config, \
    read_curves, run_experiment
from .strategies import DCALM


def _ints(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _floats(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part]


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_experiment_config(args.config)
    if args.output_dir is not None:
        config = replace(config, output_dir=args.output_dir)
    if args.budgets is not None:
        config = replace(config, budgets=_ints(args.budgets))
    if args.seeds is not None:
        config = replace(config, seeds=_ints(args.seeds))
    if args.strategies is not None:
        base = config.strategies[0]
        config = replace(config, strategies=[replace(base, kind=k)
                                             for k in args.strategies.split(",")])
    points = run_experiment(config)
    print(f"{len(points)} curve points -> {config.output_dir}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    points = read_curves(args.curves)
    result = compare(points, target=args.target, thresholds=COMPARE_THRESHOLDS)
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    stds = _floats(args.stds)
    scales = _floats(args.center_scale)
    config = SyntheticConfig(
        class_counts=_ints(args.counts),
        dim=args.dim,
        separation=args.separation,
        stds=stds[0] if len(stds) == 1 else stds,
        center_scale=scales[0] if len(scales) == 1 else scales,
        with_text=args.with_text,
        class_names=args.class_names.split(",") if args.class_names else None,
    )
    corpus = generate_synthetic(config, args.seed)
    save_corpus(corpus, args.output)
    sizes = {name: len(ids) for name, ids in sorted(corpus.splits.items())}
    print(f"{len(corpus.instances)} instances -> {args.output} (splits {sizes})")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app
    app = create_app(store_dir=args.store_dir, frontend_dir=args.frontend_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcalm",
                                     description="active-learning engine and benchmark harness")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute an experiment grid from a config file")
    run.add_argument("config", help="path to a JSON experiment config")
    run.add_argument("--output-dir", help="override the configured output directory")
    run.add_argument("--budgets", help="comma-separated budget override, e.g. 100,200,300")
    run.add_argument("--seeds", help="comma-separated seed override, e.g. 0,1,2")
    run.add_argument("--strategies", help="comma-separated strategy kinds override")
    run.set_defaults(func=_cmd_run)

    cmp_ = sub.add_parser("compare", help="pairwise win counts from curve CSV files")
    cmp_.add_argument("curves", nargs="+", help="curve CSV files (per-seed rows)")
    cmp_.add_argument("--target", default=DCALM, help="strategy to compare against the rest")
    cmp_.set_defaults(func=_cmd_compare)

    synth = sub.add_parser("synth", help="emit a synthetic corpus as JSONL")
    synth.add_argument("output", help="output JSONL path")
    synth.add_argument("--counts", required=True,
                       help="comma-separated per-class instance counts, e.g. 400,400,40")
    synth.add_argument("--dim", type=int, default=16)
    synth.add_argument("--separation", type=float, default=6.0)
    synth.add_argument("--stds", default="1.0",
                       help="per-class stddev (single value or comma list)")
    synth.add_argument("--center-scale", default="1.0",
                       help="per-class center radius multiplier (single value or comma list)")
    synth.add_argument("--class-names", help="comma-separated class names")
    synth.add_argument("--with-text", action="store_true",
                       help="attach synthetic token text to every instance")
    synth.add_argument("--seed", type=int, default=0)
    synth.set_defaults(func=_cmd_synth)

    serve = sub.add_parser("serve", help="start the annotation HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--store-dir", help="directory for append-only session event logs")
    serve.add_argument("--frontend-dir", help="built browser UI to serve at /")
    serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
