"""Trainer command line: run the desk-scale pipeline or single stages."""
from __future__ import annotations

import argparse
import json
import sys

from .config import EXPERIMENTS, TrainConfig, config_with, parse_config
from .pipeline import Pipeline


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trainer", description=__doc__)
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--experiment", choices=EXPERIMENTS, help="override the configured experiment")
    parser.add_argument("--workdir", help="override the configured working directory")
    parser.add_argument(
        "--stage",
        choices=("all",) + Pipeline.STAGES,
        default="all",
        help="run one stage instead of the whole pipeline",
    )
    parser.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            config = parse_config(args.config, experiment=args.experiment, workdir=args.workdir)
        else:
            config = config_with(TrainConfig(), experiment=args.experiment, workdir=args.workdir)
        pipeline = Pipeline(config)
        stages = None if args.stage == "all" else (args.stage,)
        log = (lambda _msg: None) if args.quiet else (lambda msg: print(msg, file=sys.stderr))
        report = pipeline.run(stages=stages, log=log)
    except (ValueError, RuntimeError) as exc:
        print(f"trainer: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"trainer: {exc}", file=sys.stderr)
        return 2
    if report is not None:
        print(json.dumps({"miou": report["miou"], "mean_dice": report["mean_dice"], "count": report["count"]}))
    return 0


def entrypoint() -> None:
    sys.exit(main())
