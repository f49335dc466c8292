#!/usr/bin/env python3
"""Malytics: tf-simhash features and a kernel ELM for malware detection."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import NoReturn, Sequence, TextIO

from pydantic import ValidationError

from cli.commands import COMMANDS, EXIT_DATA, EXIT_USAGE
from cli.settings import log_level
from elm.solver import DEFAULT_C
from errors import MalyticsError
from evaluation.harness import DEFAULT_SWEEP_FRACTIONS
from kernel.rbf import DEFAULT_GAMMA

logger = logging.getLogger(__name__)

EPILOG = """\
Environment:
  MALYTICS_THREADS      Worker threads for hashing, prediction and folds
  MALYTICS_LOG_LEVEL    Log level name (default WARNING)

Examples:
  python main.py hash sample.bin --hash-size 1024 --seed 7
  python main.py train corpus.csv -o model.mlyt --subsample 0.5
  python main.py predict model.mlyt suspicious.apk --dex
  python main.py cv corpus.csv --folds 5 --mbr 0.2
  python main.py cv corpus.csv --holdout-families FakeInst,Opfake
"""


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """Reports usage problems as exceptions so ``main`` can pick the exit code."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: error: {message}")


def _fractions(value: str) -> list[float]:
    try:
        return [float(part) for part in value.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {value!r}") from exc


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    common.add_argument("--pretty", action="store_true", help="Indented JSON instead of JSON lines")
    common.add_argument("--progress", action="store_true", help="Show a progress bar while hashing")

    hashing = Parser(add_help=False)
    group = hashing.add_argument_group("featurizer")
    group.add_argument("--ngram", type=int, default=None, help="n-gram order, 1-3 (default 2)")
    group.add_argument("--hash-size", type=int, default=None, help="Feature length (default 1024)")
    group.add_argument("--seed", type=int, default=None, help="Seed for projection, subsampling and splits")
    group.add_argument("--sparse", action="store_true", help="Sparse ±1 projection")
    group.add_argument("--density", type=float, default=None, help="Sparse row density (default 0.01)")
    group.add_argument("--dex", action="store_true", help="Hash the classes*.dex of an APK container")

    training = Parser(add_help=False)
    group = training.add_argument_group("training")
    group.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help="RBF spread (default 1.0)")
    group.add_argument("--c", type=float, default=DEFAULT_C, help="Regularization tradeoff (default 200)")
    group.add_argument(
        "--subsample",
        type=float,
        default=None,
        help="Kernel subset size: a fraction of N if <= 1, else a sample count",
    )

    threshold = Parser(add_help=False)
    threshold.add_argument("--threshold", type=float, default=0.0, help="Margin cut for malware (default 0)")

    splitting = Parser(add_help=False)
    group = splitting.add_argument_group("splits")
    group.add_argument("--folds", type=int, default=5, help="Stratified folds (default 5)")
    group.add_argument("--mbr", type=float, default=None, help="Subsample malware to this malware:benign ratio")
    group.add_argument("--holdout-families", default=None, help="Comma-separated families to hold out")
    group.add_argument("--holdout-groups", type=int, default=None, help="Rotate holdout over groups of G families")
    group.add_argument("--min-family-size", type=int, default=1, help="Families smaller than this are not rotated")

    parser = Parser(
        prog="malytics",
        description="Malytics: byte n-gram tf-simhash + kernel ELM malware detection.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("hash", parents=[common, hashing], help="Print feature vectors")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("train", parents=[common, hashing, training], help="Train a model from a manifest")
    p.add_argument("manifest")
    p.add_argument("-o", "--output", required=True, help="Model file to write")
    p.set_defaults(threshold=0.0)

    p = sub.add_parser("predict", parents=[common, hashing, threshold], help="Classify files with a model")
    p.add_argument("model")
    p.add_argument("files", nargs="+")

    p = sub.add_parser("eval", parents=[common, hashing, threshold], help="Score a model on a manifest")
    p.add_argument("model")
    p.add_argument("manifest")

    p = sub.add_parser(
        "cv", parents=[common, hashing, training, threshold, splitting], help="Cross-validate on a manifest"
    )
    p.add_argument("manifest")

    p = sub.add_parser(
        "sweep",
        parents=[common, hashing, training, threshold, splitting],
        help="f1 against random kernel-subset fractions",
    )
    p.add_argument("manifest")
    p.add_argument(
        "--fractions",
        type=_fractions,
        default=list(DEFAULT_SWEEP_FRACTIONS),
        help="Comma-separated fractions (default 0.1,...,1.0)",
    )

    p = sub.add_parser("bench", parents=[common, hashing], help="Measure hashing throughput")
    p.add_argument("files", nargs="*")
    p.add_argument("--synthetic-mb", type=float, default=8.0, help="Random payload size without files")

    return parser


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else log_level(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        return COMMANDS[args.command](args, out)
    except (MalyticsError, ValidationError, ValueError, OSError) as exc:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"malytics {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
