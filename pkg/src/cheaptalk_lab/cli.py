"""Command-line entry point: ``cheaptalk-lab <scenario> --config <file>``."""

from __future__ import annotations

import argparse
import sys

from .errors import CheapTalkError
from .harness import SCENARIOS, load_experiment, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cheaptalk-lab",
        description="Evaluate rating-game equilibria, benchmarks, commitment "
                    "mechanisms, and seeded simulations from an experiment file.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="YAML experiment file")
        p.add_argument("--out", default=None,
                       help=f"output directory (default: $CHEAPTALK_LAB_OUT or cwd)")
        p.add_argument("--seed", type=int, default=None,
                       help="override options.seed")
        p.add_argument("--samples", type=int, default=None,
                       help="override options.samples")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_experiment(args.config, scenario=args.scenario,
                              seed=args.seed, samples=args.samples)
        for path in run(cfg, out_dir=args.out):
            print(path)
    except (CheapTalkError, ValueError, OSError) as exc:
        print(f"cheaptalk-lab: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
