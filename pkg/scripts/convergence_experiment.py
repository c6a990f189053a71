#!/usr/bin/env python3
"""Sample W-random tournaments from a step kernel and watch pattern
densities and the degree distribution converge to their kernel values.

Example:
    python scripts/convergence_experiment.py --kernel half --blocks 3 \
        --sizes 50,100,200,400 --reps 30 --seed 1
"""

import argparse
import sys

import numpy as np

from tourlim import (
    DigraphPattern,
    GeneralizedTournament,
    SampleConfig,
    StepKernel,
    convergence_report,
    random_step_kernel,
    step_kernel_from_tournament,
)


def make_kernel(name: str, blocks: int, seed: int) -> StepKernel:
    if name == "half":
        return StepKernel(np.full((blocks, blocks), 0.5))
    if name == "transitive":
        return step_kernel_from_tournament(
            GeneralizedTournament(np.triu(np.ones((blocks, blocks)), 1))
        )
    if name == "random":
        return random_step_kernel(blocks, seed=seed)
    raise SystemExit(f"unknown kernel family '{name}'")


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kernel", default="half", choices=["half", "transitive", "random"])
    ap.add_argument("--blocks", type=int, default=3)
    ap.add_argument("--patterns", default="C3,T3,C4")
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--reps", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    w = make_kernel(args.kernel, args.blocks, args.seed)
    patterns = {
        spec: DigraphPattern.from_spec(spec) for spec in args.patterns.split(",")
    }
    sizes = [int(x) for x in args.sizes.split(",")]
    cfg = SampleConfig(max(sizes), seed=args.seed, reps=args.reps)
    report = convergence_report(w, patterns, sizes, cfg)
    sys.stdout.write(report.to_csv())
    return 0


if __name__ == "__main__":
    sys.exit(main())
