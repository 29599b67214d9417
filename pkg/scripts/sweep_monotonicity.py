#!/usr/bin/env python3
"""Scan random instruments for violations of root-measure monotonicity.

For each trial: draw a random 2x2x2 pure state and a random trace-preserving
instrument on party A, then compare the G-concurrence-rooted localizable
entanglement of the pre- and post-instrument states.  The gap
``sum_j q_j LE(rho_j) - LE(rho)`` should never exceed optimizer noise; the
run also records the Kraus f-factor sum for every instrument.

Usage::

    python3 scripts/sweep_monotonicity.py [--trials 100] [--seed 0] [--restarts 6]
"""

import argparse

import numpy as np

from entloc import Instrument, LEConfig, gconcurrence_measure, monotonicity_gap
from entloc.sampling import random_instrument, random_pure, spawn_rngs
from entloc.states import DimSpec


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--restarts", type=int, default=6)
    ap.add_argument("--tol", type=float, default=2e-3,
                    help="gap above this counts as a violation")
    args = ap.parse_args()

    dims = DimSpec.make(("A", 2, "A"), ("B", 2, "B"), ("C", 2, "Z"))
    measure = gconcurrence_measure()
    gaps, fsums, violations = [], [], 0
    for i, rng in enumerate(spawn_rngs(args.seed, args.trials)):
        psi = random_pure(dims, rng)
        inst = Instrument("A", tuple(
            tuple(ms)
            for ms in random_instrument(2, int(rng.integers(2, 4)),
                                        int(rng.integers(1, 3)), rng)
        ))
        fsums.append(sum(inst.f_factors()))
        gap = monotonicity_gap(psi.to_density(), inst, measure,
                               config=LEConfig(restarts=args.restarts,
                                               max_iters=200,
                                               seed=int(rng.integers(2**31))))
        gaps.append(gap)
        if gap > args.tol:
            violations += 1
            print(f"trial {i}: gap {gap:+.3e} exceeds {args.tol:.0e}")

    gaps = np.array(gaps)
    print(f"{args.trials} trials, seed {args.seed}")
    print(f"gap: max {gaps.max():+.3e}  median {np.median(gaps):+.3e}  "
          f"min {gaps.min():+.3e}")
    print(f"f-factor sum: max {max(fsums):.12f} (bound 1)")
    print(f"violations above {args.tol:.0e}: {violations}")
    return 1 if violations else 0


if __name__ == "__main__":
    raise SystemExit(main())
