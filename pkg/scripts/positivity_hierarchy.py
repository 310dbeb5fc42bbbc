"""Positivity, 2-positivity, complete positivity and the Schwarz inequality for the first
example map across a sweep of phase angles.

    python scripts/positivity_hierarchy.py --points 9 --trials 1000 --seed 42
"""
import argparse

import numpy as np

from posmaps import example1
from posmaps.checks import cp_test, k_positivity_test, positivity_sample_test, schwarz_violation_search


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--points", type=int, default=9)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    args = p.parse_args()
    print(f"{'theta':>8} {'pos viol':>9} {'2-pos worst':>12} {'cp worst':>10} {'schwarz worst':>14}")
    for theta in np.linspace(-np.pi, np.pi, args.points):
        f = example1(theta).map
        pos = positivity_sample_test(f, args.trials, args.seed)
        kp = k_positivity_test(f, 2, args.trials, args.seed)
        cp = cp_test(f)
        sw = schwarz_violation_search(f, args.trials, args.seed)
        print(f"{theta:8.4f} {pos.violations:9d} {kp.worst_value:12.6f} {cp.worst_value:10.6f} {sw.worst_value:14.6f}")


if __name__ == "__main__":
    main()
