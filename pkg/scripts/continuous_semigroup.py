"""Check the composition law of the continuous family t -> f_t over random time pairs."""
import argparse

import numpy as np

from posmaps.papermaps import example1_family, semigroup_law_check


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--theta", type=float, default=2 * np.pi / 5)
    p.add_argument("--pairs", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    pairs = np.random.default_rng(args.seed).uniform(0.01, 5.0, size=(args.pairs, 2))
    r = semigroup_law_check(example1_family(args.theta), [tuple(st) for st in pairs])
    print(f"max ||f_s f_t - f_(s+t)|| over {args.pairs} pairs: {r.max_deviation:.3e}  passed: {r.passed}")


if __name__ == "__main__":
    main()
