"""Print the peripheral spectrum, ergodicity, group closure and eigenvector classes of the
example maps over a few phase angles.

    python scripts/reproduce_examples.py [--theta 1.2566 ...]
"""
import argparse
import math
import warnings

from posmaps import classify_eigenvector, eigendecompose, example1, example2, group_closure, is_ergodic
from posmaps.spectral import principal_arg


def describe(built):
    d = eigendecompose(built.map)
    per = d.peripheral
    ergodic = is_ergodic(d).ergodic
    print(f"{built.label}")
    print(f"  ergodic: {ergodic}   group: {group_closure([c.value for c in per]).is_group}")
    for c in per:
        # the eigenvector classification only applies to ergodic maps
        cases = [classify_eigenvector(built.map, c.value, b).case.value for b in c.basis] if ergodic else "-"
        print(f"  arg/pi = {principal_arg(c.value) / math.pi:+.4f}  mult {c.multiplicity}  cases {cases}")


def main():
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--theta", type=float, nargs="*", default=[2 * math.pi / 5, math.pi / 2, math.pi])
    args = p.parse_args()
    warnings.simplefilter("ignore")
    for theta in args.theta:
        describe(example1(theta))
        describe(example2(theta))


if __name__ == "__main__":
    main()
