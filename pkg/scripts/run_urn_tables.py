#!/usr/bin/env python3
"""Tabulate urn-process tails against their closed-form bounds.

For doubling k, prints the exact upper-tail probability of the uniform
draw (more than 7k/8 distinct colors) and of the gamma-biased draw (more
than 0.99k), next to the respective bounds, flagging where a bound is
vacuous (>= 1).
"""

import argparse

from seedbounds import bounds
from seedbounds.urn import (biased_distinct_colors_dp, distinct_colors_exact,
                            tail_probability)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=2048)
    ap.add_argument("--gamma", type=float, default=5.0)
    args = ap.parse_args()

    ks = []
    k = 16
    while k <= args.kmax:
        ks.append(k)
        k *= 2

    print("k,uniform_tail_7_8,uniform_bound,biased_tail_0_99,biased_bound,notes")
    for k in ks:
        ut = tail_probability(distinct_colors_exact(k), 7 / 8)
        ub = bounds.uniform_tail_bound(k)
        bt = tail_probability(biased_distinct_colors_dp(k, args.gamma), 0.99)
        bb = bounds.biased_tail_bound(k)
        notes = []
        if bounds.is_vacuous(ub):
            notes.append("uniform_bound_vacuous")
        if bounds.is_vacuous(bb):
            notes.append("biased_bound_vacuous")
        print(f"{k},{ut:.6g},{ub:.6g},{bt:.6g},{bb:.6g},{'+'.join(notes)}")


if __name__ == "__main__":
    main()
