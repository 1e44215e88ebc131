#!/usr/bin/env python3
"""Measured redundancy of the worst-case tANS input against the lower bound.

    python3 scripts/adversarial_table.py --rs 4,6,8,10,12,14
"""

import argparse

from ansbounds.adversarial import build_adversarial, lower_bound_bits, verify_alternation
from ansbounds.analysis import measure
from ansbounds.spread import SPREADS


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rs", default="4,6,8,10,12")
    args = p.parse_args(argv)

    print(f"{'r':>3} {'sigma':>6} {'bound':>10} {'simplified':>12} {'precise':>12} "
          f"{'per letter':>11}")
    for r in (int(v) for v in args.rs.split(",")):
        inst = build_adversarial(r)
        measured = []
        for name in ("simplified", "precise"):
            verify_alternation(inst, SPREADS[name](inst.table))
            rep = measure(f"tans-{name}", inst.sequence, inst.table,
                          paper_push_order=True, bound="thm3")
            measured.append(rep)
        print(f"{r:>3} {inst.sigma:>6} {lower_bound_bits(inst.sigma, r):>10.2f} "
              f"{measured[0].redundancy:>12.3f} {measured[1].redundancy:>12.3f} "
              f"{measured[0].per_letter_redundancy:>11.5f}")


if __name__ == "__main__":
    main()
