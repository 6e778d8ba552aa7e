"""Run the shipped congruence batteries with orbit diagnostics.

Prints one line per (phi, k) pair and a per-preset summary.  Wall times
go to stderr so stdout stays comparable between runs.
"""
import argparse
import sys
import time
from fractions import Fraction

from eiscong import batteries, congruence, presets
from eiscong.nfcore import IdealLattice


def run_preset(name, bound, with_orbits):
    pre = presets.tower(name)
    o = IdealLattice.unit_ideal(pre.tower.base)
    total_mism = 0
    for k in (1, 2):
        for phi in batteries.battery(pre, k):
            t0 = time.time()
            rep = congruence.check_congruence(phi, pre, o, o, k,
                                              Fraction(bound),
                                              with_orbits=with_orbits)
            dt = time.time() - t0
            n = len(rep.get("mismatches", []))
            total_mism += n
            extra = ""
            if with_orbits:
                st = rep["orbit_stats"]
                sizes = ",".join(f"{s}:{c}" for s, c
                                 in sorted(st["orbit_sizes"].items()))
                extra = (f" orbits[{sizes}] bad={st['bad_orbits']}"
                         f" subtotal_bad={st['free_subtotal_bad']}"
                         f" fixed_bad={st['fixed_exponent_bad']}")
            print(f"{name} phi={phi.label} k={k}: {rep['status']}"
                  f" mism={n}{extra}")
            print(f"  [{dt:.1f}s]", file=sys.stderr)
    return total_mism


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--preset", action="append",
                    help="repeatable; default runs every shipped tower")
    ap.add_argument("--bound", type=int, default=30)
    ap.add_argument("--no-orbits", action="store_true")
    args = ap.parse_args()
    names = args.preset or presets.tower_names()
    bad = 0
    for name in names:
        bad += run_preset(name, args.bound, not args.no_orbits)
    print(f"total mismatches: {bad}")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
