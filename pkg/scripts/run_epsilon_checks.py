"""Sweep the local-constant identities at desk scale.

Covers the Gauss conductor sweep, the half-integral comparison sweep,
conductor-discriminant plus both inductivity statements per tower, and
the telescoping Euler-factor identity.
"""
import argparse
import sys

from eiscong import presets
from eiscong import localfactors as lf
from eiscong.cli import _eps_catalogue


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--gauss-bound", type=int, default=50)
    ap.add_argument("--katz-bound", type=int, default=25)
    ap.add_argument("--emax", type=int, default=5)
    args = ap.parse_args()
    bad = 0

    sweep = lf.gauss_conductor_sweep(args.gauss_bound)
    print(f"gauss sweep <= {args.gauss_bound}: {sweep['checked']} chars, "
          f"{'ok' if sweep['ok'] else 'FAILED'}")
    bad += not sweep["ok"]

    sweep = lf.katz_deligne_sweep(args.katz_bound)
    print(f"half-integral sweep <= {args.katz_bound}: "
          f"{sweep['checked']} pairs, {'ok' if sweep['ok'] else 'FAILED'}")
    bad += not sweep["ok"]

    for name in presets.tower_names():
        pre = presets.tower(name)
        cd = lf.conductor_discriminant(pre)
        print(f"{name} conductor-discriminant: disc {cd['disc_abs']} = "
              f"prod {cd['char_conductors']}: "
              f"{'ok' if cd['ok'] else 'FAILED'}")
        bad += not cd["ok"]
        for label, chi in _eps_catalogue(pre):
            d0 = lf.inductivity_degree_zero(chi, pre)
            ep = lf.epsilon_inductivity(chi, pre)
            tag = "exact" if ep["equal"] else (
                "|.|^2 only" if ep["abs_sq_equal"] else "FAILED")
            print(f"{name} {label}: degree-zero "
                  f"{'ok' if d0['equal'] else 'FAILED'}, epsilon {tag}")
            bad += (not d0["equal"]) + (not ep["abs_sq_equal"])

    for e in range(args.emax + 1):
        rep = lf.verify_euler_identity(e)
        print(f"euler e={e}: {'ok' if rep['ok'] else 'FAILED'}")
        bad += not rep["ok"]

    print("all ok" if not bad else f"{bad} failures")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
