#!/usr/bin/env python3
"""Sweep the pair distance delta and record achieved path tightness.

For each delta the harness generates seeded instance pairs, connects them
(soft algebraic when --polys is given, plain commuting otherwise after
dilation for --mode aulpac), and prints mean/max achieved eps plus the pass
rate.  The averaged achieved eps should grow monotonically with delta.

Run:  python scripts/connectivity_sweep.py --mode ulpac --polys z^2-1 \
          --deltas 0.005,0.01,0.02,0.04 --trials 50
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from matword.deformation import InstanceSpec, verify_aulpac, verify_ulpac
from matword.io import parse_poly_literal


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mode", choices=["ulpac", "aulpac"], default="ulpac")
    ap.add_argument("--kind", choices=["cube", "sphere"], default="cube")
    ap.add_argument("--m", type=int, default=2)
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--deltas", default="0.005,0.01,0.02,0.04")
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--polys", nargs="*", default=None)
    ap.add_argument("--eps-alg", type=float, default=1e-3)
    args = ap.parse_args()

    polys = None
    if args.polys:
        polys = tuple(parse_poly_literal(t) for t in args.polys)

    print(f"{'delta':>8}  {'mean eps':>10}  {'max eps':>10}  {'pass rate':>9}")
    prev = 0.0
    for delta_txt in args.deltas.split(","):
        delta = float(delta_txt)
        spec = InstanceSpec(
            kind=args.kind, m=args.m, n=args.n, delta=delta, seed=args.seed,
            polys=polys, eps_alg=args.eps_alg if polys else 0.0,
        )
        if args.mode == "ulpac":
            report = verify_ulpac(spec, args.trials)
        else:
            report = verify_aulpac(spec, args.trials)
        stats = report.achieved_stats()
        marker = "" if stats["mean"] >= prev else "  (non-monotone!)"
        print(
            f"{delta:8.4f}  {stats['mean']:10.5f}  {stats['max']:10.5f}"
            f"  {report.pass_rate:9.2f}{marker}"
        )
        prev = stats["mean"]


if __name__ == "__main__":
    main()
