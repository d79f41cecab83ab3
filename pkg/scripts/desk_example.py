#!/usr/bin/env python3
"""Desk-scale joint spectral clustering walkthrough.

Builds an almost-commuting hermitian pair (X, Y) with tight spectral
clusters, then emits the full set of data products for A = X + iY:

  field.csv       smallest-singular-value field with the eps mask
  triples.json    pseudospectral scanning triples
  poly.json       approximate minimal polynomial from Ritz values
  contours.csv    lemniscate contours of |p(z)| at --level
  pair.json       the generated matrices, reloadable by the CLI

Run:  python scripts/desk_example.py --out out_desk --n 100 --seed 7
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from matword import io
from matword.linalg import commutator, operator_norm
from matword.minpoly import approx_min_poly, lemniscate_contours, lemniscate_field
from matword.pseudospectra import chebyshev_grid, pseudospectrum, scan_triples
from matword.sampling import haar_unitary, random_hermitian


def clustered_pair(n, clusters, seed, target_comm=1.5e-3):
    rng = np.random.default_rng(seed)
    centers = []
    while len(centers) < clusters:
        cand = complex(rng.uniform(-0.45, 0.45), rng.uniform(-0.45, 0.45))
        if all(abs(cand - c) >= 0.25 for c in centers):
            centers.append(cand)
    per = n // clusters
    eigs = np.concatenate(
        [c + rng.uniform(0, 5e-5, per) * np.exp(2j * np.pi * rng.uniform(0, 1, per))
         for c in centers]
    )
    q = haar_unitary(rng, len(eigs))
    a0 = (q * eigs) @ q.conj().T
    x0, y0 = (a0 + a0.conj().T) / 2, (a0 - a0.conj().T) / 2j
    e1, e2 = random_hermitian(rng, len(eigs)), random_hermitian(rng, len(eigs))
    probe = operator_norm(commutator(x0 + 1e-3 * e1, y0 + 1e-3 * e2))
    eps = 1e-3 * target_comm / probe
    return x0 + eps * e1, y0 + eps * e2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--clusters", type=int, default=10)
    ap.add_argument("--seed", type=int, default=550_000)
    ap.add_argument("--grid", type=int, default=101)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--delta", type=float, default=1e-2)
    ap.add_argument("--max-deg", type=int, default=10)
    ap.add_argument("--level", type=float, default=1e-2)
    ap.add_argument("--out", default="out_desk")
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    x, y = clustered_pair(args.n, args.clusters, args.seed)
    comm = operator_norm(commutator(x, y))
    print(f"pair built: n={x.shape[0]}, ||[X,Y]|| = {comm:.3e}")
    io.save_matrices(out / "pair.json", [x, y], names=["X", "Y"])

    a = x + 1j * y
    grid = chebyshev_grid((-0.7, 0.7, -0.7, 0.7), args.grid, args.grid)
    result = pseudospectrum(a, args.eps, grid)
    io.write_field_csv(out / "field.csv", result.field, result.mask)
    triples = scan_triples(a, args.eps, grid.nodes[result.mask])
    io.write_triples_json(out / "triples.json", triples)
    print(f"scan: {int(result.mask.sum())} nodes inside, {len(triples)} triples")

    p, residual = approx_min_poly(a, args.delta, args.max_deg, seed=args.seed)
    io.save_poly(out / "poly.json", p)
    print(f"minpoly: degree {p.degree}, ||p(A)|| = {residual:.3e}")

    lem_grid = chebyshev_grid((-0.7, 0.7, -0.7, 0.7), 201, 201)
    field = lemniscate_field(p, lem_grid)
    contours = lemniscate_contours(field, args.level)
    io.write_contours_csv(out / "contours.csv", contours)
    io.write_field_csv(out / "lemniscate_field.csv", field)
    print(f"lemniscate: {len(contours)} contour(s) at level {args.level}")
    print(f"all products in {out}/")


if __name__ == "__main__":
    main()
