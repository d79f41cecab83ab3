"""File formats: matrix containers, polynomials, fields, contours, reports.

Matrices travel in a JSON container with entries as row-major [re, im]
pairs.  Loaders validate dimensions and finiteness and recompute all
tolerances rather than trusting stored ones.  Report files carry no
timestamps in their bodies, so identical inputs reproduce identical bytes;
CSV files may carry a leading '#' comment line which parsers skip.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .linalg import NormalTuple, as_square
from .minpoly import PolyC
from .pseudospectra import Grid2D, ScalarField2D, ScanTriple

MATRIX_FORMAT = "matword-matrix-v1"
POLY_FORMAT = "matword-poly-v1"
NCPOLY_FORMAT = "matword-ncpoly-v1"


class FileFormatError(ValueError):
    pass


def _pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in values.ravel()]


def _from_pairs(pairs, count: int, what: str) -> np.ndarray:
    if len(pairs) != count:
        raise FileFormatError(f"{what}: expected {count} entries, found {len(pairs)}")
    out = np.empty(count, dtype=complex)
    for i, pair in enumerate(pairs):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise FileFormatError(f"{what}: entry {i} is not an [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (np.isfinite(re) and np.isfinite(im)):
            raise FileFormatError(f"{what}: entry {i} is not finite")
        out[i] = complex(re, im)
    return out


def save_matrices(path, matrices, names=None, meta: dict | None = None):
    """Write one or more square matrices to the JSON container."""
    if isinstance(matrices, NormalTuple):
        matrices = list(matrices.matrices)
    if isinstance(matrices, np.ndarray) and matrices.ndim == 2:
        matrices = [matrices]
    matrices = [as_square(m) for m in matrices]
    dim = matrices[0].shape[0]
    names = names or [f"m{i}" for i in range(len(matrices))]
    doc = {
        "format": MATRIX_FORMAT,
        "dim": dim,
        "matrices": [
            {"name": nm, "entries": _pairs(m)} for nm, m in zip(names, matrices)
        ],
    }
    if meta:
        doc["meta"] = meta
    Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


def _load_json(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: parse error at byte offset {exc.pos}: {exc.msg}") from exc


def load_matrices(path):
    """Load the container; a single matrix comes back as an array, several
    as a NormalTuple with freshly computed bounds."""
    doc = _load_json(path)
    if doc.get("format") != MATRIX_FORMAT:
        raise FileFormatError(f"{path}: unrecognized format {doc.get('format')!r}")
    dim = int(doc["dim"])
    entries = doc.get("matrices", [])
    if not entries:
        raise FileFormatError(f"{path}: container holds no matrices")
    mats = []
    for i, rec in enumerate(entries):
        flat = _from_pairs(rec["entries"], dim * dim, f"{path}: matrix {i}")
        mats.append(flat.reshape(dim, dim))
    if len(mats) == 1:
        return mats[0]
    return NormalTuple.from_matrices(mats)


def load_tuple(path) -> NormalTuple:
    got = load_matrices(path)
    if isinstance(got, NormalTuple):
        return got
    return NormalTuple.from_matrices([got])


def save_poly(path, p: PolyC):
    doc = {
        "format": POLY_FORMAT,
        "coeffs": [[complex(c).real, complex(c).imag] for c in p.coeffs],
        "monic": bool(p.monic),
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


def load_poly(path) -> PolyC:
    doc = _load_json(path)
    if doc.get("format") != POLY_FORMAT:
        raise FileFormatError(f"{path}: unrecognized format {doc.get('format')!r}")
    coeffs = tuple(complex(re, im) for re, im in doc["coeffs"])
    return PolyC(coeffs, monic=bool(doc.get("monic", False)))


def parse_poly_literal(text: str) -> PolyC:
    """Parse 'z^2-1'-style literals or comma-separated ascending coefficients.

    Literal terms use integer or decimal coefficients; the comma form lists
    c0,c1,...  Real coefficients only.
    """
    import re as _re

    text = text.strip()
    if "," in text:
        coeffs = tuple(complex(float(tok)) for tok in text.split(","))
        return PolyC(coeffs)
    cleaned = text.replace(" ", "").replace("-", "+-")
    if cleaned.startswith("+"):
        cleaned = cleaned[1:]
    terms = [t for t in cleaned.split("+") if t]
    if not terms:
        raise FileFormatError(f"cannot parse polynomial {text!r}")
    pattern = _re.compile(r"^(-?\d*\.?\d*)(z(?:\^(\d+))?)?$")
    accum: dict[int, float] = {}
    for term in terms:
        m = pattern.match(term)
        if not m or (not m.group(1) and not m.group(2)):
            raise FileFormatError(f"cannot parse polynomial term {term!r}")
        coeff_txt, zpart, power_txt = m.group(1), m.group(2), m.group(3)
        if coeff_txt in ("", "-"):
            coeff = -1.0 if coeff_txt == "-" else 1.0
        else:
            coeff = float(coeff_txt)
        power = 0
        if zpart:
            power = int(power_txt) if power_txt else 1
        accum[power] = accum.get(power, 0.0) + coeff
    degree = max(accum)
    coeffs = tuple(complex(accum.get(k, 0.0)) for k in range(degree + 1))
    return PolyC(coeffs)


def write_field_csv(path, field: ScalarField2D, mask: np.ndarray | None = None, header: str | None = None):
    lines = []
    if header:
        lines.append(f"# {header}")
    cols = "re,im,value" + (",mask" if mask is not None else "")
    lines.append(cols)
    for i, z in enumerate(field.grid.nodes):
        row = f"{z.real!r},{z.imag!r},{field.values[i]!r}"
        if mask is not None:
            row += f",{int(mask[i])}"
        lines.append(row)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def field_json_dict(field: ScalarField2D, mask: np.ndarray | None = None) -> dict:
    g = field.grid
    doc = {
        "grid": {
            "kind": g.kind,
            "bounds": list(g.bounds),
            "shape": None if g.shape is None else list(g.shape),
            "cell_order": g.cell_order,
            "cells": None
            if g.cells is None
            else [[c.x0, c.x1, c.y0, c.y1, c.depth] for c in g.cells],
            "nodes": _pairs(g.nodes),
        },
        "values": [float(v) for v in field.values],
    }
    if mask is not None:
        doc["mask"] = [int(b) for b in mask]
    return doc


def write_field_json(path, field: ScalarField2D, mask: np.ndarray | None = None):
    Path(path).write_text(
        json.dumps(field_json_dict(field, mask), sort_keys=True), encoding="utf-8"
    )


def load_grid_json(path) -> Grid2D:
    from .pseudospectra import QuadCell
    from .linalg import frozen

    doc = _load_json(path)
    g = doc["grid"] if "grid" in doc else doc
    nodes = _from_pairs(g["nodes"], len(g["nodes"]), f"{path}: nodes")
    cells = None
    if g.get("cells") is not None:
        cells = tuple(QuadCell(c[0], c[1], c[2], c[3], int(c[4])) for c in g["cells"])
    shape = None if g.get("shape") is None else tuple(int(v) for v in g["shape"])
    return Grid2D(
        bounds=tuple(float(b) for b in g["bounds"]),
        nodes=frozen(nodes),
        kind=g["kind"],
        shape=shape,
        cells=cells,
        cell_order=int(g.get("cell_order", 3)),
    )


def write_grid_json(path, grid: Grid2D):
    doc = {
        "grid": {
            "kind": grid.kind,
            "bounds": list(grid.bounds),
            "shape": None if grid.shape is None else list(grid.shape),
            "cell_order": grid.cell_order,
            "cells": None
            if grid.cells is None
            else [[c.x0, c.x1, c.y0, c.y1, c.depth] for c in grid.cells],
            "nodes": _pairs(grid.nodes),
        }
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


def triples_json_dict(triples: list[ScanTriple]) -> list[dict]:
    return [
        {
            "sigma": [t.sigma.real, t.sigma.imag],
            "residual": t.residual,
            "u": _pairs(t.u),
            "v": _pairs(t.v),
            "rank": t.v.shape[1],
        }
        for t in triples
    ]


def write_triples_json(path, triples: list[ScanTriple]):
    Path(path).write_text(json.dumps(triples_json_dict(triples), sort_keys=True), encoding="utf-8")


def write_contours_csv(path, contours, header: str | None = None):
    lines = []
    if header:
        lines.append(f"# {header}")
    lines.append("contour,vertex,re,im")
    for ci, poly in enumerate(contours):
        for vi, z in enumerate(poly):
            lines.append(f"{ci},{vi},{z.real!r},{z.imag!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json_report(path, doc: dict):
    Path(path).write_text(json.dumps(doc, sort_keys=True), encoding="utf-8")


def write_csv_rows(path, rows, header_comment: str | None = None):
    lines = []
    if header_comment:
        lines.append(f"# {header_comment}")
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def ncpoly_json_dict(system) -> dict:
    return {
        "format": NCPOLY_FORMAT,
        "nvars": system.nvars,
        "eps": system.eps,
        "polys": [
            [
                [
                    [complex(alpha).real, complex(alpha).imag],
                    {
                        "coeff_indices": list(w.coeff_indices),
                        "var_indices": list(w.var_indices),
                        "exponents": list(w.exponents),
                    },
                ]
                for alpha, w in poly
            ]
            for poly in system.polys
        ],
    }


def save_ncpoly(path, system):
    Path(path).write_text(json.dumps(ncpoly_json_dict(system), sort_keys=True), encoding="utf-8")


def load_ncpoly(path):
    from .words import NCPolySystem, WordSpec

    doc = _load_json(path)
    if doc.get("format") != NCPOLY_FORMAT:
        raise FileFormatError(f"{path}: unrecognized format {doc.get('format')!r}")
    polys = []
    for poly in doc["polys"]:
        terms = []
        for alpha, w in poly:
            terms.append(
                (
                    complex(alpha[0], alpha[1]),
                    WordSpec(
                        tuple(int(i) for i in w["coeff_indices"]),
                        tuple(int(i) for i in w["var_indices"]),
                        tuple(int(i) for i in w["exponents"]),
                    ),
                )
            )
        polys.append(tuple(terms))
    return NCPolySystem(int(doc["nvars"]), tuple(polys), float(doc["eps"]))
