"""Sampled matrix paths: curved conjugations, flat interpolations, concatenation.

Paths are sampled maps [0,1] -> M_n stored as (times, samples).  The default
sample count is 65 so that concatenation junctions land on existing samples.
Verification is report-only: each constraint yields its per-sample maximum
residual and a pass/fail against the supplied bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .linalg import (
    as_square,
    commutator,
    default_tol,
    frozen,
    hermitian_part,
    operator_norm,
)
from .minpoly import PolyC, poly_eval_matrix

DEFAULT_SAMPLES = 65


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class MatrixPath:
    times: np.ndarray  # (s,), increasing, t[0] = 0, t[-1] = 1
    samples: np.ndarray  # (s, n, n)
    kind: str  # "curved" | "flat" | "flat-functional" | "concat"
    generator: np.ndarray | None = None  # hermitian H for curved paths

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        s = np.asarray(self.samples, dtype=complex)
        if t.ndim != 1 or len(t) < 2:
            raise PathError("a path needs at least two samples")
        if s.shape != (len(t), s.shape[1], s.shape[1]):
            raise PathError(f"samples shaped {s.shape} do not match {len(t)} times")
        if not (np.all(np.diff(t) > 0) and t[0] == 0.0 and t[-1] == 1.0):
            raise PathError("times must increase strictly from 0 to 1")
        object.__setattr__(self, "times", frozen(t))
        object.__setattr__(self, "samples", frozen(s))

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def n_samples(self) -> int:
        return len(self.times)

    @property
    def start(self) -> np.ndarray:
        return self.samples[0]

    @property
    def end(self) -> np.ndarray:
        return self.samples[-1]


def _timegrid(n_samples: int) -> np.ndarray:
    if n_samples < 2:
        raise PathError("n_samples must be >= 2")
    return np.linspace(0.0, 1.0, n_samples)


def curved_path(h, d, n_samples: int = DEFAULT_SAMPLES, herm_tol: float | None = None) -> MatrixPath:
    """Conjugation path t -> exp(i*pi*t*H) D exp(-i*pi*t*H)."""
    h = as_square(h)
    d = as_square(d)
    if h.shape != d.shape:
        raise PathError("generator and matrix dimensions disagree")
    herm_tol = default_tol(h.shape[0]) if herm_tol is None else herm_tol
    if operator_norm(h - h.conj().T) > herm_tol:
        raise PathError("curved path generator must be hermitian")
    w, q = np.linalg.eigh(hermitian_part(h))
    times = _timegrid(n_samples)
    samples = np.empty((n_samples, *d.shape), dtype=complex)
    for i, t in enumerate(times):
        u = (q * np.exp(1j * np.pi * t * w)) @ q.conj().T
        samples[i] = u @ d @ u.conj().T
    return MatrixPath(times, samples, "curved", generator=frozen(hermitian_part(h)))


def flat_path(x, y, n_samples: int = DEFAULT_SAMPLES) -> MatrixPath:
    """Linear interpolation t -> (1-t) X + t Y."""
    x = as_square(x)
    y = as_square(y)
    if x.shape != y.shape:
        raise PathError("endpoint dimensions disagree")
    times = _timegrid(n_samples)
    samples = np.array([(1.0 - t) * x + t * y for t in times])
    return MatrixPath(times, samples, "flat")


def flat_functional_path(
    f: Callable[[np.ndarray], np.ndarray],
    h2,
    h3,
    n_samples: int = DEFAULT_SAMPLES,
    spectrum_tol: float = 1e-8,
) -> MatrixPath:
    """Spectral path t -> f(t*H3 + (1-t)*H2) for hermitian contractions.

    ``f`` receives the eigenvalue vector; spectra must stay inside [-1, 1]
    up to ``spectrum_tol``.
    """
    h2 = hermitian_part(as_square(h2))
    h3 = hermitian_part(as_square(h3))
    if h2.shape != h3.shape:
        raise PathError("endpoint dimensions disagree")
    times = _timegrid(n_samples)
    samples = np.empty((n_samples, *h2.shape), dtype=complex)
    for i, t in enumerate(times):
        w, q = np.linalg.eigh((1.0 - t) * h2 + t * h3)
        if w.min() < -1.0 - spectrum_tol or w.max() > 1.0 + spectrum_tol:
            raise PathError(
                f"interpolant spectrum [{w.min():.3f}, {w.max():.3f}] leaves [-1, 1] at t={t:.3f}"
            )
        samples[i] = (q * np.asarray(f(w), dtype=complex)) @ q.conj().T
    return MatrixPath(times, samples, "flat-functional")


def concat(p: MatrixPath, q: MatrixPath, tol: float | None = None) -> MatrixPath:
    """Concatenation: p traversed on [0, 1/2], q on [1/2, 1].

    Endpoints must match within ``tol``; the junction keeps p's final sample.
    """
    if p.dim != q.dim:
        raise PathError("path dimensions disagree")
    tol = default_tol(p.dim) if tol is None else tol
    mismatch = operator_norm(p.end - q.start)
    if mismatch > tol:
        raise PathError(f"junction mismatch {mismatch:.3e} exceeds tolerance {tol:.3e}")
    times = np.concatenate([p.times / 2.0, 0.5 + q.times[1:] / 2.0])
    samples = np.concatenate([p.samples, q.samples[1:]], axis=0)
    return MatrixPath(times, samples, "concat")


def path_length(p: MatrixPath) -> float:
    """Polygonal length in operator norm (a lower bound of the true length)."""
    return float(sum(operator_norm(p.samples[i + 1] - p.samples[i])
                     for i in range(p.n_samples - 1)))


@dataclass(frozen=True)
class CommutationConstraint:
    """Commutator residual against another path (samplewise) or a fixed matrix."""

    partner: Union[MatrixPath, np.ndarray]
    bound: float
    label: str = "commutation"


@dataclass(frozen=True)
class PolynomialConstraint:
    poly: PolyC
    bound: float
    label: str = "polynomial"


@dataclass(frozen=True)
class NormalityConstraint:
    bound: float
    label: str = "normality"


@dataclass(frozen=True)
class TargetDistanceConstraint:
    target: np.ndarray
    bound: float
    label: str = "distance-to-target"


Constraint = Union[
    CommutationConstraint, PolynomialConstraint, NormalityConstraint, TargetDistanceConstraint
]


@dataclass(frozen=True)
class ConstraintResult:
    label: str
    max_residual: float
    bound: float
    passed: bool
    worst_t: float


@dataclass(frozen=True)
class PathReport:
    entries: tuple[ConstraintResult, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def max_residual(self, label: str) -> float:
        vals = [e.max_residual for e in self.entries if e.label == label]
        if not vals:
            raise KeyError(label)
        return max(vals)


def _constraint_residuals(p: MatrixPath, c: Constraint) -> np.ndarray:
    res = np.empty(p.n_samples)
    if isinstance(c, CommutationConstraint):
        if isinstance(c.partner, MatrixPath):
            if c.partner.n_samples != p.n_samples or np.any(c.partner.times != p.times):
                raise PathError("partner path must share the sample grid")
            for i in range(p.n_samples):
                res[i] = operator_norm(commutator(p.samples[i], c.partner.samples[i]))
        else:
            partner = as_square(c.partner)
            for i in range(p.n_samples):
                res[i] = operator_norm(commutator(p.samples[i], partner))
    elif isinstance(c, PolynomialConstraint):
        for i in range(p.n_samples):
            res[i] = operator_norm(poly_eval_matrix(c.poly, p.samples[i]))
    elif isinstance(c, NormalityConstraint):
        for i in range(p.n_samples):
            s = p.samples[i]
            res[i] = operator_norm(commutator(s, s.conj().T))
    elif isinstance(c, TargetDistanceConstraint):
        target = as_square(c.target)
        for i in range(p.n_samples):
            res[i] = operator_norm(p.samples[i] - target)
    else:
        raise PathError(f"unknown constraint {c!r}")
    return res


def verify_path(p: MatrixPath, constraints) -> PathReport:
    """Per-sample maxima of each constraint residual, checked against bounds."""
    entries = []
    for c in constraints:
        res = _constraint_residuals(p, c)
        worst = int(np.argmax(res))
        entries.append(
            ConstraintResult(
                label=c.label,
                max_residual=float(res[worst]),
                bound=float(c.bound),
                passed=bool(res[worst] <= c.bound),
                worst_t=float(p.times[worst]),
            )
        )
    return PathReport(tuple(entries))


def spectrum_drift(p: MatrixPath) -> float:
    """Largest matched deviation of sample eigenvalues from those at t=0.

    Eigenvalue multisets are matched by minimal-cost assignment, so the
    value is permutation-insensitive.
    """
    ref = np.linalg.eigvals(p.samples[0])
    worst = 0.0
    for i in range(1, p.n_samples):
        cur = np.linalg.eigvals(p.samples[i])
        cost = np.abs(ref[:, None] - cur[None, :])
        rows, cols = linear_sum_assignment(cost)
        worst = max(worst, float(cost[rows, cols].max()))
    return worst


def export_records(p: MatrixPath) -> list[dict]:
    """JSON-friendly stream of (t, matrix) records."""
    out = []
    for t, m in zip(p.times, p.samples):
        out.append(
            {
                "t": float(t),
                "matrix": [[float(v.real), float(v.imag)] for v in m.ravel()],
            }
        )
    return out
