"""Dense complex matrix kernels and spectral utilities.

Everything operates on plain numpy arrays holding square complex matrices.
Exact algebraic relations only hold up to floating point slack, so every
structural check takes an explicit tolerance; defaults scale as 1e-8 * n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class LinalgError(ValueError):
    """A matrix failed a structural precondition."""


class ClusteringError(LinalgError):
    """Eigenvalue gaps straddle the clustering threshold; refusing to guess."""


class JointDiagonalizationError(LinalgError):
    """Residual after joint diagonalization exceeds the admissible bound."""


def as_square(a) -> np.ndarray:
    """Coerce to a square complex matrix with finite entries."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise LinalgError("matrix has non-finite entries")
    return a


def operator_norm(a) -> float:
    """Largest singular value."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def default_tol(n: int) -> float:
    return 1e-8 * max(n, 1)


def frozen(a: np.ndarray) -> np.ndarray:
    """Read-only copy, so dataclass instances stay effectively immutable."""
    out = np.array(a, copy=True)
    out.flags.writeable = False
    return out


def commutator(a, b) -> np.ndarray:
    """[A, B] = AB - BA."""
    a = as_square(a)
    b = as_square(b)
    if a.shape != b.shape:
        raise LinalgError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def hermitian_part(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return (a + a.conj().T) / 2.0


def unitarity_defect(w) -> float:
    w = as_square(w)
    return operator_norm(w @ w.conj().T - np.eye(w.shape[0]))


def adjoint_action(w, x, tol: float | None = None) -> np.ndarray:
    """Conjugation W X W*; requires W unitary within ``tol``."""
    w = as_square(w)
    x = as_square(x)
    if w.shape != x.shape:
        raise LinalgError(f"dimension mismatch: {w.shape} vs {x.shape}")
    tol = default_tol(w.shape[0]) if tol is None else tol
    defect = unitarity_defect(w)
    if defect > tol:
        raise LinalgError(f"matrix is not unitary: defect {defect:.3e} > tol {tol:.3e}")
    return w @ x @ w.conj().T


def cartesian_decomposition(a) -> tuple[np.ndarray, np.ndarray]:
    """Split A = H + iK with H, K hermitian."""
    a = as_square(a)
    h = (a + a.conj().T) / 2.0
    k = (a - a.conj().T) / 2.0j
    return h, k


def phase_exp(h, t: float = 1.0) -> np.ndarray:
    """exp(i * pi * t * H) for hermitian H, via eigendecomposition.

    The result is unitary up to rounding regardless of ``t``.
    """
    h = hermitian_part(as_square(h))
    w, q = np.linalg.eigh(h)
    return (q * np.exp(1j * np.pi * t * w)) @ q.conj().T


def polar_decomposition(a) -> tuple[np.ndarray, np.ndarray]:
    """A = V R with V unitary and R positive semidefinite, via SVD.

    Rank-deficient inputs get a deterministic unitary completion from the
    SVD factors.
    """
    a = as_square(a)
    u, s, vh = np.linalg.svd(a)
    v = u @ vh
    r = (vh.conj().T * s) @ vh
    return v, r


def _single_linkage(values: np.ndarray, tol: float) -> list[list[int]]:
    """Single-linkage clusters of complex values at threshold ``tol``.

    Returned groups are ordered by (re, im) of their first member for
    determinism; members keep input order.
    """
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    ordered = sorted(groups.values(), key=lambda g: (values[g[0]].real, values[g[0]].imag))
    return ordered


def normality_defect(a) -> float:
    a = as_square(a)
    return operator_norm(commutator(a, a.conj().T))


def cluster_eigenbasis(
    a, cluster_tol: float, normal_tol: float | None = None
) -> tuple[list[complex], list[np.ndarray]]:
    """Cluster the spectrum of a normal matrix and return orthonormal bases.

    Returns (representatives, bases) where bases[j] has orthonormal columns
    spanning the invariant subspace of cluster j.  Raises ClusteringError
    when members stray farther than ``cluster_tol`` from their representative
    or two representatives come closer than ``cluster_tol``.
    """
    a = as_square(a)
    n = a.shape[0]
    normal_tol = default_tol(n) if normal_tol is None else normal_tol
    defect = normality_defect(a)
    if defect > normal_tol:
        raise LinalgError(f"matrix is not normal: defect {defect:.3e} > tol {normal_tol:.3e}")

    # Complex Schur of a normal matrix is diagonal with orthonormal vectors.
    t, q = scipy.linalg.schur(a, output="complex")
    eigs = np.diag(t)

    groups = _single_linkage(eigs, cluster_tol)
    reps = [complex(np.mean(eigs[g])) for g in groups]

    for rep, g in zip(reps, groups):
        spread = max(abs(eigs[i] - rep) for i in g)
        if spread > cluster_tol:
            raise ClusteringError(
                f"cluster spread {spread:.3e} exceeds cluster_tol {cluster_tol:.3e}; "
                "eigenvalue gaps straddle the threshold"
            )
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            gap = abs(reps[i] - reps[j])
            if gap <= cluster_tol:
                raise ClusteringError(
                    f"cluster representatives at distance {gap:.3e} <= cluster_tol"
                )

    bases = [q[:, g] for g in groups]
    return reps, bases


@dataclass(frozen=True)
class SpectralDecomposition:
    """Clustered eigenvalues with orthogonal spectral projections."""

    values: tuple[complex, ...]
    projections: tuple[np.ndarray, ...]
    cluster_tol: float

    def reconstruct(self) -> np.ndarray:
        out = np.zeros_like(self.projections[0])
        for lam, p in zip(self.values, self.projections):
            out = out + lam * p
        return out

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(p).real)) for p in self.projections)


def spectral_decomposition(
    a, cluster_tol: float, normal_tol: float | None = None
) -> SpectralDecomposition:
    """Spectral decomposition of a normal matrix with eigenvalue clustering."""
    values, bases = cluster_eigenbasis(a, cluster_tol, normal_tol)
    projections = tuple(frozen(b @ b.conj().T) for b in bases)
    return SpectralDecomposition(tuple(values), projections, cluster_tol)


@dataclass(frozen=True)
class NormalTuple:
    """Ordered tuple of same-size normal contractions with recorded slack."""

    matrices: tuple[np.ndarray, ...]
    commutator_bound: float
    contraction_slack: float

    @classmethod
    def from_matrices(cls, mats) -> "NormalTuple":
        mats = tuple(frozen(as_square(m)) for m in mats)
        if not mats:
            raise LinalgError("empty tuple")
        n = mats[0].shape[0]
        for m in mats:
            if m.shape[0] != n:
                raise LinalgError("tuple members have mixed dimensions")
        cb = 0.0
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                cb = max(cb, operator_norm(commutator(mats[i], mats[j])))
        slack = max((max(0.0, operator_norm(m) - 1.0) for m in mats), default=0.0)
        return cls(mats, cb, slack)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def arity(self) -> int:
        return len(self.matrices)

    def normality_defect(self) -> float:
        return max(normality_defect(m) for m in self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]


def _as_matrix_list(t) -> list[np.ndarray]:
    if isinstance(t, NormalTuple):
        return list(t.matrices)
    return [as_square(m) for m in t]


def _group_sorted_reals(w: np.ndarray, tol: float) -> list[np.ndarray]:
    """Contiguous index groups of an ascending real vector split at gaps > tol."""
    cuts = np.nonzero(np.diff(w) > tol)[0]
    return np.split(np.arange(len(w)), cuts + 1)


def _refine_basis(v: np.ndarray, mats: list[np.ndarray], ctol: float) -> list[np.ndarray]:
    if not mats or v.shape[1] == 1:
        return [v]
    b = hermitian_part(v.conj().T @ mats[0] @ v)
    w, s = np.linalg.eigh(b)
    out = []
    for idx in _group_sorted_reals(w, ctol):
        out.extend(_refine_basis(v @ s[:, idx], mats[1:], ctol))
    return out


def _is_diagonal(a: np.ndarray, tol: float) -> bool:
    return operator_norm(a - np.diag(np.diag(a))) <= tol


def joint_diagonalize(
    t, tol: float, cluster_tol: float | None = None
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Approximately diagonalize a tuple of almost-commuting normal matrices.

    Recursive block refinement: the hermitian part of the first matrix is
    diagonalized, eigenvalues are clustered, the next matrix is compressed
    to each cluster subspace, and so on through all real and imaginary
    parts.  The unitary is exact up to rounding; all approximation shows up
    in the off-diagonal residual, which must stay below an admissible bound
    that shrinks with ``tol``.

    Returns (U, diagonals) with U unitary and diagonals[j] the diagonal of
    U* X_j U.
    """
    mats = _as_matrix_list(t)
    n = mats[0].shape[0]
    cb = t.commutator_bound if isinstance(t, NormalTuple) else None
    if cb is None:
        cb = 0.0
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                cb = max(cb, operator_norm(commutator(mats[i], mats[j])))
    if cb > tol:
        raise JointDiagonalizationError(
            f"commutator bound {cb:.3e} exceeds tolerance {tol:.3e}"
        )

    diag_tol = 1e-13 * n
    if all(_is_diagonal(m, diag_tol) for m in mats):
        return np.eye(n, dtype=complex), [np.diag(m).copy() for m in mats]

    if cluster_tol is None:
        cluster_tol = max(1e-8, float(np.sqrt(max(cb, 0.0))))

    parts: list[np.ndarray] = []
    for m in mats:
        h, k = cartesian_decomposition(m)
        parts.append(h)
        parts.append(k)

    blocks = _refine_basis(np.eye(n, dtype=complex), parts, cluster_tol)
    u = np.hstack(blocks)

    diags = []
    residual = 0.0
    for m in mats:
        b = u.conj().T @ m @ u
        d = np.diag(b).copy()
        residual = max(residual, operator_norm(b - np.diag(d)))
        diags.append(d)

    bound = 10.0 * n * max(np.sqrt(max(tol, 0.0)), 1e-10)
    if residual > bound:
        raise JointDiagonalizationError(
            f"off-diagonal residual {residual:.3e} exceeds bound {bound:.3e}; "
            "tuple is not close enough to commuting"
        )
    return u, diags


def principal_unitary_log(
    z, tol: float | None = None, gap_tol: float = 1e-8
) -> np.ndarray:
    """Hermitian H with -1 <= H <= 1 and exp(i*pi*H) = Z.

    Requires the spectrum of the unitary Z to stay away from -1.
    """
    z = as_square(z)
    n = z.shape[0]
    tol = default_tol(n) if tol is None else tol
    defect = unitarity_defect(z)
    if defect > tol:
        raise LinalgError(f"matrix is not unitary: defect {defect:.3e}")

    t, q = scipy.linalg.schur(z, output="complex")
    eigs = np.diag(t)
    phases = eigs / np.abs(eigs)
    if np.min(np.abs(phases + 1.0)) <= gap_tol:
        raise LinalgError("unitary spectrum touches -1; principal log undefined")
    h = (q * (np.angle(phases) / np.pi)) @ q.conj().T
    return hermitian_part(h)
