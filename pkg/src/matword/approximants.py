"""Constructive approximation lemmas at matrix scale.

Projection refinement, the nearby commuting unitary with its explicit
constant 3r(r-1)/s, joint isospectral approximants built from minimal-cost
eigenvalue matching, nearby generators with fully split spectra, and the
block compression / doubling / dilation toolkit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .linalg import (
    LinalgError,
    NormalTuple,
    as_square,
    cluster_eigenbasis,
    commutator,
    default_tol,
    frozen,
    joint_diagonalize,
    operator_norm,
    polar_decomposition,
)


class ApproximantError(ValueError):
    pass


class MatchingError(ApproximantError):
    """Eigenvalue matching cost exceeded the requested bound."""


@dataclass(frozen=True)
class ProjectionFamily:
    """Pairwise orthogonal hermitian projections summing to the identity."""

    projections: tuple[np.ndarray, ...]
    orthogonality_residual: float
    completeness_residual: float

    @classmethod
    def from_projections(cls, projs, tol: float | None = None) -> "ProjectionFamily":
        projs = tuple(frozen(as_square(p)) for p in projs)
        if not projs:
            raise ApproximantError("empty projection family")
        n = projs[0].shape[0]
        tol = default_tol(n) if tol is None else tol
        ortho = 0.0
        for i, p in enumerate(projs):
            if operator_norm(p - p.conj().T) > tol or operator_norm(p @ p - p) > tol:
                raise ApproximantError(f"member {i} is not a hermitian projection")
            for q in projs[i + 1 :]:
                ortho = max(ortho, operator_norm(p @ q))
        complete = operator_norm(sum(projs) - np.eye(n))
        if ortho > tol:
            raise ApproximantError(f"family not pairwise orthogonal: {ortho:.3e}")
        if complete > tol:
            raise ApproximantError(f"family does not resolve the identity: {complete:.3e}")
        return cls(projs, ortho, complete)

    def __len__(self):
        return len(self.projections)


def refine_projections(
    p: ProjectionFamily, q: ProjectionFamily, tol: float | None = None
) -> ProjectionFamily:
    """Common refinement: nonzero products P_j Q_k of two commuting families.

    The output spans both inputs and has at most |P| * |Q| members.
    """
    n = p.projections[0].shape[0]
    tol = default_tol(n) if tol is None else tol
    for pj in p.projections:
        for qk in q.projections:
            c = operator_norm(commutator(pj, qk))
            if c > tol:
                raise ApproximantError(f"families do not commute: residual {c:.3e}")
    out = []
    for pj in p.projections:
        for qk in q.projections:
            r = pj @ qk
            if operator_norm(r) > 0.5:
                out.append((r + r.conj().T) / 2.0)
    return ProjectionFamily.from_projections(out, tol=10 * tol)


@dataclass(frozen=True)
class CommutingUnitaryResult:
    """Unitary commuting with D, with the explicit proof constant.

    ``constant`` is 3r(r-1)/s for r spectral clusters at minimum gap s, and
    ||1 - W Z|| <= constant * ||W D W* - D|| holds for the input unitary W.
    Blocks whose compression vanished got an identity completion; their
    indices are recorded.
    """

    z: np.ndarray
    constant: float
    commutation_residual: float
    completed_blocks: tuple[int, ...]


def nearby_commuting_unitary(
    w,
    d,
    cluster_tol: float = 1e-8,
    normal_tol: float | None = None,
    min_gap: float = 1e-8,
    unitary_tol: float | None = None,
) -> CommutingUnitaryResult:
    """Unitary Z with [Z, D] = 0 and ||1 - W Z|| <= (3r(r-1)/s) ||W D W* - D||.

    Built by compressing W to the spectral blocks of D and replacing each
    block by the unitary factor of its polar decomposition.
    """
    w = as_square(w)
    d = as_square(d)
    n = w.shape[0]
    if w.shape != d.shape:
        raise LinalgError("dimension mismatch")
    unitary_tol = default_tol(n) if unitary_tol is None else unitary_tol
    defect = operator_norm(w @ w.conj().T - np.eye(n))
    if defect > unitary_tol:
        raise LinalgError(f"W is not unitary: defect {defect:.3e}")

    values, bases = cluster_eigenbasis(d, cluster_tol, normal_tol)
    r = len(values)
    if r == 1:
        # Everything commutes with an (almost) scalar matrix.
        return CommutingUnitaryResult(frozen(w.conj().T), 0.0,
                                      operator_norm(commutator(w.conj().T, d)), ())

    s = min(
        abs(values[i] - values[j]) for i in range(r) for j in range(i + 1, r)
    )
    if s < min_gap:
        raise ApproximantError(f"spectral gap {s:.3e} below min_gap {min_gap:.3e}")

    v = np.zeros((n, n), dtype=complex)
    completed = []
    for idx, basis in enumerate(bases):
        block = basis.conj().T @ w @ basis
        if operator_norm(block) <= 1e-12:
            vb = np.eye(block.shape[0], dtype=complex)
            completed.append(idx)
        else:
            vb, _ = polar_decomposition(block)
        v += basis @ vb @ basis.conj().T

    z = v.conj().T
    constant = 3.0 * r * (r - 1) / s
    residual = operator_norm(commutator(z, d))
    return CommutingUnitaryResult(frozen(z), constant, residual, tuple(completed))


@dataclass(frozen=True)
class IsospectralApproximant:
    """Inner automorphism x -> W x W* with its eigenvalue-slot matching."""

    w: np.ndarray
    permutation: np.ndarray | None  # source slot i -> target slot permutation[i]
    matching_cost: float
    source_distance: float  # max_j ||W X_j W* - X_j||
    target_distance: float  # max_j ||W X_j W* - Y_j||
    commutation_residual: float  # max_j ||[W X_j W*, Y_j]||

    @property
    def dim(self) -> int:
        return self.w.shape[0]

    def apply(self, x) -> np.ndarray:
        x = as_square(x)
        return self.w @ x @ self.w.conj().T

    def apply_tuple(self, mats) -> list[np.ndarray]:
        return [self.apply(m) for m in mats]

    def inverse(self) -> "IsospectralApproximant":
        return IsospectralApproximant(
            frozen(self.w.conj().T),
            None if self.permutation is None else frozen(np.argsort(self.permutation)),
            self.matching_cost,
            self.source_distance,
            self.target_distance,
            self.commutation_residual,
        )


def matching_cost_matrix(
    dx: list[np.ndarray], dy: list[np.ndarray], overlap: np.ndarray | None = None,
    overlap_weight: float = 0.0,
) -> np.ndarray:
    """Assignment cost between joint eigenvalue slots.

    Base cost is the maximum coordinatewise modulus difference.  When an
    eigenvector overlap matrix is supplied, slots with disjoint eigenvectors
    are penalized, which breaks value ties toward the geometric
    correspondence (crossed matches on near-degenerate values would
    otherwise make the conjugation uncompressible).
    """
    n = dx[0].shape[0]
    cost = np.zeros((n, n))
    for dxj, dyj in zip(dx, dy):
        cost = np.maximum(cost, np.abs(dxj[:, None] - dyj[None, :]))
    if overlap is not None and overlap_weight > 0.0:
        cost = cost + overlap_weight * (1.0 - np.abs(overlap) ** 2)
    return cost


def joint_isospectral_approximant(
    x: NormalTuple,
    y: NormalTuple,
    delta: float,
    tol: float | None = None,
    max_cost: float | None = None,
) -> IsospectralApproximant:
    """Unitary conjugation carrying X's joint eigenbasis onto Y's.

    Joint eigenvalue vectors are matched by minimal-cost assignment where a
    pair costs the maximum coordinatewise modulus difference, plus an
    eigenvector-overlap tie-break at the scale of the pair distance.
    Spectra are preserved exactly (conjugation); distances to source and
    target are recorded.
    """
    if x.arity != y.arity or x.dim != y.dim:
        raise ApproximantError("tuples must share arity and dimension")
    n = x.dim
    tol = default_tol(n) if tol is None else tol
    for t, name in ((x, "source"), (y, "target")):
        if t.commutator_bound > tol:
            raise ApproximantError(
                f"{name} tuple commutator bound {t.commutator_bound:.3e} exceeds {tol:.3e}"
            )
    slack = delta * (1.0 + 1e-9) + 1e-12
    for j, (xj, yj) in enumerate(zip(x, y)):
        dist = operator_norm(xj - yj)
        if dist > slack:
            raise ApproximantError(f"||X_{j} - Y_{j}|| = {dist:.3e} exceeds delta {delta:.3e}")

    ux, dx = joint_diagonalize(x, tol=max(x.commutator_bound, 1e-12))
    uy, dy = joint_diagonalize(y, tol=max(y.commutator_bound, 1e-12))

    overlap = ux.conj().T @ uy
    cost = matching_cost_matrix(dx, dy, overlap, overlap_weight=max(delta, 1e-12))
    rows, cols = linear_sum_assignment(cost)
    perm = cols[np.argsort(rows)]
    value_cost = matching_cost_matrix(dx, dy)
    matched = float(value_cost[np.arange(n), perm].max())
    if max_cost is not None and matched > max_cost:
        raise MatchingError(f"matching cost {matched:.3e} exceeds {max_cost:.3e}")

    p = np.zeros((n, n))
    p[perm, np.arange(n)] = 1.0
    w = uy @ p @ ux.conj().T

    src = max(operator_norm(w @ xj @ w.conj().T - xj) for xj in x)
    tgt = max(operator_norm(w @ xj @ w.conj().T - yj) for xj, yj in zip(x, y))
    comm = max(
        operator_norm(commutator(w @ xj @ w.conj().T, yj)) for xj, yj in zip(x, y)
    )
    return IsospectralApproximant(frozen(w), frozen(perm), matched, src, tgt, comm)


def _lattice_candidates(step: float, count: int):
    yield 0.0
    for k in range(1, count + 1):
        yield k * step
        yield -k * step


def _nearby_generator_data(
    x: NormalTuple, j: int, delta: float, tol: float | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    n = x.dim
    tol = default_tol(n) if tol is None else tol
    if not 0 <= j < x.arity:
        raise ApproximantError(f"index {j} out of range for arity {x.arity}")
    if x.commutator_bound > tol:
        raise ApproximantError("tuple is not commuting within tolerance")
    step = 0.9 * delta / (2 * n)
    if step <= 1e-13 * max(1.0, operator_norm(x[j])):
        raise ApproximantError(
            f"delta {delta:.3e} too small to separate {n} eigenvalues"
        )
    u, diags = joint_diagonalize(x, tol=max(x.commutator_bound, 1e-12))
    base = diags[j]

    order = sorted(range(n), key=lambda i: (base[i].real, base[i].imag, i))
    chosen = np.empty(n, dtype=complex)
    placed: list[complex] = []
    for i in order:
        for off in _lattice_candidates(step, 2 * n):
            cand = base[i] + off
            if all(abs(cand - prev) >= step * (1.0 - 1e-9) for prev in placed):
                chosen[i] = cand
                placed.append(cand)
                break
        else:
            raise ApproximantError("could not place distinct eigenvalues inside the disk")

    xhat = (u * chosen) @ u.conj().T
    sep = min(
        abs(placed[a] - placed[b]) for a in range(n) for b in range(a + 1, n)
    ) if n > 1 else np.inf
    return xhat, chosen, u, float(sep)


def nearby_generator(x: NormalTuple, j: int, delta: float, tol: float | None = None) -> np.ndarray:
    """Normal matrix with n distinct eigenvalues, within delta of X_j.

    It commutes with every member of the tuple, so all of them are functions
    of it.  Eigenvalues are placed deterministically on a lattice of pitch
    0.9 * delta / (2n) inside the delta-disk around each eigenvalue of X_j.
    """
    xhat, _, _, _ = _nearby_generator_data(x, j, delta, tol)
    return xhat


def upper_left_block(m) -> np.ndarray:
    """Compression M_{2n} -> M_n onto the leading half."""
    m = as_square(m)
    if m.shape[0] % 2:
        raise LinalgError(f"dimension {m.shape[0]} is odd; need an even size")
    n = m.shape[0] // 2
    return m[:n, :n].copy()


def double_embed(x) -> np.ndarray:
    """Doubling embedding x -> x (+) x."""
    x = as_square(x)
    return np.kron(np.eye(2), x)


SWAP2 = np.array([[0.0, 1.0], [1.0, 0.0]])


def dilate(psi: IsospectralApproximant, kind: str = "standard") -> IsospectralApproximant:
    """Lift an inner automorphism of M_n to M_{2n}.

    standard: conjugation by W (+) W.
    swap:     conjugation by (SWAP (x) 1) (W* (+) W), an involution.
    """
    w = psi.w
    n = w.shape[0]
    if kind == "standard":
        big = np.kron(np.eye(2), w)
    elif kind == "swap":
        big = np.kron(SWAP2, np.eye(n)) @ scipy.linalg.block_diag(w.conj().T, w)
    else:
        raise ApproximantError(f"unknown dilation kind {kind!r}")
    return IsospectralApproximant(
        frozen(big), None, psi.matching_cost, psi.source_distance,
        psi.target_distance, psi.commutation_residual,
    )


def conjugation_tuple_map(w):
    """Elementwise x -> W x W* on tuples."""
    w = as_square(w)

    def phi(mats):
        return [w @ as_square(m) @ w.conj().T for m in mats]

    return phi


def dilation_tuple_map(w, kind: str = "standard"):
    """Elementwise doubling followed by the dilated conjugation."""
    psi = IsospectralApproximant(frozen(as_square(w)), None, 0.0, 0.0, 0.0, 0.0)
    big = dilate(psi, kind)

    def phi(mats):
        return [big.apply(double_embed(m)) for m in mats]

    return phi
