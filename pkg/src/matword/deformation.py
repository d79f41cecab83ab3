"""End-to-end local connectivity pipelines and the randomized harness.

The shared construction conjugates a commuting tuple along a curved path
generated by the principal log of Z = What* W, where W is the isospectral
approximant's unitary and What is the nearest unitary commuting with the
image of a nearby generator.  The curved endpoint lands inside the target's
joint-diagonal algebra, so the closing flat segment keeps everything
commuting.  Algebraic variants project spectra onto polynomial zero sets
before and after the curved middle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .approximants import (
    IsospectralApproximant,
    dilate,
    double_embed,
    joint_isospectral_approximant,
    nearby_commuting_unitary,
    upper_left_block,
)
from .linalg import (
    NormalTuple,
    commutator,
    default_tol,
    joint_diagonalize,
    operator_norm,
    principal_unitary_log,
)
from .minpoly import PolyC, poly_residual
from .paths import (
    DEFAULT_SAMPLES,
    CommutationConstraint,
    MatrixPath,
    NormalityConstraint,
    PathReport,
    PolynomialConstraint,
    TargetDistanceConstraint,
    concat,
    curved_path,
    flat_path,
    verify_path,
)
from .sampling import haar_unitary, unitary_near_identity


class DeformationError(ValueError):
    pass


class InstanceError(ValueError):
    pass


# ---------------------------------------------------------------------------
# instance generation


@dataclass(frozen=True)
class InstanceSpec:
    """Seeded recipe for a pair of nearby commuting hermitian tuples."""

    kind: str  # "cube" | "sphere"
    m: int
    n: int
    delta: float
    seed: int
    polys: tuple[PolyC, ...] | None = None
    eps_alg: float = 0.0

    def __post_init__(self):
        if self.kind not in ("cube", "sphere"):
            raise InstanceError(f"unknown kind {self.kind!r}")
        if self.m < 1 or self.n < 1:
            raise InstanceError("need m >= 1 and n >= 1")
        if self.delta < 0 or self.eps_alg < 0:
            raise InstanceError("delta and eps_alg must be non-negative")
        if self.polys is not None and len(self.polys) not in (1, self.m):
            raise InstanceError("need one polynomial, or one per tuple member")


def _normalize_polys(polys, m: int) -> tuple[PolyC, ...]:
    if isinstance(polys, PolyC):
        polys = (polys,)
    polys = tuple(polys)
    if len(polys) == 1:
        polys = polys * m
    if len(polys) != m:
        raise DeformationError(f"need {m} polynomials, got {len(polys)}")
    for p in polys:
        if p.degree < 1:
            raise DeformationError("constant polynomials carry no spectral constraint")
    return polys


def _real_roots(p: PolyC) -> np.ndarray:
    r = p.roots()
    if np.any(np.abs(r.imag) > 1e-9):
        raise InstanceError("polynomial roots must be real for hermitian instances")
    return np.sort(r.real)


def min_root_gap(polys) -> float:
    """Smallest distance between distinct roots across all polynomials."""
    gap = math.inf
    for p in polys:
        r = p.roots()
        for i in range(len(r)):
            for j in range(i + 1, len(r)):
                d = abs(r[i] - r[j])
                if d > 1e-12:
                    gap = min(gap, d)
    return gap


def refinement_order(polys) -> int:
    """Projection count bound 1 + prod_j max(1, deg p_j) for the refinement."""
    out = 1
    for p in polys:
        out *= max(1, p.degree)
    return 1 + out


def generate_instance(spec: InstanceSpec) -> tuple[NormalTuple, NormalTuple]:
    """Pair (X, Y) of commuting hermitian tuples with ||X_j - Y_j|| <= delta.

    X is diagonal in a random common eigenbasis; sphere instances project
    the joint diagonal vectors onto the unit sphere; polynomial instances
    seed spectra at the zero sets, jittered by at most eps_alg.  Y applies a
    small random rotation plus, when the algebraic relations leave slack, a
    diagonal perturbation.  With eps_alg = 0 exact relations are preserved,
    so only the rotation is applied.
    """
    rng = np.random.default_rng(spec.seed)
    m, n = spec.m, spec.n
    q = haar_unitary(rng, n)

    polys = _normalize_polys(spec.polys, m) if spec.polys is not None else None
    diag = np.empty((m, n))
    for j in range(m):
        if polys is not None:
            roots = _real_roots(polys[j])
            base = roots[rng.integers(0, len(roots), n)]
            if spec.eps_alg > 0:
                base = base + rng.uniform(-1.0, 1.0, n) * spec.eps_alg
            diag[j] = base
        else:
            diag[j] = rng.uniform(-1.0, 1.0, n)

    if spec.kind == "sphere":
        norms = np.sqrt((diag**2).sum(axis=0))
        if np.any(norms < 1e-12):
            raise InstanceError("joint diagonal vector vanishes; cannot project to the sphere")
        diag = diag / norms
        if spec.eps_alg > 0:
            diag = diag + rng.uniform(-1.0, 1.0, (m, n)) * (spec.eps_alg / (2 * m))
            diag = np.clip(diag, -1.0, 1.0)

    def assemble(basis, values):
        mats = []
        for j in range(m):
            a = (basis * values[j]) @ basis.conj().T
            mats.append((a + a.conj().T) / 2.0)
        return NormalTuple.from_matrices(mats)

    x = assemble(q, diag)
    if spec.delta == 0:
        return x, assemble(q, diag)

    exact_relations = (polys is not None or spec.kind == "sphere") and spec.eps_alg == 0.0
    d_pert = np.zeros((m, n))
    if not exact_relations:
        d_pert = rng.uniform(-0.5, 0.5, (m, n)) * spec.delta
    v = unitary_near_identity(rng, n, spec.delta / 4.0)
    y_mats = []
    for j in range(m):
        a = (q * (diag[j] + d_pert[j])) @ q.conj().T
        a = v @ ((a + a.conj().T) / 2.0) @ v.conj().T
        y_mats.append((a + a.conj().T) / 2.0)
    y = NormalTuple.from_matrices(y_mats)

    worst = max(operator_norm(a - b) for a, b in zip(x, y))
    if worst > spec.delta * (1.0 + 1e-9):
        raise InstanceError(f"generated pair at distance {worst:.3e} > delta {spec.delta:.3e}")
    return x, y


# ---------------------------------------------------------------------------
# connectivity pipelines


@dataclass(frozen=True)
class DeformationResult:
    paths: tuple[MatrixPath, ...]
    achieved_eps: float
    reports: tuple[PathReport, ...]
    delta_in: float
    endpoint_residual: float
    max_commutation: float
    max_poly_residual: float | None
    compressibility: float  # ||W - What|| for the curved generator

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_json_dict(self) -> dict:
        def num(v):
            return None if v is None or not np.isfinite(v) else float(v)

        return {
            "delta_in": num(self.delta_in),
            "achieved_eps": num(self.achieved_eps),
            "endpoint_residual": num(self.endpoint_residual),
            "max_commutation": num(self.max_commutation),
            "max_poly_residual": num(self.max_poly_residual),
            "compressibility": num(self.compressibility),
            "passed": bool(self.passed),
            "constraints": [
                [
                    {
                        "label": e.label,
                        "max_residual": num(e.max_residual),
                        "bound": num(e.bound),
                        "passed": bool(e.passed),
                        "worst_t": num(e.worst_t),
                    }
                    for e in rep.entries
                ]
                for rep in self.reports
            ],
        }


def _pair_distance(x: NormalTuple, y: NormalTuple) -> float:
    if x.arity != y.arity or x.dim != y.dim:
        raise DeformationError("tuples must share arity and dimension")
    return max(operator_norm(a - b) for a, b in zip(x, y))


def _joint_cluster_values(diags: list[np.ndarray], threshold: float) -> np.ndarray:
    """Distinct real label per joint-eigenvalue cluster (max-metric linkage)."""
    n = diags[0].shape[0]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for k in range(i + 1, n):
            gap = max(abs(d[i] - d[k]) for d in diags)
            if gap <= threshold:
                ri, rk = find(i), find(k)
                if ri != rk:
                    parent[max(ri, rk)] = min(ri, rk)
    labels = np.empty(n)
    seen: dict[int, int] = {}
    for i in range(n):
        root = find(i)
        seen.setdefault(root, len(seen))
        labels[i] = float(seen[root])
    return labels


def _curved_connect(
    x: NormalTuple, y: NormalTuple, n_seg: int, degeneracy_tol: float = 1e-9
) -> tuple[list[MatrixPath], IsospectralApproximant, float]:
    """Curved paths conjugating X into Y's joint-diagonal algebra.

    The approximant's unitary W is compressed onto the nearest unitary What
    commuting with a generator of Y's joint-cluster algebra (distinct label
    per cluster of joint eigenvalues, merged at ``degeneracy_tol``); blocks
    on genuinely degenerate joint eigenspaces are kept whole, so only
    cross-cluster leakage counts against compressibility.  The paths then
    conjugate by the principal-log flow of What* W.

    Returns the per-member paths, the approximant, and ||W - What||.
    """
    delta = _pair_distance(x, y)
    psi = joint_isospectral_approximant(x, y, delta)
    uy, dy = joint_diagonalize(y, tol=max(y.commutator_bound, 1e-12))
    labels = _joint_cluster_values(dy, degeneracy_tol)
    d_gen = (uy * labels) @ uy.conj().T
    ncu = nearby_commuting_unitary(psi.w, d_gen, cluster_tol=0.25, min_gap=0.5)
    what = ncu.z.conj().T
    z = what.conj().T @ psi.w
    deviation = operator_norm(np.eye(x.dim) - z)
    if deviation >= 1.0:
        raise DeformationError(
            f"approximant is not jointly compressible: ||W - What|| = {deviation:.3e} >= 1"
        )
    h = principal_unitary_log(z)
    paths = [curved_path(h, xj, n_seg) for xj in x]
    return paths, psi, deviation


def _assemble_result(
    paths: list[MatrixPath],
    x: NormalTuple,
    y: NormalTuple,
    eps: float | None,
    polys,
    compressibility: float,
) -> DeformationResult:
    n = x.dim
    comm_bound = 1e-7 * n
    dist_bound = math.inf if eps is None else eps
    achieved = 0.0
    endpoint = 0.0
    for j, p in enumerate(paths):
        achieved = max(
            achieved, max(operator_norm(s - y[j]) for s in p.samples)
        )
        endpoint = max(
            endpoint,
            operator_norm(p.start - x[j]),
            operator_norm(p.end - y[j]),
        )

    reports = []
    for j, p in enumerate(paths):
        cons = [
            CommutationConstraint(paths[k], comm_bound, label=f"commutation[{j},{k}]")
            for k in range(j + 1, len(paths))
        ]
        cons.append(NormalityConstraint(comm_bound))
        cons.append(TargetDistanceConstraint(y[j], dist_bound))
        if polys is not None:
            cons.append(PolynomialConstraint(polys[j], dist_bound))
        reports.append(verify_path(p, cons))

    comm_vals = [
        e.max_residual
        for rep in reports
        for e in rep.entries
        if e.label.startswith("commutation")
    ]
    poly_vals = [
        e.max_residual for rep in reports for e in rep.entries if e.label == "polynomial"
    ]
    return DeformationResult(
        paths=tuple(paths),
        achieved_eps=achieved,
        reports=tuple(reports),
        delta_in=_pair_distance(x, y),
        endpoint_residual=endpoint,
        max_commutation=max(comm_vals, default=0.0),
        max_poly_residual=max(poly_vals) if poly_vals else None,
        compressibility=compressibility,
    )


def connect_commuting(
    x: NormalTuple,
    y: NormalTuple,
    eps: float | None = None,
    n_samples: int = DEFAULT_SAMPLES,
) -> DeformationResult:
    """Curved-then-flat homotopies between nearby commuting normal tuples.

    Each member follows the common conjugation onto the target's
    joint-diagonal algebra, then a flat segment to the target.  Pairwise
    commutation holds along the whole path; spectra are preserved on the
    curved half.
    """
    seg = (n_samples + 1) // 2
    curved, _psi, deviation = _curved_connect(x, y, seg)
    paths = [concat(c, flat_path(c.end, yj, seg)) for c, yj in zip(curved, y)]
    return _assemble_result(paths, x, y, eps, None, deviation)


def connect_algebraic(
    x: NormalTuple,
    y: NormalTuple,
    polys,
    eps: float | None = None,
    n_samples: int = DEFAULT_SAMPLES,
    zero_tol: float | None = None,
) -> DeformationResult:
    """Connectivity under exact polynomial constraints p_j(Z_t) = 0.

    Spectra of both endpoints must already sit in the zero sets; the pair
    distance may not exceed a third of the minimal root gap, which forces
    the matched spectra to coincide and keeps every residual at rounding
    level along the path.
    """
    polys = _normalize_polys(polys, x.arity)
    n = x.dim
    zero_tol = default_tol(n) if zero_tol is None else zero_tol
    for j, p in enumerate(polys):
        for t, name in ((x, "X"), (y, "Y")):
            r = poly_residual(p, t[j])
            if r > zero_tol:
                raise DeformationError(
                    f"||p_{j}({name}_{j})|| = {r:.3e}; spectrum is not in the zero set"
                )
    gap = min_root_gap(polys)
    delta = _pair_distance(x, y)
    if delta > gap / 3.0:
        raise DeformationError(
            f"pair distance {delta:.3e} exceeds a third of the root gap {gap:.3e}"
        )
    seg = (n_samples + 1) // 2
    curved, _psi, deviation = _curved_connect(x, y, seg)
    paths = [concat(c, flat_path(c.end, yj, seg)) for c, yj in zip(curved, y)]
    return _assemble_result(paths, x, y, eps, polys, deviation)


def _project_to_roots(
    u: np.ndarray, diags: list[np.ndarray], polys, delta: float
) -> list[np.ndarray]:
    mats = []
    for dj, p in zip(diags, polys):
        roots = p.roots()
        rounded = np.empty_like(dj)
        for i, val in enumerate(dj):
            k = int(np.argmin(np.abs(roots - val)))
            shift = abs(roots[k] - val)
            if shift > delta / 2.0 * (1.0 + 1e-6) + 1e-12:
                raise DeformationError(
                    f"eigenvalue {val:.6f} sits {shift:.3e} from the zero set (> delta/2)"
                )
            rounded[i] = roots[k]
        mats.append((u * rounded) @ u.conj().T)
    return mats


def connect_soft_algebraic(
    x: NormalTuple,
    y: NormalTuple,
    polys,
    delta: float,
    eps: float | None = None,
    n_samples: int | None = None,
) -> DeformationResult:
    """Connectivity under soft constraints ||p_j(Z_t)|| <= eps.

    Three segments per member: a flat projection of the spectrum onto the
    zero set, the curved algebraic connection, and a flat return to the
    target.  Requires endpoint residuals at most delta, spectra within
    delta/2 of the zero sets, and delta at most a sixth of the root gap.
    """
    polys = _normalize_polys(polys, x.arity)
    for j, p in enumerate(polys):
        for t, name in ((x, "X"), (y, "Y")):
            r = poly_residual(p, t[j])
            if r > delta * (1.0 + 1e-9):
                raise DeformationError(
                    f"||p_{j}({name}_{j})|| = {r:.3e} exceeds delta {delta:.3e}"
                )
    gap = min_root_gap(polys)
    if delta > gap / 6.0:
        raise DeformationError(
            f"delta {delta:.3e} exceeds a sixth of the root gap {gap:.3e}"
        )

    ux, dx = joint_diagonalize(x, tol=max(x.commutator_bound, 1e-12))
    uy, dy = joint_diagonalize(y, tol=max(y.commutator_bound, 1e-12))
    xhat = NormalTuple.from_matrices(_project_to_roots(ux, dx, polys, delta))
    yhat = NormalTuple.from_matrices(_project_to_roots(uy, dy, polys, delta))

    seg = ((n_samples or DEFAULT_SAMPLES) + 2) // 3 + 1
    curved, _psi, deviation = _curved_connect(xhat, yhat, seg)

    paths = []
    for j, c in enumerate(curved):
        head = flat_path(x[j], xhat[j], seg)
        tail = flat_path(yhat[j], y[j], seg)
        paths.append(concat(concat(head, c), tail))
    return _assemble_result(paths, x, y, eps, polys, deviation)


# ---------------------------------------------------------------------------
# randomized verification harness


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    achieved_eps: float
    endpoint_residual: float
    max_commutation: float
    max_poly_residual: float | None
    relation_residual: float
    relation_bound: float
    cross_commutator: float
    dilation_mismatch: float | None
    recovery_residual: float | None
    passed: bool

    def to_json_dict(self) -> dict:
        def num(v):
            return None if v is None or not np.isfinite(v) else float(v)

        return {
            "seed": self.seed,
            "achieved_eps": num(self.achieved_eps),
            "endpoint_residual": num(self.endpoint_residual),
            "max_commutation": num(self.max_commutation),
            "max_poly_residual": num(self.max_poly_residual),
            "relation_residual": num(self.relation_residual),
            "relation_bound": num(self.relation_bound),
            "cross_commutator": num(self.cross_commutator),
            "dilation_mismatch": num(self.dilation_mismatch),
            "recovery_residual": num(self.recovery_residual),
            "passed": bool(self.passed),
        }


@dataclass(frozen=True)
class ConnectivityReport:
    kind: str  # "ulpac" | "aulpac"
    spec: InstanceSpec
    eps_pass: float
    records: tuple[TrialRecord, ...]

    @property
    def pass_rate(self) -> float:
        if not self.records:
            return 1.0
        return sum(r.passed for r in self.records) / len(self.records)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records)

    def achieved_stats(self) -> dict:
        vals = [r.achieved_eps for r in self.records]
        return {
            "min": min(vals, default=0.0),
            "max": max(vals, default=0.0),
            "mean": float(np.mean(vals)) if vals else 0.0,
        }

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "spec": {
                "kind": self.spec.kind,
                "m": self.spec.m,
                "n": self.spec.n,
                "delta": self.spec.delta,
                "eps_alg": self.spec.eps_alg,
                "seed": self.spec.seed,
                "polys": None
                if self.spec.polys is None
                else [[[c.real, c.imag] for c in p.coeffs] for p in self.spec.polys],
            },
            "eps_pass": self.eps_pass,
            "pass_rate": self.pass_rate,
            "achieved_eps": self.achieved_stats(),
            "trials": [r.to_json_dict() for r in self.records],
        }

    def csv_rows(self) -> list[list]:
        head = [
            "trial", "seed", "achieved_eps", "endpoint_residual", "max_commutation",
            "max_poly_residual", "relation_residual", "cross_commutator", "passed",
        ]
        rows = [head]
        for i, r in enumerate(self.records):
            rows.append([
                i, r.seed, repr(r.achieved_eps), repr(r.endpoint_residual),
                repr(r.max_commutation),
                "" if r.max_poly_residual is None else repr(r.max_poly_residual),
                repr(r.relation_residual), repr(r.cross_commutator), int(r.passed),
            ])
        return rows


def _trial_seed(base: int, t: int) -> int:
    return base + 1_000_003 * t


def _cross_commutator(x: NormalTuple, y: NormalTuple) -> float:
    return max(
        operator_norm(commutator(a, b)) for a in x.matrices for b in y.matrices
    )


def _relation_residual(paths, kind: str, m: int) -> float:
    """Worst defining-relation residual along the paths.

    Cube: contraction slack max(0, ||Z_t|| - 1).  Sphere: ||sum Z_t^2 - 1||.
    """
    worst = 0.0
    n_samples = paths[0].n_samples
    n = paths[0].dim
    for i in range(n_samples):
        if kind == "cube":
            for p in paths:
                worst = max(worst, max(0.0, operator_norm(p.samples[i]) - 1.0))
        else:
            acc = np.zeros((n, n), dtype=complex)
            for p in paths:
                s = p.samples[i]
                acc = acc + s @ s
            worst = max(worst, operator_norm(acc - np.eye(n)))
    return worst


def verify_ulpac(
    spec: InstanceSpec, trials: int, eps_pass: float | None = None
) -> ConnectivityReport:
    """Sampled check of uniform local piecewise-analytic connectivity.

    Generates seeded instance pairs, connects them with the soft algebraic
    pipeline, and records endpoint, polynomial, commutation and defining
    relation residuals along every path.  Failures are recorded, never
    raised.  The default pass threshold 10*delta + 5*eps_alg was calibrated
    on seeded runs of this harness.
    """
    if spec.polys is None:
        raise DeformationError("ULPAC verification needs polynomial constraints")
    eps_pass = 10.0 * spec.delta + 5.0 * spec.eps_alg if eps_pass is None else eps_pass
    polys = _normalize_polys(spec.polys, spec.m)
    comm_bound = 1e-7 * spec.n
    end_bound = 1e-8 * spec.n

    records = []
    for t in range(trials):
        sub = replace(spec, seed=_trial_seed(spec.seed, t))
        x, y = generate_instance(sub)
        resid = max(
            poly_residual(p, mat) for tup in (x, y) for p, mat in zip(polys, tup)
        )
        delta_soft = max(resid * 1.01, 2.0 * spec.eps_alg + spec.delta + 1e-9)
        try:
            res = connect_soft_algebraic(x, y, polys, delta_soft, eps_pass)
        except (DeformationError, ValueError):  # recorded, not raised
            records.append(
                TrialRecord(
                    sub.seed, math.inf, math.inf, math.inf, None, math.inf,
                    0.0, _cross_commutator(x, y), None, None, False,
                )
            )
            continue
        relation = _relation_residual(res.paths, spec.kind, spec.m)
        base_relation = (
            max(0.0, max(operator_norm(m) for m in y) - 1.0)
            if spec.kind == "cube"
            else operator_norm(
                sum(m @ m for m in y.matrices) - np.eye(spec.n)
            )
        )
        relation_bound = base_relation + 2 * spec.m * res.achieved_eps + 1e-6
        ok = (
            res.endpoint_residual <= end_bound
            and res.max_commutation <= comm_bound
            and (res.max_poly_residual or 0.0) <= eps_pass
            and res.achieved_eps <= eps_pass
            and relation <= relation_bound
        )
        records.append(
            TrialRecord(
                sub.seed,
                res.achieved_eps,
                res.endpoint_residual,
                res.max_commutation,
                res.max_poly_residual,
                relation,
                relation_bound,
                _cross_commutator(x, y),
                None,
                None,
                ok,
            )
        )
    return ConnectivityReport("ulpac", spec, eps_pass, tuple(records))


def verify_aulpac(
    spec: InstanceSpec, trials: int, eps_pass: float | None = None
) -> ConnectivityReport:
    """Sampled connectivity check after dilation to twice the size.

    Builds the swap dilation of the instance's approximant composed with the
    doubling embedding, checks its distances to the doubled endpoints, then
    connects the dilated tuple to the doubled target with the commuting
    pipeline.  Compression of the initial sample must recover the source.
    """
    if spec.polys is not None:
        raise DeformationError("AULPAC verification runs on unconstrained instances")
    eps_pass = 10.0 * spec.delta if eps_pass is None else eps_pass
    comm_bound = 1e-7 * 2 * spec.n
    end_bound = 1e-8 * 2 * spec.n

    records = []
    for t in range(trials):
        sub = replace(spec, seed=_trial_seed(spec.seed, t))
        x, y = generate_instance(sub)
        delta_meas = _pair_distance(x, y)
        psi = joint_isospectral_approximant(x, y, delta_meas)
        big = dilate(psi, "swap")

        dil_x = NormalTuple.from_matrices([big.apply(double_embed(h)) for h in x])
        dil_y = NormalTuple.from_matrices([double_embed(k) for k in y])
        mismatch = max(
            max(
                operator_norm(dx - double_embed(h)),
                operator_norm(dx - double_embed(k)),
            )
            for dx, h, k in zip(dil_x.matrices, x, y)
        )
        try:
            res = connect_commuting(dil_x, dil_y, eps=eps_pass)
        except (DeformationError, ValueError):
            records.append(
                TrialRecord(
                    sub.seed, math.inf, math.inf, math.inf, None, 0.0, 0.0,
                    _cross_commutator(x, y), mismatch, None, False,
                )
            )
            continue
        recovery = max(
            operator_norm(upper_left_block(p.samples[0]) - h)
            for p, h in zip(res.paths, x)
        )
        relation = _relation_residual(res.paths, spec.kind, spec.m)
        relation_bound = 2 * spec.m * res.achieved_eps + (
            0.0 if spec.kind == "cube" else operator_norm(
                sum(double_embed(k) @ double_embed(k) for k in y.matrices) - np.eye(2 * spec.n)
            )
        ) + 1e-6
        ok = (
            mismatch <= eps_pass
            and recovery <= eps_pass
            and res.endpoint_residual <= end_bound
            and res.max_commutation <= comm_bound
            and res.achieved_eps <= eps_pass
        )
        records.append(
            TrialRecord(
                sub.seed,
                res.achieved_eps,
                res.endpoint_residual,
                res.max_commutation,
                None,
                relation,
                relation_bound,
                _cross_commutator(x, y),
                mismatch,
                recovery,
                ok,
            )
        )
    return ConnectivityReport("aulpac", spec, eps_pass, tuple(records))
