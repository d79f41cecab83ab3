import numpy as np
import pytest

from matword.linalg import operator_norm, phase_exp
from matword.minpoly import PolyC
from matword.paths import (
    CommutationConstraint,
    NormalityConstraint,
    PathError,
    PolynomialConstraint,
    TargetDistanceConstraint,
    concat,
    curved_path,
    export_records,
    flat_functional_path,
    flat_path,
    path_length,
    spectrum_drift,
    verify_path,
)
from matword.sampling import commuting_hermitian_tuple, random_hermitian


class TestCurvedPath:
    def test_zero_generator_is_constant(self, rng):
        d = random_hermitian(rng, 4)
        p = curved_path(np.zeros((4, 4)), d, 9)
        assert all(operator_norm(s - d) < 1e-14 for s in p.samples)

    def test_commuting_generator_is_constant(self):
        h = np.diag([0.5, -0.5])
        d = np.diag([1.0, 2.0])
        p = curved_path(h, d, 9)
        assert all(operator_norm(s - d) < 1e-13 for s in p.samples)

    def test_hand_computed_endpoint(self):
        # H = diag(1,-1)/2: exp(i pi H) = diag(i, -i); conjugating the upper
        # shift multiplies the off-diagonal entry by i * conj(-i) = -1
        h = np.diag([0.5, -0.5])
        d = np.array([[0.0, 1.0], [0.0, 0.0]])
        p = curved_path(h, d, 5)
        expected = np.array([[0.0, -1.0], [0.0, 0.0]])
        assert operator_norm(p.end - expected) < 1e-12

    def test_non_hermitian_generator_rejected(self):
        with pytest.raises(PathError):
            curved_path(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2), 5)

    def test_spectrum_preserved(self, rng):
        h = random_hermitian(rng, 5)
        d = random_hermitian(rng, 5)
        p = curved_path(h, d, 17)
        assert spectrum_drift(p) <= 1e-9


class TestFlatPath:
    def test_constant_when_equal(self, rng):
        x = random_hermitian(rng, 3)
        p = flat_path(x, x, 5)
        assert path_length(p) < 1e-14

    def test_midpoint(self, rng):
        x, y = random_hermitian(rng, 3), random_hermitian(rng, 3)
        p = flat_path(x, y, 5)
        assert operator_norm(p.samples[2] - (x + y) / 2) < 1e-14

    def test_diagonal_family_stays_commuting(self, rng):
        x = np.diag(rng.uniform(-1, 1, 4))
        y = np.diag(rng.uniform(-1, 1, 4))
        p = flat_path(x, y, 9)
        for s in p.samples:
            assert operator_norm(s @ x - x @ s) < 1e-14
            assert operator_norm(s @ y - y @ s) < 1e-14


class TestFlatFunctionalPath:
    def test_constant_endpoints(self, rng):
        h = random_hermitian(rng, 4, norm=0.8)
        p = flat_functional_path(lambda w: w, h, h, 7)
        assert all(operator_norm(s - h) < 1e-12 for s in p.samples)

    def test_identity_function_matches_flat(self, rng):
        h2 = random_hermitian(rng, 4, norm=0.7)
        h3 = random_hermitian(rng, 4, norm=0.7)
        p1 = flat_functional_path(lambda w: w, h2, h3, 9)
        p2 = flat_path(h2, h3, 9)
        for a, b in zip(p1.samples, p2.samples):
            assert operator_norm(a - b) < 1e-12

    def test_square_midpoint(self):
        h2 = np.zeros((3, 3))
        h3 = np.eye(3)
        p = flat_functional_path(lambda w: w**2, h2, h3, 5)
        assert operator_norm(p.samples[2] - 0.25 * np.eye(3)) < 1e-13

    def test_spectrum_escape_rejected(self):
        with pytest.raises(PathError):
            flat_functional_path(lambda w: w, 3.0 * np.eye(2), np.eye(2), 5)


class TestConcat:
    def test_concat_with_constant_tail(self, rng):
        x, y = random_hermitian(rng, 3), random_hermitian(rng, 3)
        p = flat_path(x, y, 9)
        tail = flat_path(y, y, 9)
        joined = concat(p, tail, tol=1e-10)
        assert operator_norm(joined.start - x) < 1e-14
        assert operator_norm(joined.end - y) < 1e-14

    def test_reparametrization_identity(self, rng):
        x, y, z = (random_hermitian(rng, 3) for _ in range(3))
        p = flat_path(x, y, 9)
        q = flat_path(y, z, 9)
        joined = concat(p, q)
        i = np.where(np.isclose(joined.times, 0.25))[0][0]
        assert operator_norm(joined.samples[i] - p.samples[4]) < 1e-14

    def test_associativity_of_endpoints(self, rng):
        x, y, z, w = (random_hermitian(rng, 3) for _ in range(4))
        p, q, r = flat_path(x, y, 5), flat_path(y, z, 5), flat_path(z, w, 5)
        left = concat(concat(p, q), r)
        right = concat(p, concat(q, r))
        assert operator_norm(left.start - right.start) < 1e-14
        assert operator_norm(left.end - right.end) < 1e-14
        assert not np.array_equal(left.times, right.times)

    def test_junction_mismatch_rejected(self, rng):
        x, y = random_hermitian(rng, 3), random_hermitian(rng, 3)
        p = flat_path(x, y, 5)
        q = flat_path(y + 0.1 * np.eye(3), x, 5)
        with pytest.raises(PathError):
            concat(p, q, tol=1e-6)


class TestPathLength:
    def test_constant_path(self, rng):
        x = random_hermitian(rng, 3)
        assert path_length(flat_path(x, x, 9)) == 0.0

    def test_flat_length_is_distance(self, rng):
        x, y = random_hermitian(rng, 4), random_hermitian(rng, 4)
        for n in (2, 5, 33):
            assert path_length(flat_path(x, y, n)) == pytest.approx(
                operator_norm(x - y), rel=1e-10
            )

    def test_curved_length_converges(self, rng):
        h = np.diag([0.5, -0.5])
        d = np.array([[0.3, 1.0], [1.0, -0.2]])
        l64 = path_length(curved_path(h, d, 65))
        l128 = path_length(curved_path(h, d, 129))
        assert abs(l128 - l64) / l128 < 0.05

    def test_additive_under_concat(self, rng):
        x, y, z = (random_hermitian(rng, 3) for _ in range(3))
        p, q = flat_path(x, y, 9), flat_path(y, z, 9)
        total = path_length(concat(p, q))
        assert total == pytest.approx(path_length(p) + path_length(q), rel=1e-12)


class TestVerifyPath:
    def test_commuting_pair_reports_zero(self, rng):
        mats = commuting_hermitian_tuple(rng, 2, 4)
        p = flat_path(mats[0], mats[0], 9)
        report = verify_path(p, [CommutationConstraint(mats[1], 1e-9)])
        assert report.passed
        assert report.entries[0].max_residual <= 1e-12

    def test_conjugated_family_keeps_commutators(self, rng):
        mats = commuting_hermitian_tuple(rng, 2, 5)
        h = random_hermitian(rng, 5)
        p0 = curved_path(h, mats[0], 17)
        p1 = curved_path(h, mats[1], 17)
        report = verify_path(p0, [CommutationConstraint(p1, 1e-9)])
        assert report.passed

    def test_polynomial_violation_reported_at_interior(self):
        # flat path between the two square roots of 1 passes through
        # matrices that are far from the variety of z^2 - 1
        p = flat_path(np.eye(2), -np.eye(2), 9)
        poly = PolyC((-1.0, 0.0, 1.0))
        report = verify_path(p, [PolynomialConstraint(poly, 1e-6)])
        (entry,) = report.entries
        assert not entry.passed
        assert entry.worst_t == pytest.approx(0.5)
        assert entry.max_residual == pytest.approx(1.0, abs=1e-12)

    def test_normality_and_distance_entries(self, rng):
        x, y = random_hermitian(rng, 3), random_hermitian(rng, 3)
        p = flat_path(x, y, 9)
        report = verify_path(
            p,
            [
                NormalityConstraint(1e-10),
                TargetDistanceConstraint(y, operator_norm(x - y) + 1e-12),
            ],
        )
        assert report.passed


def test_export_records_round_trip(rng):
    x, y = random_hermitian(rng, 2), random_hermitian(rng, 2)
    p = flat_path(x, y, 3)
    recs = export_records(p)
    assert [r["t"] for r in recs] == [0.0, 0.5, 1.0]
    mid = np.array(recs[1]["matrix"])
    mid = (mid[:, 0] + 1j * mid[:, 1]).reshape(2, 2)
    assert operator_norm(mid - (x + y) / 2) < 1e-14


def test_curved_path_matches_phase_exp(rng):
    h = random_hermitian(rng, 4, norm=0.6)
    d = random_hermitian(rng, 4)
    p = curved_path(h, d, 5)
    u = phase_exp(h, 0.5)
    assert operator_norm(p.samples[2] - u @ d @ u.conj().T) < 1e-12
