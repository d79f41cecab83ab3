import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matword.linalg import (
    ClusteringError,
    JointDiagonalizationError,
    LinalgError,
    NormalTuple,
    adjoint_action,
    cartesian_decomposition,
    commutator,
    joint_diagonalize,
    operator_norm,
    phase_exp,
    polar_decomposition,
    principal_unitary_log,
    spectral_decomposition,
)
from matword.sampling import commuting_hermitian_tuple, haar_unitary, random_hermitian


def random_complex(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


class TestCommutator:
    def test_self_commutator_vanishes(self, rng):
        a = random_complex(rng, 5)
        assert operator_norm(commutator(a, a)) == 0.0

    def test_identity_commutes(self, rng):
        b = random_complex(rng, 4)
        assert operator_norm(commutator(np.eye(4), b)) == 0.0

    def test_hand_computed_2x2(self):
        # diag(1,2) against the upper shift: AB = [[0,1],[0,0]], BA = [[0,2],[0,0]]
        a = np.diag([1.0, 2.0])
        b = np.array([[0.0, 1.0], [0.0, 0.0]])
        expected = np.array([[0.0, -1.0], [0.0, 0.0]])
        assert np.allclose(commutator(a, b), expected, atol=1e-15)

    def test_dimension_mismatch(self):
        with pytest.raises(LinalgError):
            commutator(np.eye(2), np.eye(3))

    @given(st.integers(0, 2**32 - 1), st.integers(2, 6))
    @settings(max_examples=30, deadline=None)
    def test_antisymmetry(self, seed, n):
        rng = np.random.default_rng(seed)
        a, b = random_complex(rng, n), random_complex(rng, n)
        assert np.array_equal(commutator(a, b), -commutator(b, a))


class TestAdjointAction:
    def test_identity_cases(self, rng):
        x = random_complex(rng, 4)
        w = haar_unitary(rng, 4)
        assert np.allclose(adjoint_action(np.eye(4), x), x)
        assert np.allclose(adjoint_action(w, np.eye(4)), np.eye(4), atol=1e-14)

    def test_swap_conjugation(self):
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert np.allclose(adjoint_action(swap, np.diag([2.0, 5.0])), np.diag([5.0, 2.0]))

    def test_preserves_norm_and_spectrum(self, rng):
        x = random_complex(rng, 6)
        w = haar_unitary(rng, 6)
        y = adjoint_action(w, x)
        assert operator_norm(y) == pytest.approx(operator_norm(x), rel=1e-10)
        ex = np.sort_complex(np.linalg.eigvals(x))
        ey = np.sort_complex(np.linalg.eigvals(y))
        assert np.allclose(ex, ey, atol=1e-10)

    def test_rejects_non_unitary(self, rng):
        with pytest.raises(LinalgError):
            adjoint_action(2.0 * np.eye(3), np.eye(3))


class TestCartesianDecomposition:
    def test_hermitian_input(self, rng):
        a = random_hermitian(rng, 5)
        h, k = cartesian_decomposition(a)
        assert np.allclose(h, a)
        assert operator_norm(k) < 1e-14

    def test_pure_imaginary_identity(self):
        h, k = cartesian_decomposition(1j * np.eye(3))
        assert operator_norm(h) < 1e-15
        assert np.allclose(k, np.eye(3))

    def test_reconstruction(self, rng):
        a = random_complex(rng, 7)
        h, k = cartesian_decomposition(a)
        assert operator_norm(a - (h + 1j * k)) <= 1e-14
        assert operator_norm(h - h.conj().T) < 1e-14
        assert operator_norm(k - k.conj().T) < 1e-14


class TestSpectralDecomposition:
    def test_exact_degeneracy(self):
        sd = spectral_decomposition(np.diag([1.0, 1.0, -1.0]), 0.1)
        assert sorted(sd.ranks) == [1, 2]
        assert sorted(v.real for v in sd.values) == pytest.approx([-1.0, 1.0])

    def test_below_tolerance_merges(self):
        sd = spectral_decomposition(np.diag([0.0, 1e-9]), 1e-6)
        assert len(sd.values) == 1

    def test_gaps_exceeding_tolerance_split(self):
        sd = spectral_decomposition(np.diag([0.0, 0.5, 1.0]), 0.1)
        assert len(sd.values) == 3

    def test_resolution_of_identity_and_structure(self, rng):
        n = 12
        u = haar_unitary(rng, n)
        vals = np.repeat([0.0, 0.7, -0.4], 4)
        a = (u * vals) @ u.conj().T
        sd = spectral_decomposition(a, 0.1)
        total = sum(sd.projections)
        assert operator_norm(total - np.eye(n)) <= 1e-10 * n
        for p in sd.projections:
            assert operator_norm(p - p.conj().T) <= 1e-12
            assert operator_norm(p @ p - p) <= 1e-12
        for i, p in enumerate(sd.projections):
            for q in sd.projections[i + 1:]:
                assert operator_norm(p @ q) <= 1e-12
        assert operator_norm(a - sd.reconstruct()) <= sd.cluster_tol

    def test_straddling_gaps_raise(self):
        # chain 0, .1, .2, .3, .4 links into one cluster whose spread
        # exceeds the threshold
        with pytest.raises(ClusteringError):
            spectral_decomposition(np.diag([0.0, 0.1, 0.2, 0.3, 0.4]), 0.12)

    def test_rejects_non_normal(self):
        with pytest.raises(LinalgError):
            spectral_decomposition(np.array([[0.0, 1.0], [0.0, 0.0]]), 0.1)


class TestJointDiagonalize:
    def test_already_diagonal(self):
        t = NormalTuple.from_matrices([np.diag([3.0, 1.0, 2.0]), np.diag([0.0, 1.0, 0.5])])
        u, diags = joint_diagonalize(t, tol=1e-10)
        assert np.array_equal(u, np.eye(3))
        assert np.allclose(diags[0], [3.0, 1.0, 2.0])
        assert np.allclose(diags[1], [0.0, 1.0, 0.5])

    def test_conjugated_diagonals_recovered(self, rng):
        n = 8
        d1 = rng.uniform(-1, 1, n)
        d2 = rng.uniform(-1, 1, n)
        w = haar_unitary(rng, n)
        t = NormalTuple.from_matrices([(w * d1) @ w.conj().T, (w * d2) @ w.conj().T])
        u, diags = joint_diagonalize(t, tol=1e-8)
        got = sorted(zip(np.round(diags[0].real, 8), np.round(diags[1].real, 8)))
        want = sorted(zip(np.round(d1, 8), np.round(d2, 8)))
        assert np.allclose(got, want, atol=1e-7)

    def test_single_normal_matrix(self, rng):
        n = 6
        u = haar_unitary(rng, n)
        vals = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
        a = (u * vals) @ u.conj().T
        t = NormalTuple.from_matrices([a])
        uj, diags = joint_diagonalize(t, tol=1e-8)
        assert operator_norm(uj @ uj.conj().T - np.eye(n)) < 1e-12
        assert np.allclose(np.sort_complex(diags[0]), np.sort_complex(vals), atol=1e-9)

    @pytest.mark.parametrize("n,m", [(6, 2), (10, 3), (16, 2)])
    def test_exactly_commuting_residual(self, rng, n, m):
        t = NormalTuple.from_matrices(commuting_hermitian_tuple(rng, m, n))
        u, diags = joint_diagonalize(t, tol=1e-8)
        assert operator_norm(u @ u.conj().T - np.eye(n)) <= 1e-12 * n
        for mat, d in zip(t, diags):
            assert operator_norm(u.conj().T @ mat @ u - np.diag(d)) <= 1e-8 * n

    def test_rejects_far_from_commuting(self, rng):
        x = np.diag([1.0, -1.0])
        y = np.array([[0.0, 1.0], [1.0, 0.0]])
        t = NormalTuple.from_matrices([x, y])
        with pytest.raises(JointDiagonalizationError):
            joint_diagonalize(t, tol=1e-3)


class TestPrincipalUnitaryLog:
    def test_identity(self):
        assert operator_norm(principal_unitary_log(np.eye(4))) < 1e-12

    def test_scalar_phase(self):
        h = principal_unitary_log(1j * np.eye(3))
        assert np.allclose(h, 0.5 * np.eye(3), atol=1e-12)

    def test_small_rotation_round_trip(self, rng):
        h0 = random_hermitian(rng, 5, norm=0.3)
        z = phase_exp(h0)
        h = principal_unitary_log(z)
        assert operator_norm(h - h0) < 1e-9

    def test_round_trip_property(self):
        # 100 random unitaries with ||1 - Z|| <= 1.9
        for seed in range(100):
            gen = np.random.default_rng(1000 + seed)
            h0 = random_hermitian(gen, 4, norm=0.79)
            z = phase_exp(h0)
            assert operator_norm(np.eye(4) - z) <= 1.9
            h = principal_unitary_log(z)
            assert operator_norm(phase_exp(h) - z) <= 1e-9
            assert operator_norm(h - h.conj().T) < 1e-12
            assert np.all(np.linalg.eigvalsh(h) <= 1 + 1e-12)
            assert np.all(np.linalg.eigvalsh(h) >= -1 - 1e-12)

    def test_spectrum_at_minus_one_rejected(self):
        with pytest.raises(LinalgError):
            principal_unitary_log(np.diag([-1.0, 1.0]))


class TestPolarDecomposition:
    def test_unitary_input(self, rng):
        w = haar_unitary(rng, 5)
        v, r = polar_decomposition(w)
        assert np.allclose(v, w, atol=1e-12)
        assert np.allclose(r, np.eye(5), atol=1e-12)

    def test_positive_scalar(self):
        v, r = polar_decomposition(2.0 * np.eye(3))
        assert np.allclose(v, np.eye(3), atol=1e-14)
        assert np.allclose(r, 2.0 * np.eye(3), atol=1e-14)

    def test_rank_deficient_diagonal(self):
        a = np.diag([-3.0, 0.0])
        v, r = polar_decomposition(a)
        assert np.allclose(r, np.diag([3.0, 0.0]), atol=1e-13)
        assert v[0, 0] == pytest.approx(-1.0)
        assert abs(v[1, 1]) == pytest.approx(1.0)
        assert operator_norm(v @ v.conj().T - np.eye(2)) < 1e-13
        assert operator_norm(v @ r - a) < 1e-13

    def test_reconstruction(self, rng):
        a = random_complex(rng, 8)
        v, r = polar_decomposition(a)
        n = 8
        assert operator_norm(v @ r - a) <= 1e-12 * n * operator_norm(a)
        assert np.all(np.linalg.eigvalsh((r + r.conj().T) / 2) >= -1e-12)


class TestNormalTuple:
    def test_records_actual_bounds(self, rng):
        x = np.diag([1.0, -1.0])
        y = np.array([[0.0, 0.5], [0.5, 0.0]])
        t = NormalTuple.from_matrices([x, y])
        assert t.commutator_bound == pytest.approx(operator_norm(commutator(x, y)))
        assert t.contraction_slack == 0.0
        t2 = NormalTuple.from_matrices([2.0 * np.eye(2)])
        assert t2.contraction_slack == pytest.approx(1.0)

    def test_rejects_mixed_dims(self):
        with pytest.raises(LinalgError):
            NormalTuple.from_matrices([np.eye(2), np.eye(3)])

    def test_matrices_are_read_only(self):
        t = NormalTuple.from_matrices([np.eye(2)])
        with pytest.raises(ValueError):
            t[0][0, 0] = 5.0
