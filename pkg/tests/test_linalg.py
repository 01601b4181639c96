"""Matrix arithmetic and spectral primitives."""

import numpy as np
import pytest

from qobs import linalg
from qobs.errors import (
    DimensionMismatchError,
    NotHermitianError,
    NotPSDError,
    ValidationError,
)
from qobs.qubit import SIGMA_X, SIGMA_Y, SIGMA_Z
from qobs.sampling import random_hermitian

from conftest import max_abs_diff


class TestArithmetic:
    def test_adjoint_of_identity(self):
        assert max_abs_diff(linalg.adjoint(np.eye(2)), np.eye(2)) == 0.0

    def test_adjoint_of_hermitian_matrix(self):
        M = np.array([[0, 1j], [-1j, 0]])
        assert max_abs_diff(linalg.adjoint(M), M) == 0.0

    def test_adjoint_transposes_real_matrix(self):
        M = np.array([[0.0, 1.0], [0.0, 0.0]])
        assert max_abs_diff(linalg.adjoint(M), [[0.0, 0.0], [1.0, 0.0]]) == 0.0

    def test_adjoint_is_involutive(self, rng):
        M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        assert max_abs_diff(linalg.adjoint(linalg.adjoint(M)), M) == 0.0

    def test_pauli_product(self):
        assert max_abs_diff(linalg.mul(SIGMA_X, SIGMA_Y), 1j * SIGMA_Z) == 0.0

    def test_identity_is_neutral(self, rng):
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert max_abs_diff(linalg.mul(M, np.eye(4)), M) == 0.0

    def test_rank_one_product(self):
        # |phi><phi| |psi><psi| = <phi,psi> |phi><psi|
        phi = np.array([0.0, 1.0])
        psi = np.array([1.0, 1.0]) / np.sqrt(2)
        A = np.outer(phi, phi.conj())
        B = np.outer(psi, psi.conj())
        expected = (phi @ psi) * np.outer(phi, psi.conj())
        assert max_abs_diff(linalg.mul(A, B), expected) < 1e-15

    def test_add_sub_scale(self):
        A = np.diag([1.0, 2.0]).astype(complex)
        B = np.diag([3.0, 5.0]).astype(complex)
        assert max_abs_diff(linalg.add(A, B), np.diag([4.0, 7.0])) == 0.0
        assert max_abs_diff(linalg.sub(B, A), np.diag([2.0, 3.0])) == 0.0
        assert max_abs_diff(linalg.scale(2j, A), np.diag([2j, 4j])) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            linalg.mul(np.eye(2), np.eye(3))
        with pytest.raises(DimensionMismatchError):
            linalg.add(np.eye(2), np.eye(3))

    def test_rejects_non_square_and_non_finite(self):
        with pytest.raises(DimensionMismatchError):
            linalg.as_matrix(np.ones((2, 3)))
        with pytest.raises(ValidationError):
            linalg.as_matrix(np.array([[np.nan, 0], [0, 1]]))


class TestTrace:
    def test_identity(self):
        assert linalg.trace(np.eye(3)) == 3.0

    def test_traceless_pauli(self):
        assert linalg.trace(SIGMA_Z) == 0.0

    def test_bloch_times_effect(self):
        # tr(rho A1) = (1 + r1 mu) / 2 for the noisy spin-x effect
        r1, r2, r3, mu = 0.3, -0.2, 0.5, 0.7
        rho = 0.5 * np.array([[1 + r3, r1 - 1j * r2], [r1 + 1j * r2, 1 - r3]])
        A1 = 0.5 * (np.eye(2) + mu * SIGMA_X)
        assert abs(linalg.trace(rho @ A1) - (1 + r1 * mu) / 2) < 1e-15

    def test_trace_of_adjoint_is_conjugate(self, rng):
        for _ in range(50):
            D = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            assert linalg.trace(linalg.adjoint(D)) == np.conj(linalg.trace(D))


class TestCommutator:
    def test_self_commutator_vanishes(self, rng):
        A = random_hermitian(rng, 3)
        assert max_abs_diff(linalg.commutator(A, A), np.zeros((3, 3))) == 0.0

    def test_dichotomic_stochastic_commutator(self, rng):
        # [2A1 - I, 2B1 - I] = 4 [A1, B1]
        A1 = random_hermitian(rng, 3)
        B1 = random_hermitian(rng, 3)
        lhs = linalg.commutator(2 * A1 - np.eye(3), 2 * B1 - np.eye(3))
        assert max_abs_diff(lhs, 4 * linalg.commutator(A1, B1)) < 1e-12

    def test_diagonal_matrices_commute(self):
        A = np.diag([1.0, 2.0, 3.0]).astype(complex)
        B = np.diag([4.0, 5.0, 6.0]).astype(complex)
        assert linalg.max_abs(linalg.commutator(A, B)) == 0.0

    def test_antisymmetry(self, rng):
        A, B = random_hermitian(rng, 4), random_hermitian(rng, 4)
        assert max_abs_diff(linalg.commutator(A, B),
                            -linalg.commutator(B, A)) == 0.0


class TestEigendecomposition:
    def test_sigma_z(self):
        decomp = linalg.hermitian_eigendecomposition(SIGMA_Z)
        assert decomp.eigenvalues == (-1.0, 1.0)
        assert max_abs_diff(decomp.projections[0], np.diag([0.0, 1.0])) < 1e-15
        assert max_abs_diff(decomp.projections[1], np.diag([1.0, 0.0])) < 1e-15
        assert decomp.multiplicities == (1, 1)

    def test_fully_degenerate_identity_clusters(self):
        decomp = linalg.hermitian_eigendecomposition(np.eye(4))
        assert decomp.eigenvalues == (1.0,)
        assert decomp.multiplicities == (4,)
        assert max_abs_diff(decomp.projections[0], np.eye(4)) < 1e-14

    def test_near_degenerate_pair_merges(self):
        M = np.diag([1.0, 1.0 + 1e-12, 2.0]).astype(complex)
        decomp = linalg.hermitian_eigendecomposition(M, cluster_tol=1e-8)
        assert len(decomp.eigenvalues) == 2
        assert decomp.multiplicities == (2, 1)
        assert abs(decomp.eigenvalues[0] - (1.0 + 5e-13)) < 1e-13

    def test_reconstruction_oracle_d6(self, rng):
        M = random_hermitian(rng, 6)
        decomp = linalg.hermitian_eigendecomposition(M)
        assert max_abs_diff(decomp.reconstruct(), M) <= 1e-10 * linalg.max_abs(M)

    @pytest.mark.parametrize("dim", range(2, 9))
    def test_invariants_random(self, dim, rng):
        for _ in range(25):
            M = random_hermitian(rng, dim)
            decomp = linalg.hermitian_eigendecomposition(M)
            projections = decomp.projections
            assert all(x < y for x, y in zip(decomp.eigenvalues,
                                             decomp.eigenvalues[1:]))
            assert max_abs_diff(sum(projections), np.eye(dim)) < 1e-9
            for i, P in enumerate(projections):
                assert linalg.max_abs(P @ P - P) < 1e-9
                assert linalg.max_abs(P - P.conj().T) < 1e-9
                for Q in projections[i + 1:]:
                    assert linalg.max_abs(P @ Q) < 1e-9
            assert sum(decomp.multiplicities) == dim

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            linalg.hermitian_eigendecomposition(np.array([[0.0, 1.0],
                                                          [0.0, 0.0]]))


class TestPsdSqrt:
    def test_diagonal(self):
        S = linalg.psd_sqrt(np.diag([4.0, 9.0]).astype(complex))
        assert max_abs_diff(S, np.diag([2.0, 3.0])) < 1e-14

    def test_projection_is_fixed_point(self):
        psi = np.array([1.0, 1.0]) / np.sqrt(2)
        P = np.outer(psi, psi.conj())
        assert max_abs_diff(linalg.psd_sqrt(P), P) < 1e-14

    def test_square_back_oracle(self):
        A1 = 0.5 * (np.eye(2) + 0.6 * SIGMA_X)
        S = linalg.psd_sqrt(A1)
        assert max_abs_diff(S @ S, A1) <= 1e-10

    def test_output_commutes_with_input(self, rng):
        for _ in range(20):
            G = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            M = G @ G.conj().T
            S = linalg.psd_sqrt(M)
            assert linalg.max_abs(S @ M - M @ S) <= 1e-9 * linalg.max_abs(M)

    def test_clips_rounding_negatives(self):
        M = np.diag([1.0, -1e-9]).astype(complex)
        S = linalg.psd_sqrt(M)
        assert max_abs_diff(S, np.diag([1.0, 0.0])) < 1e-12

    def test_rejects_indefinite(self):
        with pytest.raises(NotPSDError):
            linalg.psd_sqrt(np.diag([1.0, -1.0]).astype(complex))

    def test_hermitian_trace_is_real(self, rng):
        M = random_hermitian(rng, 5)
        assert abs(linalg.trace(M).imag) < 1e-9
