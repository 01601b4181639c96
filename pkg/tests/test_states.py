"""Density operators, faithfulness, the sesquilinear form, Bloch states."""

import numpy as np
import pytest

from qobs import states
from qobs.errors import (
    DimensionMismatchError,
    NotHermitianError,
    NotPSDError,
    OutsideBlochBallError,
    TraceNotOneError,
    ValidationError,
)
from qobs.sampling import (
    ginibre,
    random_bloch_vector,
    random_density,
    random_hermitian,
)

from conftest import max_abs_diff


class TestConstruction:
    def test_maximally_mixed_qubit(self):
        rho = states.new_density(np.eye(2) / 2)
        assert rho.dim == 2
        assert rho.eigenvalues == (0.5, 0.5)

    def test_pure_state(self):
        rho = states.new_density(np.diag([1.0, 0.0]))
        assert rho.eigenvalues == (0.0, 1.0)

    def test_trace_not_one(self):
        with pytest.raises(TraceNotOneError) as err:
            states.new_density(np.diag([0.6, 0.6]))
        assert err.value.violation == pytest.approx(0.2)

    def test_not_hermitian(self):
        with pytest.raises(NotHermitianError):
            states.new_density(np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_not_psd(self):
        with pytest.raises(NotPSDError):
            states.new_density(np.diag([1.5, -0.5]))

    def test_matrix_is_read_only(self):
        rho = states.maximally_mixed(2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 9.0
        with pytest.raises(AttributeError):
            rho.dim = 3


class TestMaximallyMixed:
    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_is_identity_over_d(self, d):
        rho = states.maximally_mixed(d)
        assert max_abs_diff(rho.matrix, np.eye(d) / d) == 0.0

    def test_rejects_nonpositive_dim(self):
        with pytest.raises(ValidationError):
            states.maximally_mixed(0)


class TestBloch:
    def test_origin_is_maximally_mixed(self):
        rho = states.bloch_state((0.0, 0.0, 0.0))
        assert max_abs_diff(rho.matrix, np.eye(2) / 2) == 0.0

    def test_north_pole_is_pure(self):
        rho = states.bloch_state((0.0, 0.0, 1.0))
        assert max_abs_diff(rho.matrix, np.diag([1.0, 0.0])) == 0.0
        assert rho.eigenvalues == (0.0, 1.0)

    def test_surface_vector_is_pure(self):
        rho = states.bloch_state((0.6, 0.0, 0.8))
        assert abs(rho.eigenvalues[0]) < 1e-12
        assert abs(rho.eigenvalues[1] - 1.0) < 1e-12

    def test_matrix_layout(self):
        r1, r2, r3 = 0.1, -0.2, 0.3
        rho = states.bloch_state((r1, r2, r3))
        expected = 0.5 * np.array([[1 + r3, r1 - 1j * r2],
                                   [r1 + 1j * r2, 1 - r3]])
        assert max_abs_diff(rho.matrix, expected) == 0.0

    def test_outside_ball_rejected(self):
        with pytest.raises(OutsideBlochBallError):
            states.bloch_state((1.0, 0.5, 0.0))

    def test_eigenvalue_closed_form_on_grid(self, rng):
        for _ in range(100):
            r = random_bloch_vector(rng)
            rho = states.bloch_state(r)
            norm = np.linalg.norm(r)
            assert abs(rho.eigenvalues[0] - (1 - norm) / 2) < 1e-12
            assert abs(rho.eigenvalues[1] - (1 + norm) / 2) < 1e-12


class TestFaithfulness:
    def test_maximally_mixed_is_faithful(self):
        for d in (2, 3, 5):
            assert states.is_faithful(states.maximally_mixed(d))

    def test_pure_state_is_not(self):
        assert not states.is_faithful(states.new_density(np.diag([1.0, 0.0])))

    def test_strictly_positive_spectrum_is(self):
        rho = states.new_density(np.diag([0.999, 0.001]))
        assert states.is_faithful(rho)

    def test_threshold_parameter(self):
        rho = states.new_density(np.diag([0.999, 0.001]))
        assert not states.is_faithful(rho, tol=0.01)


class TestStateForm:
    def test_identity_pair_gives_one(self, rng):
        rho = random_density(rng, 3)
        val = states.state_form(rho, np.eye(3), np.eye(3))
        assert abs(val - 1.0) < 1e-12

    def test_maximally_mixed_reduces_to_hs_inner_product(self, rng):
        n = 4
        rho = states.maximally_mixed(n)
        C = ginibre(rng, n, n)
        D = ginibre(rng, n, n)
        expected = np.trace(C.conj().T @ D) / n
        assert abs(states.state_form(rho, C, D) - expected) < 1e-12

    def test_diagonal_is_nonnegative(self, rng):
        for _ in range(50):
            rho = random_density(rng, 3)
            C = ginibre(rng, 3, 3)
            val = states.state_form(rho, C, C)
            assert val.real >= -1e-9
            assert abs(val.imag) <= 1e-9 * max(1.0, abs(val))

    def test_conjugate_symmetry(self, rng):
        rho = random_density(rng, 4)
        C, D = ginibre(rng, 4, 4), ginibre(rng, 4, 4)
        assert abs(states.state_form(rho, C, D)
                   - np.conj(states.state_form(rho, D, C))) < 1e-12

    def test_cauchy_schwarz(self, rng):
        for _ in range(50):
            rho = random_density(rng, 3)
            C, D = ginibre(rng, 3, 3), ginibre(rng, 3, 3)
            lhs = abs(states.state_form(rho, C, D)) ** 2
            rhs = (states.state_form(rho, C, C).real
                   * states.state_form(rho, D, D).real)
            assert lhs <= rhs + 1e-9 * max(1.0, rhs)

    def test_non_faithful_state_has_null_witness(self, rng):
        # Projector onto a null eigenvector annihilates the form diagonal.
        for _ in range(20):
            rho = random_density(rng, 4, rank=2)
            assert not states.is_faithful(rho)
            w, V = np.linalg.eigh(rho.matrix)
            P = np.outer(V[:, 0], V[:, 0].conj())
            assert abs(states.state_form(rho, P, P)) <= 1e-9

    def test_dimension_mismatch(self):
        rho = states.maximally_mixed(2)
        with pytest.raises(DimensionMismatchError):
            states.state_form(rho, np.eye(3), np.eye(3))


class TestNormalizedDensity:
    def test_rescales_trace(self, rng):
        M = random_density(rng, 3).matrix * 0.4
        rho = states.normalized_density(M)
        assert abs(sum(rho.eigenvalues) - 1.0) < 1e-12

    def test_rejects_near_zero_trace(self):
        with pytest.raises(ValidationError):
            states.normalized_density(np.zeros((2, 2)))
