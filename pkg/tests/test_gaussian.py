import numpy as np
import pytest

from combmemory import (
    CovarianceMatrix,
    DimensionError,
    PhysicsError,
    SqueezingSpectrum,
    apply_mode_unitary,
    gaussian_fidelity,
    purity,
    squeezed_vacuum,
    squeezing_spectrum,
    supermode_extraction,
    symplectic_eigenvalues,
    symplectic_embedding,
    symplectic_form,
    vacuum,
)
from support import random_pure_state, random_unitary


class TestCovarianceMatrix:
    def test_vacuum_is_identity(self):
        C = vacuum(3)
        assert np.array_equal(C.entries, np.eye(6))
        assert C.mode_count == 3
        assert purity(C) == pytest.approx(1.0)

    def test_rejects_odd_dimension(self):
        with pytest.raises(DimensionError):
            CovarianceMatrix(np.eye(3))

    def test_rejects_asymmetric(self):
        M = np.eye(2)
        M[0, 1] = 0.5
        with pytest.raises(PhysicsError, match="symmetric"):
            CovarianceMatrix(M)

    def test_rejects_unphysical(self):
        # both quadratures below shot noise violates the uncertainty bound
        with pytest.raises(PhysicsError, match="uncertainty|physical"):
            CovarianceMatrix(np.diag([0.5, 0.5]))

    def test_symmetrizes_float_noise(self):
        M = np.eye(2)
        M[0, 1] = 1e-14
        C = CovarianceMatrix(M)
        assert C.entries[0, 1] == C.entries[1, 0]

    def test_block_view(self):
        C = squeezed_vacuum(SqueezingSpectrum((0.5, 0.25)))
        assert np.allclose(C.block(1), np.diag([4.0, 0.25]))

    def test_json_round_trip(self):
        C = squeezed_vacuum(SqueezingSpectrum((0.5,)), angles=(0.3,))
        again = CovarianceMatrix.from_json(C.to_json())
        assert np.abs(again.entries - C.entries).max() < 1e-15


class TestSymplectic:
    def test_form_squares_to_minus_identity(self):
        Om = symplectic_form(4)
        assert np.array_equal(Om @ Om, -np.eye(8))

    def test_embedding_is_symplectic(self):
        rng = np.random.default_rng(2)
        for M in (1, 2, 5):
            S = symplectic_embedding(random_unitary(M, rng))
            Om = symplectic_form(M)
            assert np.abs(S @ Om @ S.T - Om).max() < 1e-12
            assert np.linalg.det(S) == pytest.approx(1.0)

    def test_vacuum_eigenvalues_are_one(self):
        nu = symplectic_eigenvalues(vacuum(4))
        assert np.abs(nu - 1.0).max() < 1e-12

    def test_squeezing_leaves_eigenvalues_at_one(self):
        C = squeezed_vacuum(SqueezingSpectrum((0.1, 0.7)), angles=(0.2, 1.1))
        nu = symplectic_eigenvalues(C)
        assert np.abs(nu - 1.0).max() < 1e-9


class TestSqueezedVacuum:
    def test_blocks_carry_reciprocal_pairs(self):
        C = squeezed_vacuum(SqueezingSpectrum((0.25,)))
        assert np.allclose(C.block(0), np.diag([4.0, 0.25]))

    def test_angle_rotates_quadratures(self):
        C = squeezed_vacuum(SqueezingSpectrum((0.25,)), angles=(np.pi / 2,))
        assert np.allclose(C.block(0), np.diag([0.25, 4.0]), atol=1e-12)

    def test_determinant_one_per_mode(self):
        C = squeezed_vacuum(SqueezingSpectrum((0.3, 0.8)), angles=(0.4, 0.9))
        assert np.linalg.det(C.entries) == pytest.approx(1.0)

    def test_angle_count_must_match(self):
        with pytest.raises(DimensionError):
            squeezed_vacuum(SqueezingSpectrum((0.5, 0.5)), angles=(0.1,))


class TestPurityAndSpectrum:
    def test_pure_states_have_unit_purity(self):
        rng = np.random.default_rng(23)
        for M in (1, 2, 4):
            assert purity(random_pure_state(M, rng)) == pytest.approx(1.0, abs=1e-9)

    def test_thermal_mixture_purity(self):
        # purity = 1/sqrt(det C); an n=0.5 thermal mode has det = 4
        C = CovarianceMatrix(np.diag([2.0, 2.0]))
        assert purity(C) == pytest.approx(0.5)

    def test_spectrum_recovers_inputs_sorted(self):
        C = squeezed_vacuum(SqueezingSpectrum((0.7, 0.2)), angles=(0.3, 1.0))
        got = squeezing_spectrum(C).values
        assert np.allclose(got, [0.2, 0.7], atol=1e-12)

    def test_spectrum_empty_for_vacuum(self):
        assert len(squeezing_spectrum(vacuum(3))) == 0

    def test_spectrum_invariant_under_mode_mixing(self):
        rng = np.random.default_rng(31)
        C = squeezed_vacuum(SqueezingSpectrum((0.4, 0.9)))
        mixed = apply_mode_unitary(C, random_unitary(2, rng))
        assert np.allclose(
            squeezing_spectrum(mixed).values, squeezing_spectrum(C).values, atol=1e-10
        )

    def test_db_view(self):
        s = SqueezingSpectrum((0.1,))
        assert s.db[0] == pytest.approx(-10.0)
        assert SqueezingSpectrum.from_db([-10.0]).values[0] == pytest.approx(0.1)


class TestSupermodeExtraction:
    def test_round_trip_random_pure_states(self):
        # 50 random pure covariances across mode counts reassemble within 1e-8
        rng = np.random.default_rng(42)
        for k in range(50):
            M = int(rng.integers(1, 7))
            C = random_pure_state(M, rng)
            basis, spectrum, angles = supermode_extraction(C)
            V = basis.matrix()
            D = apply_mode_unitary(C, V)
            target = np.zeros((2 * M, 2 * M))
            for m, z in enumerate(spectrum.values):
                target[2 * m: 2 * m + 2, 2 * m: 2 * m + 2] = np.diag([1.0 / z, z])
            assert np.abs(D.entries - target).max() < 1e-8
            back = apply_mode_unitary(D, V.conj().T)
            assert np.abs(back.entries - C.entries).max() < 1e-8
            assert np.all(angles == 0.0)

    def test_vacuum_extraction_is_identity(self):
        basis, spectrum, _ = supermode_extraction(vacuum(3))
        assert np.abs(basis.matrix() - np.eye(3)).max() < 1e-12
        assert np.allclose(spectrum.values, 1.0)

    def test_degenerate_squeezing_pair(self):
        rng = np.random.default_rng(8)
        C = apply_mode_unitary(
            squeezed_vacuum(SqueezingSpectrum((0.3, 0.3))), random_unitary(2, rng)
        )
        basis, spectrum, _ = supermode_extraction(C)
        assert np.allclose(spectrum.values, [0.3, 0.3], atol=1e-10)
        D = apply_mode_unitary(C, basis.matrix())
        assert np.abs(D.entries - np.kron(np.eye(2), np.diag([1 / 0.3, 0.3]))).max() < 1e-8

    def test_mixed_state_rejected(self):
        with pytest.raises(PhysicsError, match="pure"):
            supermode_extraction(CovarianceMatrix(np.diag([2.0, 2.0])))

    def test_spectrum_ascending(self):
        rng = np.random.default_rng(77)
        C = random_pure_state(5, rng)
        _, spectrum, _ = supermode_extraction(C)
        assert np.all(np.diff(spectrum.values) >= -1e-12)


class TestGaussianFidelity:
    def test_same_state_unity(self):
        C = CovarianceMatrix(np.diag([4.0, 0.25]))
        assert gaussian_fidelity(C, C) == pytest.approx(1.0)

    def test_vacuum_versus_squeezed(self):
        # overlap of vacuum with an r = ln 2 squeezed vacuum is 1/cosh r = 0.8
        C1 = vacuum(1)
        C2 = CovarianceMatrix(np.diag([4.0, 0.25]))
        assert gaussian_fidelity(C1, C2) == pytest.approx(0.8, abs=1e-12)

    def test_symmetric_in_arguments(self):
        C1 = CovarianceMatrix(np.diag([1.5, 1.0]))
        C2 = CovarianceMatrix(np.diag([2.0, 0.6]))
        assert gaussian_fidelity(C1, C2) == pytest.approx(gaussian_fidelity(C2, C1))

    def test_multimode_rejected(self):
        with pytest.raises(DimensionError):
            gaussian_fidelity(vacuum(2), vacuum(2))

    def test_rotation_invariance(self):
        rng = np.random.default_rng(12)
        C1 = random_pure_state(1, rng)
        C2 = CovarianceMatrix(np.diag([1.8, 0.9]))
        U = random_unitary(1, rng)
        F0 = gaussian_fidelity(C1, C2)
        F1 = gaussian_fidelity(apply_mode_unitary(C1, U), apply_mode_unitary(C2, U))
        assert F1 == pytest.approx(F0, abs=1e-12)
