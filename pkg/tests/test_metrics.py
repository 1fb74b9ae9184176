import numpy as np
import pytest

from combmemory import (
    CovarianceMatrix,
    DimensionError,
    PhysicsError,
    covariance_map,
    db_to_zeta,
    efficiency,
    fidelity_supermode,
    gaussian_fidelity,
    output_purity,
    output_squeezing,
    overall_fidelity,
    purity,
    report_from_block,
    retrieval_table,
    zeta_to_db,
)

ETA4 = efficiency(4.0)


def pure_block(zeta, theta=0.0):
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s], [s, c]])
    return CovarianceMatrix(R @ np.diag([1.0 / zeta, zeta]) @ R.T)


class TestDecibelConversions:
    def test_round_trip(self):
        for db in (-10.0, -6.0, -3.0, 0.0, 2.5):
            assert zeta_to_db(db_to_zeta(db)) == pytest.approx(db, abs=1e-12)

    def test_minus_six_db(self):
        assert db_to_zeta(-6.0) == pytest.approx(10.0 ** -0.6, abs=1e-15)

    def test_nonpositive_variance_rejected(self):
        with pytest.raises(PhysicsError, match="positive"):
            zeta_to_db(0.0)


class TestClosedForms:
    def test_output_squeezing_value(self):
        got = output_squeezing(10.0 ** -0.6, ETA4)
        assert got == pytest.approx(0.2783673617410465, abs=1e-15)

    def test_output_squeezing_limits(self):
        assert output_squeezing(0.5, 0.0) == 1.0   # nothing retrieved: vacuum
        assert output_squeezing(0.5, 1.0) == 0.5   # lossless: unchanged

    def test_purity_value(self):
        got = output_purity(np.diag([4.0, 0.25]), ETA4)
        assert got == pytest.approx(0.9628294503360206, abs=1e-15)

    def test_purity_matches_general_route(self):
        # closed form against det of the mapped covariance
        rng = np.random.default_rng(3)
        for _ in range(200):
            zeta = float(np.exp(-2.0 * rng.uniform(0.0, 1.5)))
            theta = float(rng.uniform(0.0, np.pi))
            eta = float(rng.uniform(0.0, 1.0))
            C = pure_block(zeta, theta)
            got = output_purity(C, eta)
            ref = purity(covariance_map(C, eta))
            assert abs(got - ref) < 1e-10

    def test_fidelity_value(self):
        got = fidelity_supermode(np.diag([10.0 ** 0.6, 10.0 ** -0.6]), ETA4)
        assert got == pytest.approx(0.9806864506695876, abs=1e-10)

    def test_fidelity_matches_general_route(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            zeta = float(np.exp(-2.0 * rng.uniform(0.0, 1.5)))
            theta = float(rng.uniform(0.0, np.pi))
            eta = float(rng.uniform(0.0, 1.0))
            C = pure_block(zeta, theta)
            got = fidelity_supermode(C, eta)
            ref = gaussian_fidelity(C, covariance_map(C, eta))
            assert abs(got - ref) < 1e-9

    def test_vacuum_is_a_fixed_point(self):
        C = np.eye(2)
        assert fidelity_supermode(C, 0.37) == pytest.approx(1.0)
        assert output_purity(C, 0.37) == pytest.approx(1.0)

    def test_impure_block_rejected(self):
        with pytest.raises(PhysicsError, match="report_from_block"):
            fidelity_supermode(np.diag([2.0, 2.0]), 0.5)
        with pytest.raises(PhysicsError, match="report_from_block"):
            output_purity(np.diag([2.0, 2.0]), 0.5)

    def test_bad_eta_rejected(self):
        with pytest.raises(PhysicsError, match="efficiency"):
            output_purity(np.diag([4.0, 0.25]), 1.2)


class TestReportFromBlock:
    def test_pure_block_uses_closed_forms(self):
        r = report_from_block(np.diag([10.0 ** 0.6, 10.0 ** -0.6]), ETA4)
        assert not r.oracle_fallback
        assert r.zeta_in == pytest.approx(10.0 ** -0.6, abs=1e-14)
        assert r.zeta_out == pytest.approx(0.2783673617410465, abs=1e-14)
        assert r.fidelity == pytest.approx(0.9806864506695876, abs=1e-10)
        assert r.zeta_out_db == pytest.approx(zeta_to_db(r.zeta_out))

    def test_impure_block_falls_back(self):
        r = report_from_block(np.diag([2.0, 2.0]), ETA4)
        assert r.oracle_fallback
        # thermal input: eigenvalues still map affinely
        assert r.zeta_out == pytest.approx(1.0 - ETA4 * (1.0 - 2.0), abs=1e-14)
        assert 0.0 < r.fidelity <= 1.0
        assert r.purity_out == pytest.approx(
            purity(covariance_map(CovarianceMatrix(np.diag([2.0, 2.0])), ETA4))
        )

    def test_rotated_block_matches_axis_aligned(self):
        # rotation invariance: only Tr C enters the closed forms
        r0 = report_from_block(pure_block(0.3), ETA4)
        r1 = report_from_block(pure_block(0.3, theta=0.7), ETA4)
        assert r1.fidelity == pytest.approx(r0.fidelity, abs=1e-12)
        assert r1.purity_out == pytest.approx(r0.purity_out, abs=1e-12)
        assert r1.zeta_in == pytest.approx(r0.zeta_in, abs=1e-12)

    def test_multimode_block_rejected(self):
        with pytest.raises(DimensionError, match="single-mode"):
            report_from_block(np.eye(4), ETA4)


class TestOverallFidelity:
    def test_product_and_vector(self):
        reports = retrieval_table([-6.0, -3.0], 4.0)
        total, vec = overall_fidelity(reports)
        assert vec.shape == (2,)
        assert total == pytest.approx(vec[0] * vec[1], rel=1e-15)

    def test_ten_equal_modes(self):
        reports = [
            report_from_block(np.diag([1.0 / z, z]), eta)
            for z, eta in [(0.5, 0.9)] * 10
        ]
        total, vec = overall_fidelity(reports)
        assert total == pytest.approx(vec[0] ** 10, rel=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(DimensionError):
            overall_fidelity([])


class TestRetrievalTable:
    def test_no_squeezing_passes_through(self):
        (r,) = retrieval_table([0.0], 4.0)
        assert (r.zeta_in, r.zeta_out, r.purity_out, r.fidelity) == (1.0, 1.0, 1.0, 1.0)

    def test_weaker_squeezing_survives_better(self):
        reports = retrieval_table([-6.0, -3.0, -1.0], 4.0)
        fids = [r.fidelity for r in reports]
        purs = [r.purity_out for r in reports]
        assert fids == sorted(fids)
        assert purs == sorted(purs)

    def test_deep_memory_is_nearly_transparent(self):
        reports = retrieval_table([-10.0, -6.0, -3.0], 50.0)
        assert all(r.fidelity >= 1.0 - 1e-3 for r in reports)
        assert all(r.purity_out >= 1.0 - 1e-3 for r in reports)

    def test_matches_block_route(self):
        for db in (-6.0, -4.5, -1.0):
            (r,) = retrieval_table([db], 4.0)
            z = db_to_zeta(db)
            ref = report_from_block(np.diag([1.0 / z, z]), ETA4)
            assert r.fidelity == pytest.approx(ref.fidelity, abs=1e-14)
            assert r.purity_out == pytest.approx(ref.purity_out, abs=1e-14)
            assert r.zeta_out == pytest.approx(ref.zeta_out, abs=1e-14)

    def test_indices_follow_input_order(self):
        reports = retrieval_table([-1.0, -2.0, -3.0], 4.0)
        assert [r.index for r in reports] == [0, 1, 2]

    def test_validation(self):
        with pytest.raises(DimensionError):
            retrieval_table([], 4.0)
        with pytest.raises(PhysicsError):
            retrieval_table([-6.0], 0.0)


class TestMonotonicity:
    def test_fidelity_increases_with_depth(self):
        fids = [retrieval_table([-6.0], d)[0].fidelity for d in np.linspace(0.5, 30, 40)]
        assert np.all(np.diff(fids) > 0)

    def test_output_squeezing_weakens_with_loss(self):
        zetas = [output_squeezing(0.25, eta) for eta in np.linspace(0.0, 1.0, 21)]
        assert np.all(np.diff(zetas) < 0)  # toward the input as eta -> 1
        assert zetas[0] == 1.0
