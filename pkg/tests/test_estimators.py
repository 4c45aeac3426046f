"""Coefficient estimation: exact recovery from exact matrices, invariances,
both estimation routes on simulated data, and the result container."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stablepar.covariation import ncv_auto, ncv_phase_matrix
from stablepar.estimators import (
    EstimationResult,
    estimate_alpha,
    theta_from_cov_matrices,
    yw_cv_estimate,
    yw_t_estimate,
)
from stablepar.exceptions import DataError, DegenerateSeriesError
from stablepar.par_model import (
    MultiTrajectory,
    ParModel,
    simulate_par1,
    theoretical_phase_matrix,
)
from stablepar.rng import RandomStream
from stablepar.stable import DiscreteSpectralMeasure


class TestEstimationResult:
    def test_theta_at_wraps(self, model1):
        res = EstimationResult(theta_hat=model1.theta, method="YW-CV")
        assert np.array_equal(res.theta_at(1), model1.theta[0])
        assert np.array_equal(res.theta_at(4), model1.theta[0])
        assert np.array_equal(res.theta_at(0), model1.theta[2])
        assert res.period == 3
        assert res.dim == 2

    def test_rejects_non_square_or_non_finite(self):
        with pytest.raises(ValueError):
            EstimationResult(theta_hat=(np.ones((2, 3)),), method="YW-CV")
        with pytest.raises(ValueError):
            EstimationResult(theta_hat=(np.array([[np.nan]]),), method="YW-CV")

    def test_csv_round_trip(self, tmp_path, model2):
        res = EstimationResult(theta_hat=model2.theta, method="YW-T", alpha_used=1.8)
        path = tmp_path / "coef.csv"
        res.to_csv(path)
        back = EstimationResult.from_csv(path, method="YW-T")
        assert back.period == res.period
        for a, b in zip(back.theta_hat, res.theta_hat):
            assert np.array_equal(a, b)

    def test_from_csv_rejects_non_square_layout(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("v,theta_11,theta_12\n1,0.5,0.2\n")
        with pytest.raises(ValueError):
            EstimationResult.from_csv(path)


class TestExactRecovery:
    def test_theoretical_matrices_recover_coefficients(self, model1):
        """The estimating systems are exact identities of the model: feeding
        exact dependence matrices returns the exact coefficients."""
        m0s = [theoretical_phase_matrix(model1, v - 1, 0) for v in (1, 2, 3)]
        m1s = [theoretical_phase_matrix(model1, v, 1) for v in (1, 2, 3)]
        res = theta_from_cov_matrices(m0s, m1s)
        for v in range(3):
            assert np.allclose(res.theta_hat[v], model1.theta[v], atol=1e-10)
        assert res.all_converged

    def test_column_scaling_cancels(self, model1):
        """Rescaling column l of both matrices by any positive factor leaves
        the solution unchanged — the algebraic fact that lets normalized
        and unnormalized covariation matrices feed the same solve."""
        m0 = theoretical_phase_matrix(model1, 0, 0)
        m1 = theoretical_phase_matrix(model1, 1, 1)
        d = np.diag([3.7, 0.04])
        plain = theta_from_cov_matrices([m0], [m1]).theta_hat[0]
        scaled = theta_from_cov_matrices([m0 @ d], [m1 @ d]).theta_hat[0]
        assert np.allclose(plain, scaled, atol=1e-12)

    def test_mismatched_matrix_lists(self, model1):
        m0 = theoretical_phase_matrix(model1, 0, 0)
        with pytest.raises(ValueError):
            theta_from_cov_matrices([m0], [])


class TestYwCvEstimate:
    def test_univariate_reduces_to_scalar_ratio(self):
        """For m = 1 each phase system is one scalar equation, so the
        estimate equals the ratio of the phase lag-1 to lag-0 normalized
        covariations computed directly."""
        model = ParModel(
            period=2,
            theta=(np.array([[0.6]]), np.array([[-0.4]])),
            alpha=1.7,
            noise=DiscreteSpectralMeasure.symmetric([[1.0]], [0.5]),
        )
        traj = simulate_par1(model, 4000, RandomStream(14))
        res = yw_cv_estimate(traj, 2)
        for v in (1, 2):
            num = ncv_phase_matrix(traj, 2, v, 1).values[0, 0]
            den = ncv_phase_matrix(traj, 2, v - 1, 0).values[0, 0]
            assert res.theta_hat[v - 1][0, 0] == pytest.approx(num / den, rel=1e-10)

    def test_permutation_equivariance(self, model1):
        """Relabeling components permutes the estimate's rows and columns
        accordingly: estimating on (x2, x1) gives P Theta P^T."""
        traj = simulate_par1(model1, 3000, RandomStream(15))
        swapped = MultiTrajectory(values=traj.values[::-1].copy(), t0=traj.t0)
        res = yw_cv_estimate(traj, 3)
        res_sw = yw_cv_estimate(swapped, 3)
        p = np.array([[0.0, 1.0], [1.0, 0.0]])
        for v in range(3):
            assert np.allclose(
                res_sw.theta_hat[v], p @ res.theta_hat[v] @ p.T, atol=1e-10
            )

    def test_recovers_model1_on_moderate_sample(self, model1):
        traj = simulate_par1(model1, 10**4, RandomStream(16))
        res = yw_cv_estimate(traj, 3)
        dev = np.max(np.abs(np.stack(res.theta_hat) - np.stack(model1.theta)))
        assert dev < 0.2
        assert res.method == "YW-CV"
        assert len(res.solve_reports) == 3

    def test_too_short_series(self, model1):
        traj = simulate_par1(model1, 50, RandomStream(17))
        short = MultiTrajectory(values=traj.values[:, :11])
        with pytest.raises(DataError):
            yw_cv_estimate(short, 3)

    def test_degenerate_phase_names_the_phase(self):
        # component 1 is identically zero on phase 1 (t = 1, 3, 5, ...)
        vals = RandomStream(18).generator().normal(size=(2, 100))
        vals[0, ::2] = 0.0
        with pytest.raises(DegenerateSeriesError, match="phase"):
            yw_cv_estimate(MultiTrajectory(values=vals), 2)


class TestYwTEstimate:
    def test_recovers_model1_with_known_alpha(self, model1):
        traj = simulate_par1(model1, 10**4, RandomStream(16))
        res = yw_t_estimate(traj, 3, alpha=1.8)
        dev = np.max(np.abs(np.stack(res.theta_hat) - np.stack(model1.theta)))
        assert dev < 0.25
        assert res.method == "YW-T"
        assert res.alpha_used == 1.8

    def test_alpha_estimated_when_not_given(self, model1):
        traj = simulate_par1(model1, 3000, RandomStream(19))
        res = yw_t_estimate(traj, 3)
        assert res.alpha_used is not None
        assert 1.0 < res.alpha_used <= 2.0

    def test_rejects_alpha_out_of_range(self, model1):
        traj = simulate_par1(model1, 500, RandomStream(19))
        with pytest.raises(ValueError):
            yw_t_estimate(traj, 3, alpha=0.8)


class TestEstimateAlpha:
    def test_close_to_truth_on_long_sample(self, model1):
        traj = simulate_par1(model1, 10**4, RandomStream(16))
        a = estimate_alpha(traj)
        assert a == pytest.approx(1.8, abs=0.15)

    @given(seed=st.integers(0, 30))
    @settings(max_examples=10, deadline=None)
    def test_always_in_valid_range(self, seed, model1):
        traj = simulate_par1(model1, 600, RandomStream(seed))
        assert 1.0 < estimate_alpha(traj) <= 2.0
