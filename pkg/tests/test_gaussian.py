"""Tests for Gaussian states, passive propagation, and imperfection channels."""

import math

import numpy as np
import pytest

from cvcluster.gaussian import (
    ComplexUnitary,
    GaussianState,
    SqueezedInputSpec,
    apply_unitary,
    combination_variance,
    impure_squeezed_vacuum,
    lossy_channel,
    phase_jitter,
    phase_jitter_mc,
    squeezed_vacuum,
    squeezing_db_to_r,
    symplectic_form,
    tensor,
    unitary_to_symplectic,
    vacuum,
    variance_to_db,
)
from cvcluster.networks import linear_cluster_unitary

from helpers import cluster_state, haar_unitary, pure_inputs

TOL = 1e-12


def min_uncertainty_eig(state):
    herm = state.cov + 0.25j * symplectic_form(state.n_modes)
    return float(np.min(np.linalg.eigvalsh(herm)))


class TestVacuum:
    def test_single_mode(self):
        state = vacuum(1)
        assert np.array_equal(state.cov, np.diag([0.25, 0.25]))
        assert np.array_equal(state.mean, np.zeros(2))

    def test_four_modes(self):
        assert np.array_equal(vacuum(4).cov, 0.25 * np.eye(8))

    def test_uncertainty_saturated(self):
        # vacuum sits exactly on the uncertainty boundary
        assert abs(min_uncertainty_eig(vacuum(2))) < TOL

    @pytest.mark.parametrize("n", [0, -1, 2.5])
    def test_bad_mode_count_rejected(self, n):
        with pytest.raises(ValueError):
            vacuum(n)


class TestSqueezedVacuum:
    def test_zero_squeezing_is_vacuum(self):
        assert np.allclose(squeezed_vacuum(0.0).cov, np.diag([0.25, 0.25]), atol=TOL)

    def test_six_db_p_variance(self):
        r = squeezing_db_to_r(-6.0)
        state = squeezed_vacuum(r)
        assert state.cov[1, 1] == pytest.approx(0.25 * 10 ** -0.6, abs=1e-15)
        assert state.cov[0, 0] == pytest.approx(0.25 * 10 ** 0.6, abs=1e-15)

    @pytest.mark.parametrize("r", [-1.0, -0.3, 0.0, 0.7, 2.0])
    def test_pure_state_determinant(self, r):
        assert np.linalg.det(squeezed_vacuum(r).cov) == pytest.approx(1 / 16, rel=1e-12)

    @pytest.mark.parametrize("r", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, r):
        with pytest.raises(ValueError):
            squeezed_vacuum(r)


class TestImpureSqueezedVacuum:
    def test_pure_spec_matches_squeezed_vacuum(self):
        spec = SqueezedInputSpec.pure_db(-6.0)
        expected = squeezed_vacuum(squeezing_db_to_r(-6.0))
        assert np.allclose(impure_squeezed_vacuum(spec).cov, expected.cov, atol=TOL)

    def test_independent_levels(self):
        state = impure_squeezed_vacuum(SqueezedInputSpec(-5.5, 9.1))
        assert np.allclose(state.cov, np.diag([0.25 * 10 ** 0.91, 0.25 * 10 ** -0.55]), atol=1e-15)

    def test_zero_levels_is_vacuum(self):
        state = impure_squeezed_vacuum(SqueezedInputSpec(0.0, 0.0))
        assert np.allclose(state.cov, vacuum(1).cov, atol=TOL)

    def test_unphysical_levels_rejected(self):
        with pytest.raises(ValueError, match="unphysical"):
            SqueezedInputSpec(-6.0, 4.0)

    def test_pure_flag_requires_mirrored_levels(self):
        with pytest.raises(ValueError, match="pure"):
            SqueezedInputSpec(-6.0, 9.0, pure=True)

    def test_sign_conventions_enforced(self):
        with pytest.raises(ValueError):
            SqueezedInputSpec(1.0, 1.0)
        with pytest.raises(ValueError):
            SqueezedInputSpec(-1.0, -1.0)


class TestTensor:
    def test_vacua_compose(self):
        assert np.array_equal(tensor([vacuum(1), vacuum(1)]).cov, vacuum(2).cov)

    def test_mode_count_sums(self):
        assert tensor([vacuum(2), vacuum(1), vacuum(3)]).n_modes == 6

    def test_block_structure_preserves_order(self):
        r = 0.7
        state = tensor([squeezed_vacuum(r), vacuum(1)])
        assert np.allclose(np.diag(state.cov),
                           [0.25 * math.exp(2 * r), 0.25, 0.25 * math.exp(-2 * r), 0.25],
                           atol=TOL)
        # no correlations between independent parts
        off = state.cov - np.diag(np.diag(state.cov))
        assert np.max(np.abs(off)) < TOL

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            tensor([])


class TestUnitaryToSymplectic:
    def test_identity(self):
        s = unitary_to_symplectic(ComplexUnitary(np.eye(3)))
        assert np.array_equal(s.matrix, np.eye(6))

    def test_all_mode_fourier(self):
        s = unitary_to_symplectic(ComplexUnitary(1j * np.eye(2)))
        expected = np.block([[np.zeros((2, 2)), -np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
        assert np.array_equal(s.matrix, expected)

    def test_linear_network_is_symplectic(self):
        s = unitary_to_symplectic(linear_cluster_unitary()).matrix
        omega = symplectic_form(4)
        assert np.max(np.abs(s @ omega @ s.T - omega)) < TOL

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError, match="unitary"):
            ComplexUnitary(np.array([[1.0, 0.1], [0.0, 1.0]]))


class TestApplyUnitary:
    def test_vacuum_invariant(self):
        rng = np.random.default_rng(3)
        state = apply_unitary(vacuum(4), haar_unitary(4, rng))
        assert np.allclose(state.cov, 0.25 * np.eye(8), atol=1e-14)

    def test_inverse_restores(self):
        rng = np.random.default_rng(4)
        u = haar_unitary(4, rng)
        state = pure_inputs([0.3, 0.6, 0.9, 1.2])
        back = apply_unitary(apply_unitary(state, u), u.adjoint())
        assert np.max(np.abs(back.cov - state.cov)) < TOL

    def test_trace_preserved(self):
        rng = np.random.default_rng(5)
        state = pure_inputs(rng.uniform(-0.5, 1.5, 4))
        out = apply_unitary(state, haar_unitary(4, rng))
        assert np.trace(out.cov) == pytest.approx(np.trace(state.cov), abs=1e-10)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError, match="modes"):
            apply_unitary(vacuum(3), linear_cluster_unitary())


class TestLossyChannel:
    def test_full_transmission_is_identity(self):
        state = cluster_state("linear4", [0.5] * 4)
        out = lossy_channel(state, 2, 1.0)
        assert np.array_equal(out.cov, state.cov)

    def test_zero_transmission_gives_vacuum_mode(self):
        state = cluster_state("linear4", [0.5] * 4)
        out = lossy_channel(state, 1, 0.0)
        assert out.cov[0, 0] == pytest.approx(0.25, abs=TOL)
        assert out.cov[4, 4] == pytest.approx(0.25, abs=TOL)
        # correlations to the lost mode vanish
        for k in (0, 4):
            row = np.delete(out.cov[k], [0, 4])
            assert np.max(np.abs(row)) < TOL

    def test_half_transmission_formula(self):
        v = 0.25 * math.exp(-2 * 0.7)
        out = lossy_channel(squeezed_vacuum(0.7), 1, 0.5)
        assert out.cov[1, 1] == pytest.approx(0.5 * v + 0.125, abs=1e-15)

    def test_mean_scales(self):
        # (x1, x2, p1, p2) ordering: loss on mode 2 scales x2 and p2 by sqrt(eta)
        state = GaussianState(mean=[1.0, 4.0, -2.0, 3.0], cov=0.25 * np.eye(4))
        out = lossy_channel(state, 2, 0.25)
        assert np.allclose(out.mean, [1.0, 2.0, -2.0, 1.5], atol=TOL)

    @pytest.mark.parametrize("eta", [-0.1, 1.1])
    def test_out_of_range_rejected(self, eta):
        with pytest.raises(ValueError):
            lossy_channel(vacuum(1), 1, eta)

    def test_bad_mode_rejected(self):
        with pytest.raises(ValueError, match="mode"):
            lossy_channel(vacuum(2), 3, 0.5)


class TestPhaseJitter:
    def test_zero_sigma_is_identity(self):
        state = squeezed_vacuum(0.8)
        assert phase_jitter(state, 1, 0.0) is state

    def test_full_dephasing_symmetrizes(self):
        state = squeezed_vacuum(0.8)
        out = phase_jitter(state, 1, 50.0)
        mid = (state.cov[0, 0] + state.cov[1, 1]) / 2
        assert out.cov[0, 0] == pytest.approx(mid, rel=1e-9)
        assert out.cov[1, 1] == pytest.approx(mid, rel=1e-9)

    def test_small_sigma_interpolates(self):
        state = squeezed_vacuum(squeezing_db_to_r(-6.0))
        out = phase_jitter(state, 1, 0.1)
        mid = (state.cov[0, 0] + state.cov[1, 1]) / 2
        assert state.cov[1, 1] < out.cov[1, 1] < mid

    def test_cross_correlations_shrink(self):
        state = cluster_state("linear4", [0.6] * 4)
        sigma = 0.3
        out = phase_jitter(state, 1, sigma)
        expected = state.cov[0, 1] * math.exp(-sigma ** 2 / 2)
        assert out.cov[0, 1] == pytest.approx(expected, rel=1e-12)

    def test_monte_carlo_cross_check(self):
        # independent oracle: average explicitly rotated covariances
        state = squeezed_vacuum(squeezing_db_to_r(-6.0))
        closed = phase_jitter(state, 1, 0.1)
        sampled = phase_jitter_mc(state, 1, 0.1, samples=200_000, seed=11)
        assert np.allclose(sampled.cov, closed.cov, rtol=1e-3, atol=1e-3)

    def test_monte_carlo_with_displacement(self):
        state = GaussianState(mean=[2.0, -1.0], cov=squeezed_vacuum(0.5).cov)
        closed = phase_jitter(state, 1, 0.2)
        sampled = phase_jitter_mc(state, 1, 0.2, samples=200_000, seed=12)
        assert np.allclose(sampled.cov, closed.cov, rtol=2e-3, atol=2e-3)
        assert np.allclose(sampled.mean, closed.mean, atol=2e-3)

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError):
            phase_jitter(vacuum(1), 1, -0.1)


class TestCombinationVariance:
    def test_vacuum_quadrature(self):
        c = np.zeros(2)
        c[0] = 1.0
        assert combination_variance(vacuum(1), c) == pytest.approx(0.25, abs=1e-15)

    def test_linear_cluster_edge_correlation(self):
        r1 = 0.9
        state = cluster_state("linear4", [r1, 0.4, 0.2, 0.6])
        c = np.zeros(8)
        c[4] = 1.0   # p_1
        c[1] = -1.0  # -x_2
        assert combination_variance(state, c) == pytest.approx(2 * math.exp(-2 * r1) / 4, rel=1e-12)

    def test_bilinear_scaling(self):
        rng = np.random.default_rng(6)
        state = pure_inputs(rng.uniform(0, 1, 4))
        c = rng.standard_normal(8)
        assert combination_variance(state, 2 * c) == pytest.approx(4 * combination_variance(state, c), rel=1e-12)

    def test_mean_independent(self):
        c = np.array([1.0, -1.0, 0.5, 0.0])
        cov = 0.3 * np.eye(4)
        centered = GaussianState(mean=np.zeros(4), cov=cov)
        displaced = GaussianState(mean=[1.0, -2.0, 0.5, 3.0], cov=cov)
        assert combination_variance(displaced, c) == combination_variance(centered, c)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="length"):
            combination_variance(vacuum(2), np.ones(3))


class TestVarianceToDb:
    def test_equal_is_zero(self):
        assert variance_to_db(0.4, 0.4) == 0.0

    @pytest.mark.parametrize("level,ref", [(-5.4, 0.5), (-5.8, 0.75)])
    def test_round_trip(self, level, ref):
        assert variance_to_db(ref * 10 ** (level / 10), ref) == pytest.approx(level, abs=1e-12)

    @pytest.mark.parametrize("v,ref", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
    def test_nonpositive_rejected(self, v, ref):
        with pytest.raises(ValueError):
            variance_to_db(v, ref)


class TestStateValidation:
    def test_asymmetric_covariance_rejected(self):
        cov = np.array([[0.25, 0.1], [0.0, 0.25]])
        with pytest.raises(ValueError, match="symmetric"):
            GaussianState(mean=np.zeros(2), cov=cov)

    def test_uncertainty_violation_rejected(self):
        with pytest.raises(ValueError, match="uncertainty"):
            GaussianState(mean=np.zeros(2), cov=0.1 * np.eye(2))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            GaussianState(mean=np.zeros(4), cov=0.25 * np.eye(2))

    def test_states_are_immutable(self):
        state = vacuum(1)
        with pytest.raises(ValueError):
            state.cov[0, 0] = 1.0


class TestChannelInvariants:
    """Uncertainty and purity behavior under propagation and noise."""

    @pytest.mark.parametrize("seed", range(5))
    def test_uncertainty_preserved(self, seed):
        rng = np.random.default_rng(seed)
        state = pure_inputs(rng.uniform(-0.5, 1.5, 4))
        state = apply_unitary(state, haar_unitary(4, rng))
        state = lossy_channel(state, int(rng.integers(1, 5)), float(rng.uniform(0, 1)))
        state = phase_jitter(state, int(rng.integers(1, 5)), float(rng.uniform(0, 0.5)))
        assert min_uncertainty_eig(state) > -1e-10

    def test_purity_preserved_by_networks(self):
        rng = np.random.default_rng(21)
        state = apply_unitary(pure_inputs(rng.uniform(0, 1.2, 4)), haar_unitary(4, rng))
        assert np.linalg.det(state.cov) == pytest.approx((1 / 16) ** 4, abs=1e-9)

    def test_loss_strictly_increases_determinant(self):
        state = cluster_state("linear4", [0.7] * 4)
        lossy = lossy_channel(state, 2, 0.8)
        assert np.linalg.det(lossy.cov) > np.linalg.det(state.cov)
