"""Estimators, KS calibration, tail regression and KDE mode counting."""

import math

import numpy as np
import pytest

from branchlaw import (
    BatchKind,
    DomainError,
    EstimateWithSE,
    ModelParams,
    NotEnoughData,
    SampleBatch,
    VarianceUnbounded,
    density_tail_check,
    empirical_mgf,
    gaussian_kde_grid,
    kde_mode_count,
    ks_one_sample_exp,
    ks_two_sample,
    silverman_bandwidth,
    tail_slope,
)

PARAMS = ModelParams()


def _batch(values, kind=BatchKind.W):
    return SampleBatch(np.asarray(values, dtype=float), kind, PARAMS)


class TestEstimateWithSE:
    def test_requires_two_points(self):
        with pytest.raises(NotEnoughData):
            EstimateWithSE(1.0, 0.0, 1)

    def test_within(self):
        est = EstimateWithSE(1.05, 0.02, 100)
        assert est.within(1.0, n_se=3.0)
        assert not est.within(1.0, n_se=2.0)


class TestEmpiricalMgf:
    def test_at_zero(self):
        est = empirical_mgf(_batch(np.linspace(0, 2, 50)), 0.0)
        assert est.value == 1.0
        assert est.se == 0.0

    def test_constant_batch(self):
        est = empirical_mgf(_batch(np.ones(100)), 1.0)
        assert est.value == pytest.approx(math.e, rel=1e-12)
        assert est.se < 1e-15

    def test_variance_guard(self):
        with pytest.raises(VarianceUnbounded):
            empirical_mgf(_batch(np.ones(100)), 1.5, r_star=2.5)
        # no guard without r_star or for non-W batches
        empirical_mgf(_batch(np.ones(100)), 1.5)
        empirical_mgf(_batch(np.ones(100), BatchKind.W1), 1.5, r_star=2.5)


class TestTailSlope:
    def test_recovers_exponential_rate(self):
        rng = np.random.Generator(np.random.Philox(5))
        vals = rng.exponential(scale=0.5, size=100000)  # rate 2
        fit = tail_slope(_batch(vals), 1.0, 4.0)
        assert fit.slope == pytest.approx(2.0, rel=0.1)
        assert fit.n_tail >= 100

    def test_not_enough_tail(self):
        rng = np.random.Generator(np.random.Philox(6))
        vals = rng.exponential(size=1000)
        with pytest.raises(NotEnoughData):
            tail_slope(_batch(vals), 30.0, 40.0)

    def test_window_validation(self):
        with pytest.raises(DomainError):
            tail_slope(_batch(np.ones(200)), 2.0, 1.0)


class TestKS:
    def test_null_calibration_one_sample(self):
        # p should essentially never dip below 0.01 under the null
        hits = 0
        for seed in range(100):
            rng = np.random.Generator(np.random.Philox(seed))
            batch = _batch(rng.exponential(size=2000))
            _, p = ks_one_sample_exp(batch)
            hits += p > 0.01
        assert hits >= 98

    def test_two_sample_null_and_alternative(self):
        rng = np.random.Generator(np.random.Philox(7))
        a = _batch(rng.exponential(size=5000))
        b = _batch(rng.exponential(size=7000))
        _, p_null = ks_two_sample(a, b)
        assert p_null > 0.01
        c = _batch(rng.exponential(scale=1.25, size=5000))
        _, p_alt = ks_two_sample(a, c)
        assert p_alt < 0.01

    def test_underpowered(self):
        with pytest.raises(NotEnoughData):
            ks_one_sample_exp(_batch(np.linspace(0.1, 1, 40)))
        with pytest.raises(NotEnoughData):
            ks_two_sample(_batch(np.linspace(0.1, 1, 40)), _batch(np.linspace(0.1, 1, 60)))


class TestKde:
    def test_unimodal_exponential(self):
        rng = np.random.Generator(np.random.Philox(8))
        batch = _batch(rng.exponential(size=100000))
        assert kde_mode_count(batch) == 1

    def test_bimodal_mixture_detected_at_small_bandwidth(self):
        rng = np.random.Generator(np.random.Philox(9))
        vals = np.concatenate([rng.normal(2.0, 0.3, 50000), rng.normal(6.0, 0.3, 50000)])
        batch = _batch(np.clip(vals, 0.0, None))
        assert kde_mode_count(batch, bandwidth=0.15) == 2
        # heavy oversmoothing merges the modes
        assert kde_mode_count(batch, bandwidth=3.0) == 1

    def test_integral_normalized(self):
        rng = np.random.Generator(np.random.Philox(10))
        grid, dens, bw = gaussian_kde_grid(rng.exponential(size=200000) + 0.5)
        assert float(dens.sum() * (grid[1] - grid[0])) == pytest.approx(1.0, abs=1e-3)

    def test_silverman_positive(self):
        rng = np.random.Generator(np.random.Philox(11))
        assert silverman_bandwidth(rng.exponential(size=1000)) > 0
        with pytest.raises(DomainError):
            silverman_bandwidth(np.ones(100))


class TestDensityTailCheck:
    def test_requires_large_batch(self, tables):
        with pytest.raises(NotEnoughData):
            density_tail_check(_batch(np.ones(1000) + np.linspace(0, 1, 1000)), tables)

    def test_synthetic_exponential_slope(self, tables):
        # Exp(1): -log f(x) has slope exactly 1
        rng = np.random.Generator(np.random.Philox(12))
        batch = _batch(rng.exponential(size=10**6))
        report = density_tail_check(batch, tables)
        assert report.right_slope == pytest.approx(1.0, rel=0.1)
        # Exp(1) has mass at the boundary, so the [0, max+3bw] grid loses the
        # kernel spill below zero (~ f(0) h phi(0)); the sharp 1e-3 check
        # applies to densities vanishing at 0 and runs in the acceptance suite
        assert report.kde_integral == pytest.approx(1.0, abs=0.05)
        assert set(report.left_ratios) == {0.05, 0.1}
