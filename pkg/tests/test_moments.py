"""Moment recursion, series oracles and the first-generation log-MGF.

The recursion values are checked against exact rational arithmetic (sympy)
and against the generating-function identity exp(cumulant series) == moment
series, which pins the recursion uniquely.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from branchlaw import (
    DomainError,
    OrderTooLarge,
    RadiusExceeded,
    build_moment_table,
    cgf_series,
    mgf_series,
    moment_table_to_csv,
    w1_log_mgf,
)

GOLDEN_R_STAR = 2.5526946358415502
GOLDEN_PHI_HALF = 5.410810286406858         # mgf at r*/2, F-inversion oracle
GOLDEN_W1_LOGMGF_HALF = 0.5337386279321965  # sum_{k<=30} 0.5^k/(k! k^2)
GOLDEN_W1_LOGMGF_ONE = 1.1464990725286428   # sum_{k<=30} 1/(k! k^2)

# exact values from the recursion in rational arithmetic (alpha = 1)
EXACT_MU = [
    Fraction(1),
    Fraction(4, 3),
    Fraction(9, 4),
    Fraction(208, 45),
    Fraction(2425, 216),
    Fraction(2207, 70),
    Fraction(1303841, 12960),
    Fraction(3059488, 8505),
]


def exact_recursion(K, alpha=1):
    """Independent exact-arithmetic evaluation of the recursion."""
    mu = {1: Fraction(1)}
    for k in range(2, K + 1):
        s = sum(Fraction(math.comb(k - 1, m - 1)) * mu[m] * mu[k - m]
                / Fraction(m) ** (1 + alpha) for m in range(1, k))
        mu[k] = s / (1 - Fraction(1, k ** (1 + alpha)))
    return mu


class TestRecursion:
    def test_mu1_is_one_for_any_alpha(self):
        for alpha in (0.3, 0.5, 1.0, 2.0, 4.5):
            assert build_moment_table(alpha, 3).mu[0] == 1.0

    def test_exact_values_alpha_one(self):
        table = build_moment_table(1.0, 8)
        for k, frac in enumerate(EXACT_MU, start=1):
            assert table.mu[k - 1] == pytest.approx(float(frac), rel=1e-13)

    def test_matches_exact_arithmetic_to_k20(self):
        mu = exact_recursion(20)
        table = build_moment_table(1.0, 20)
        for k in range(1, 21):
            assert table.mu[k - 1] == pytest.approx(float(mu[k]), rel=1e-12)

    def test_generating_function_identity(self):
        # exp(sum mu_k r^k/(k! k^2)) == 1 + sum mu_k r^k/k!, order by order;
        # this identity determines the moments uniquely given mu_1 = 1
        K = 8
        r = sp.symbols("r")
        mu = exact_recursion(K)
        cgf = sum(sp.Rational(mu[k].numerator, mu[k].denominator) * r**k
                  / (sp.factorial(k) * k**2) for k in range(1, K + 1))
        lhs = sp.series(sp.exp(cgf), r, 0, K + 1).removeO()
        rhs = 1 + sum(sp.Rational(mu[k].numerator, mu[k].denominator) * r**k
                      / sp.factorial(k) for k in range(1, K + 1))
        assert sp.expand(lhs - rhs) == 0

    def test_second_moment_closed_form_over_alpha(self):
        # mu2 = 2^(1+a)/(2^(1+a)-1), from the point-process second moment
        for alpha in (0.5, 1.0, 2.0):
            expected = 2.0 ** (1 + alpha) / (2.0 ** (1 + alpha) - 1.0)
            assert build_moment_table(alpha, 2).mu[1] == pytest.approx(expected, rel=1e-13)

    def test_prefix_stability(self):
        small = build_moment_table(1.0, 20)
        large = build_moment_table(1.0, 40)
        assert np.array_equal(small.log_mu, large.log_mu[:20])

    def test_monotone_in_k_alpha_one(self):
        mu = build_moment_table(1.0, 30).mu
        assert np.all(np.diff(mu) > 0)

    def test_alpha_monotonicity(self):
        tables = {a: build_moment_table(a, 10).mu for a in (0.5, 1.0, 2.0)}
        for k in range(1, 10):
            assert tables[0.5][k] >= tables[1.0][k] >= tables[2.0][k]

    def test_c_identity_exact(self):
        table = build_moment_table(1.0, 40)
        k = np.arange(1, 41, dtype=float)
        from scipy.special import gammaln
        expected = table.log_mu - gammaln(k + 1.0) - 2.0 * np.log(k)
        assert np.array_equal(table.log_c, expected)

    def test_classical_cumulant_identity(self):
        # mu_k = sum C(k-1,m-1) kappa_m mu_{k-m} + kappa_k with kappa = k! c_k
        table = build_moment_table(1.0, 15)
        mu = np.concatenate([[1.0], table.mu])  # mu[0] = 1 for indexing
        kappa = [math.factorial(k) * table.c[k - 1] for k in range(1, 16)]
        for k in range(2, 16):
            total = sum(math.comb(k - 1, m - 1) * kappa[m - 1] * mu[k - m]
                        for m in range(1, k)) + kappa[k - 1]
            assert total == pytest.approx(mu[k], rel=1e-12)

    def test_series_radius_matches_r_star(self):
        # Stolz slope of log(mu_k/k!) between k=30 and k=40 -> -log r*
        table = build_moment_table(1.0, 40)
        from scipy.special import gammaln
        log_terms = table.log_mu - gammaln(np.arange(1, 41, dtype=float) + 1.0)
        slope = (log_terms[39] - log_terms[29]) / 10.0
        assert slope == pytest.approx(-math.log(GOLDEN_R_STAR), rel=0.05)

    def test_validation_and_order_guard(self):
        with pytest.raises(DomainError):
            build_moment_table(0.0, 5)
        with pytest.raises(DomainError):
            build_moment_table(1.0, 0)
        with pytest.raises(OrderTooLarge):
            build_moment_table(1.0, 500)
        # the log-domain path reaches far past the float-overflow order
        table = build_moment_table(1.0, 240)
        assert np.all(np.isfinite(table.log_mu))
        assert math.isinf(table.mu[-1])  # mu_240 itself is not a double


class TestMgfSeries:
    def test_at_zero(self, mtable):
        assert mgf_series(0.0, mtable) == (1.0, 0.0)

    def test_leading_term(self, mtable):
        h = 1e-8
        assert (mgf_series(h, mtable).value - 1.0) / h == pytest.approx(1.0, abs=1e-7)

    def test_matches_inversion_golden(self, mtable):
        est = mgf_series(GOLDEN_R_STAR / 2.0, mtable)
        assert est.value == pytest.approx(GOLDEN_PHI_HALF, abs=1e-8)
        assert est.first_omitted <= 1e-10

    def test_radius_exceeded(self, mtable):
        with pytest.raises(RadiusExceeded):
            mgf_series(1.5 * GOLDEN_R_STAR, mtable)


class TestCgfSeries:
    def test_at_zero(self, mtable):
        assert cgf_series(0.0, mtable) == (0.0, 0.0)

    def test_exp_consistency(self, mtable):
        r = 0.3 * GOLDEN_R_STAR
        assert math.exp(cgf_series(r, mtable).value) == pytest.approx(
            mgf_series(r, mtable).value, abs=1e-9)

    def test_c2_value(self):
        # c_2 = mu_2/(2! 2^2) = (4/3)/8 = 1/6
        assert build_moment_table(1.0, 4).c[1] == pytest.approx(1.0 / 6.0, rel=1e-13)


class TestW1LogMgf:
    def test_zero(self):
        assert w1_log_mgf(1.0, 0.0, 30) == (0.0, 0.0)

    def test_golden_values(self):
        assert w1_log_mgf(1.0, 0.5, 30).value == pytest.approx(GOLDEN_W1_LOGMGF_HALF, abs=1e-14)
        assert w1_log_mgf(1.0, 1.0, 30).value == pytest.approx(GOLDEN_W1_LOGMGF_ONE, abs=1e-14)

    def test_against_direct_fraction_sum(self):
        # independent oracle: exact rational summation
        for alpha in (1, 2):
            for r in (Fraction(1, 2), Fraction(2)):
                exact = sum(r**k / (Fraction(math.factorial(k)) * k ** (1 + alpha))
                            for k in range(1, 21))
                got = w1_log_mgf(float(alpha), float(r), 20).value
                assert got == pytest.approx(float(exact), rel=1e-13)

    def test_tail_bound(self):
        est = w1_log_mgf(1.0, 1.0, 30)
        assert est.first_omitted == pytest.approx(1.0 / math.factorial(31), rel=1e-12)
        # the bound dominates the actual remainder
        longer = w1_log_mgf(1.0, 1.0, 60).value
        assert abs(longer - est.value) < est.first_omitted

    def test_validation(self):
        with pytest.raises(DomainError):
            w1_log_mgf(-1.0, 0.5, 10)
        with pytest.raises(DomainError):
            w1_log_mgf(1.0, 0.5, 0)


def test_csv_export(tmp_path, mtable):
    path = tmp_path / "moments.csv"
    moment_table_to_csv(mtable, path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "k,mu_k,c_k"
    assert len(lines) == 41
    k, mu2, c2 = lines[2].split(",")
    assert k == "2"
    assert float(mu2) == pytest.approx(4.0 / 3.0, rel=1e-15)
    assert float(c2) == pytest.approx(1.0 / 6.0, rel=1e-15)
