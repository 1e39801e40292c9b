"""Tests for the base copula families."""

import numpy as np
import pytest
from scipy import integrate, stats

import tailmix as tm
from tailmix.copulas import CopulaSpec, Family

from conftest import fd_mixed_second, ks_critical_1pct, student_corner_betainc

ALL_SPECS = [
    tm.gumbel(2.0),
    tm.joe(2.5),
    tm.clayton(1.5),
    tm.gaussian(0.6),
    tm.student(4.0, -0.4),
]


class TestCopulaSpec:
    @pytest.mark.parametrize(
        "ctor,value",
        [(tm.gumbel, 0.9), (tm.joe, 0.0), (tm.clayton, 0.0), (tm.clayton, -1.5)],
    )
    def test_bad_theta_rejected(self, ctor, value):
        with pytest.raises(ValueError):
            ctor(value)

    @pytest.mark.parametrize("rho", [-1.0, 1.0, 1.3])
    def test_bad_rho_rejected(self, rho):
        with pytest.raises(ValueError):
            tm.gaussian(rho)
        with pytest.raises(ValueError):
            tm.student(2.0, rho)

    def test_bad_nu_rejected(self):
        with pytest.raises(ValueError):
            tm.student(0.0, 0.5)

    def test_mismatched_parameters_rejected(self):
        with pytest.raises(ValueError):
            CopulaSpec(Family.GUMBEL, theta=2.0, rho=0.5)
        with pytest.raises(ValueError):
            CopulaSpec(Family.GAUSSIAN, theta=2.0)

    def test_valid_ranges_accepted(self):
        tm.gumbel(1.0)
        tm.clayton(-0.5)
        tm.student(0.5, 0.99)


class TestCdf:
    def test_gumbel_independence_is_product(self):
        assert tm.cdf(tm.gumbel(1.0), 0.3, 0.4) == pytest.approx(0.12, abs=1e-14)

    def test_uniform_margin_boundary(self):
        assert tm.cdf(tm.gumbel(2.0), 0.7, 1.0) == pytest.approx(0.7, abs=0.0)

    def test_gumbel_closed_form_value(self):
        # exp(-((-ln u)^2 + (-ln v)^2)^(1/2)) at (0.5, 0.5) is 2^(-sqrt 2)
        assert tm.cdf(tm.gumbel(2.0), 0.5, 0.5) == pytest.approx(
            2.0 ** (-np.sqrt(2.0)), abs=1e-14
        )

    def test_gumbel_value_against_density_quadrature(self):
        spec = tm.gumbel(2.0)
        mass, err = integrate.dblquad(
            lambda v, u: np.exp(tm.log_density(spec, u, v)), 1e-9, 0.5, 1e-9, 0.5
        )
        assert err < 1e-9
        assert mass == pytest.approx(2.0 ** (-np.sqrt(2.0)), abs=1e-7)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family.value)
    def test_boundary_conditions(self, spec):
        rng = np.random.default_rng(1)
        u = rng.uniform(0.01, 0.99, 50)
        assert np.allclose(tm.cdf(spec, u, np.ones_like(u)), u, atol=1e-12)
        assert np.allclose(tm.cdf(spec, np.ones_like(u), u), u, atol=1e-12)
        assert np.all(tm.cdf(spec, u, np.zeros_like(u)) == 0.0)
        assert np.all(tm.cdf(spec, np.zeros_like(u), u) == 0.0)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family.value)
    def test_rectangle_monotonicity(self, spec):
        rng = np.random.default_rng(2)
        for _ in range(40):
            a1, b1 = np.sort(rng.uniform(0.001, 0.999, 2))
            a2, b2 = np.sort(rng.uniform(0.001, 0.999, 2))
            mass = (
                tm.cdf(spec, b1, b2)
                - tm.cdf(spec, a1, b2)
                - tm.cdf(spec, b1, a2)
                + tm.cdf(spec, a1, a2)
            )
            assert mass >= -1e-12

    def test_out_of_range_input_rejected(self):
        with pytest.raises(ValueError):
            tm.cdf(tm.gumbel(2.0), -0.1, 0.5)
        with pytest.raises(ValueError):
            tm.cdf(tm.gumbel(2.0), 0.5, 1.1)


class TestLogDensity:
    def test_independence_density_is_one(self):
        rng = np.random.default_rng(3)
        pts = rng.uniform(0.01, 0.99, (20, 2))
        vals = tm.log_density(tm.gumbel(1.0), pts[:, 0], pts[:, 1])
        assert np.allclose(vals, 0.0, atol=1e-12)
        vals = tm.log_density(tm.joe(1.0), pts[:, 0], pts[:, 1])
        assert np.allclose(vals, 0.0, atol=1e-12)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family.value)
    def test_exchangeability(self, spec):
        rng = np.random.default_rng(4)
        u = rng.uniform(0.01, 0.99, 30)
        v = rng.uniform(0.01, 0.99, 30)
        assert np.allclose(
            tm.log_density(spec, u, v), tm.log_density(spec, v, u), rtol=1e-12
        )

    def test_gumbel_matches_finite_difference(self):
        spec = tm.gumbel(2.0)
        fd = fd_mixed_second(lambda a, b: tm.cdf(spec, a, b), 0.3, 0.7, h=1e-5)
        assert np.exp(tm.log_density(spec, 0.3, 0.7)) == pytest.approx(fd, rel=1e-4)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family.value)
    def test_finite_difference_oracle(self, spec):
        rng = np.random.default_rng(5)
        h = 1e-4 if spec.family is Family.STUDENT else 1e-5
        checked = 0
        while checked < 25:
            u, v = rng.uniform(0.1, 0.9, 2)
            dens = np.exp(tm.log_density(spec, u, v))
            if dens < 0.05:  # below the FD oracle's resolution
                continue
            fd = fd_mixed_second(lambda a, b: tm.cdf(spec, a, b), u, v, h=h)
            assert dens == pytest.approx(fd, rel=1e-4)
            checked += 1

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family.value)
    def test_integrates_to_one(self, spec):
        n = 2000
        mid = (np.arange(n) + 0.5) / n
        total = 0.0
        for row in np.array_split(mid, 10):
            u = np.tile(mid, row.size)
            v = np.repeat(row, n)
            total += np.exp(tm.log_density(spec, u, v)).sum()
        assert total / (n * n) == pytest.approx(1.0, abs=1e-3)

    def test_boundary_input_rejected(self):
        with pytest.raises(ValueError):
            tm.log_density(tm.gumbel(2.0), 0.0, 0.5)
        with pytest.raises(ValueError):
            tm.log_density(tm.gumbel(2.0), 0.5, 1.0)

    def test_finite_at_clamp_band_for_large_theta(self):
        eps = 1e-12
        for spec in (tm.gumbel(50.0), tm.joe(50.0), tm.clayton(50.0)):
            for u, v in [(eps, eps), (1 - eps, 1 - eps), (eps, 1 - eps), (0.5, eps)]:
                assert np.isfinite(tm.log_density(spec, u, v))

    def test_clamp_unit_counts(self):
        clamped, n = tm.clamp_unit(np.array([1e-15, 0.5, 1 - 1e-15]))
        assert n == 2
        assert clamped[0] == 1e-12 and clamped[2] == 1 - 1e-12

    def test_clayton_negative_theta_density_outside_support(self):
        # support of Clayton with theta < 0 excludes a corner region
        assert tm.log_density(tm.clayton(-0.5), 0.01, 0.01) == -np.inf
        assert np.isfinite(tm.log_density(tm.clayton(-0.5), 0.9, 0.9))


class TestTailMatrix:
    @pytest.mark.parametrize("theta", [1.0, 1.5, 2.0, 3.0, 10.0])
    def test_gumbel_joe_upper_corner(self, theta):
        expected = 2.0 - 2.0 ** (1.0 / theta)
        for ctor in (tm.gumbel, tm.joe):
            matrix = tm.tail_matrix(ctor(theta))
            assert matrix.lambda_UU == pytest.approx(expected, abs=1e-14)
            assert matrix.lambda_LL == matrix.lambda_UL == matrix.lambda_LU == 0.0

    def test_clayton_lower_corner(self):
        matrix = tm.tail_matrix(tm.clayton(1.0))
        assert matrix.lambda_LL == pytest.approx(0.5, abs=1e-14)
        assert matrix.lambda_UU == matrix.lambda_UL == matrix.lambda_LU == 0.0

    def test_clayton_negative_theta_no_tails(self):
        assert tm.tail_matrix(tm.clayton(-0.5)).total() == 0.0

    def test_gaussian_asymptotically_independent(self):
        assert tm.tail_matrix(tm.gaussian(0.9)).total() == 0.0

    def test_student_nu1_rho0_closed_form(self):
        # T_2(x) = 1/2 + x / (2 sqrt(2 + x^2)) gives 2*T_2(-sqrt 2) = 2 - sqrt 2 over 2
        x = -np.sqrt(2.0)
        expected = 2.0 * (0.5 + x / (2.0 * np.sqrt(2.0 + x * x)))
        matrix = tm.tail_matrix(tm.student(1.0, 0.0))
        for corner in tm.Corner:
            assert matrix.entry(corner) == pytest.approx(expected, abs=1e-12)

    def test_student_betainc_oracle(self):
        for nu in (1.0, 2.5, 4.0, 7.0):
            for rho in (-0.5, 0.0, 0.5):
                matrix = tm.tail_matrix(tm.student(nu, rho))
                assert matrix.lambda_UU == pytest.approx(
                    student_corner_betainc(nu, rho), abs=1e-10
                )
                assert matrix.lambda_UL == pytest.approx(
                    student_corner_betainc(nu, -rho), abs=1e-10
                )
                assert matrix.lambda_UU == matrix.lambda_LL
                assert matrix.lambda_UL == matrix.lambda_LU

    def test_matrix_arrangement(self):
        matrix = tm.TailMatrix(lambda_LU=0.1, lambda_UU=0.2, lambda_LL=0.3, lambda_UL=0.4)
        assert matrix.as_array().tolist() == [[0.1, 0.2], [0.3, 0.4]]

    def test_matrix_range_validated(self):
        with pytest.raises(ValueError):
            tm.TailMatrix(1.2, 0.0, 0.0, 0.0)


def quotients_via_cdf(spec, u):
    """The four pre-limit conditional-exceedance quotients at level u."""
    eps = 1.0 - u
    c = lambda a, b: tm.cdf(spec, a, b)
    return {
        "UU": (1.0 - 2.0 * u + c(u, u)) / eps,
        "LL": c(eps, eps) / eps,
        "LU": (eps - c(eps, u)) / eps,
        "UL": (eps - c(u, eps)) / eps,
    }


class TestPreLimitConvergence:
    @pytest.mark.parametrize(
        "spec", [tm.gumbel(2.0), tm.joe(2.0), tm.clayton(2.0)], ids=lambda s: s.family.value
    )
    def test_quotients_approach_table_limits_monotonically(self, spec):
        limits = {c.value: tm.tail_matrix(spec).entry(c) for c in tm.Corner}
        gaps = {k: [] for k in limits}
        for u in (0.99, 0.999, 0.9999):
            quots = quotients_via_cdf(spec, u)
            for key, value in quots.items():
                gaps[key].append(abs(value - limits[key]))
        for key, gap_seq in gaps.items():
            assert gap_seq[1] <= gap_seq[0] + 1e-12, (key, gap_seq)
            assert gap_seq[2] <= gap_seq[1] + 1e-12, (key, gap_seq)


class TestSample:
    def test_empty(self):
        assert tm.sample(tm.gumbel(2.0), 0, 1).shape == (0, 2)

    def test_negative_n_rejected(self):
        with pytest.raises(ValueError):
            tm.sample(tm.gumbel(2.0), -1, 1)

    def test_deterministic_per_seed(self):
        a = tm.sample(tm.student(3.0, 0.5), 100, 9)
        b = tm.sample(tm.student(3.0, 0.5), 100, 9)
        c = tm.sample(tm.student(3.0, 0.5), 100, 10)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.family.value)
    def test_margins_uniform(self, spec):
        pairs = tm.sample(spec, 100_000, 12)
        crit = ks_critical_1pct(pairs.shape[0])
        for col in (0, 1):
            stat = stats.kstest(pairs[:, col], "uniform").statistic
            assert stat < crit

    def test_gumbel_monte_carlo_upper_tail(self):
        pairs = tm.sample(tm.gumbel(2.0), 1_000_000, 13)
        q = 0.999
        lam = np.mean((pairs[:, 0] > q) & (pairs[:, 1] > q)) / (1.0 - q)
        assert abs(lam - (2.0 - np.sqrt(2.0))) < 0.05

    @pytest.mark.parametrize(
        "spec,corner",
        [
            (tm.joe(2.0), "UU"),
            (tm.clayton(2.0), "LL"),
            (tm.student(2.0, 0.5), "UU"),
        ],
        ids=["joe", "clayton", "student"],
    )
    def test_monte_carlo_tail_other_families(self, spec, corner):
        pairs = tm.sample(spec, 400_000, 14)
        q = 0.999
        if corner == "UU":
            lam = np.mean((pairs[:, 0] > q) & (pairs[:, 1] > q)) / (1.0 - q)
            expected = tm.tail_matrix(spec).lambda_UU
        else:
            lam = np.mean((pairs[:, 0] < 1 - q) & (pairs[:, 1] < 1 - q)) / (1.0 - q)
            expected = tm.tail_matrix(spec).lambda_LL
        assert abs(lam - expected) < 0.05

    def test_clayton_negative_theta_sampler_matches_cdf(self):
        spec = tm.clayton(-0.4)
        pairs = tm.sample(spec, 200_000, 15)
        for (a, b) in [(0.3, 0.7), (0.5, 0.5), (0.8, 0.2)]:
            empirical = np.mean((pairs[:, 0] <= a) & (pairs[:, 1] <= b))
            assert empirical == pytest.approx(tm.cdf(spec, a, b), abs=0.005)

    def test_clayton_minus_one_rejected(self):
        with pytest.raises(ValueError):
            tm.sample(tm.clayton(-1.0), 10, 0)

    def test_gaussian_sampler_matches_cdf(self):
        spec = tm.gaussian(-0.6)
        pairs = tm.sample(spec, 200_000, 16)
        empirical = np.mean((pairs[:, 0] <= 0.4) & (pairs[:, 1] <= 0.6))
        assert empirical == pytest.approx(tm.cdf(spec, 0.4, 0.6), abs=0.005)
