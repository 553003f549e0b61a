import math

import numpy as np
import pytest
from scipy import stats

from rainbowgiant.distributions import (
    DomainError,
    InvalidMu,
    RngStream,
    borel_pmf,
    borel_tail,
    borel_tail_bound,
    sample_borel,
    sample_geometric,
    sample_pgw_forest,
    sample_pgw_tree,
    sample_poisson,
    solve_mu,
)
from rainbowgiant.verify import MU_GRID, borel_gof

# mpmath, 40 digits: bisection on mu*exp(-mu) = 1.1*exp(-1.1), and
# -W0(-1.1 e^-1.1) via lambertw; both agree to every printed digit
MU_EPS_0_1 = 0.90625244200500948874
# mpmath: 1 - sum_{k<=100} exp(-0.9k)(0.9k)^(k-1)/k!
TAIL_0_9_AT_100 = 0.017160576137673613614
TAIL_0_9_AT_1 = 0.59343034025940088812


def _pmf_oracle(mu, k):
    return math.exp(-mu * k + (k - 1) * math.log(mu * k) - math.lgamma(k + 1))


class TestSolveMu:
    def test_eps_0_1_digits(self):
        sol = solve_mu(0.1)
        assert sol.mu == pytest.approx(MU_EPS_0_1, abs=1e-14)
        assert sol.residual < 1e-12

    @pytest.mark.parametrize("eps", [0.01, 0.02, 0.05])
    def test_first_order_expansion(self, eps):
        assert abs(solve_mu(eps).mu - (1 - eps)) <= 2 * eps**2

    def test_small_eps_tends_to_one(self):
        mus = [solve_mu(e).mu for e in (1e-2, 1e-3, 1e-4)]
        assert mus[0] < mus[1] < mus[2] < 1
        assert 1 - mus[2] < 2e-4

    def test_monotone_in_eps(self):
        grid = np.round(np.arange(0.01, 0.501, 0.01), 2)
        mus = [solve_mu(e).mu for e in grid]
        assert all(a > b for a, b in zip(mus, mus[1:]))

    @pytest.mark.parametrize("eps", [0.01, 0.05, 0.1, 0.2, 0.5, 0.9])
    def test_residual(self, eps):
        sol = solve_mu(eps)
        assert 0 < sol.mu < 1
        assert sol.residual < 1e-12

    @pytest.mark.parametrize("eps", [0.0, 1.0, -0.1, 2.0])
    def test_domain(self, eps):
        with pytest.raises(DomainError):
            solve_mu(eps)


class TestBorel:
    def test_pmf_at_one(self):
        for mu in MU_GRID:
            assert borel_pmf(mu, 1) == pytest.approx(math.exp(-mu), rel=1e-14)

    def test_pmf_mu_half_k_two(self):
        assert borel_pmf(0.5, 2) == pytest.approx(math.exp(-1) / 2, rel=1e-14)
        assert borel_pmf(0.5, 2) == pytest.approx(0.1839397205857211608, rel=1e-14)

    def test_pmf_matches_direct_formula(self):
        for mu in (0.3, 0.9):
            for k in (1, 2, 5, 17, 80):
                direct = math.exp(-mu * k) * (mu * k) ** (k - 1) / math.factorial(k)
                assert borel_pmf(mu, k) == pytest.approx(direct, rel=1e-11)

    def test_pmf_sums_to_one(self):
        total = math.fsum(borel_pmf(0.9, np.arange(1, 10**6 + 1)))
        assert abs(total - 1) < 1e-6

    def test_pmf_large_k_no_overflow(self):
        p = borel_pmf(0.99, 10**6)
        assert np.isfinite(p) and p > 0

    def test_domain(self):
        with pytest.raises(DomainError):
            borel_pmf(0.5, 0)
        with pytest.raises(DomainError):
            borel_pmf(1.0, 3)
        with pytest.raises(DomainError):
            borel_tail(0.5, 0)

    def test_tail_values(self):
        assert borel_tail(0.9, 100) == pytest.approx(TAIL_0_9_AT_100, rel=1e-9)
        assert borel_tail(0.9, 1) == pytest.approx(TAIL_0_9_AT_1, rel=1e-12)
        assert borel_tail(0.9, 100) < 1 / (10 * 0.9)

    def test_tail_agrees_with_one_minus_cdf(self):
        j = np.arange(1, 200)
        cdf = np.cumsum([_pmf_oracle(0.8, k) for k in range(1, 200)])
        assert np.allclose(borel_tail(0.8, j), 1 - cdf, atol=1e-12)

    def test_tail_bound_vacuous_region(self):
        # j small enough that 1/(sqrt(j) mu) >= 1
        assert borel_tail_bound(0.9, 1) > 1 > borel_tail(0.9, 1)

    @pytest.mark.parametrize("mu", MU_GRID)
    def test_tail_bound_exhaustive(self, mu):
        j = np.arange(1, 10**4 + 1)
        assert np.all(borel_tail(mu, j) < borel_tail_bound(mu, j))


class TestSamplers:
    def test_poisson_zero(self):
        assert np.all(sample_poisson(0.0, RngStream(1), size=1000) == 0)

    def test_geometric_one(self):
        assert np.all(sample_geometric(1.0, RngStream(1), size=1000) == 1)

    def test_moments(self):
        rng = RngStream(5)
        lam, p, N = 2.5, 0.3, 10**6
        x = sample_poisson(lam, rng, size=N)
        assert abs(x.mean() - lam) < 3 * math.sqrt(lam / N)
        y = sample_geometric(p, rng, size=N)
        assert y.min() == 1
        assert abs(y.mean() - 1 / p) < 3 * math.sqrt((1 - p) / p**2 / N)

    def test_domain(self):
        with pytest.raises(DomainError):
            sample_poisson(-1, RngStream(0))
        with pytest.raises(DomainError):
            sample_geometric(0.0, RngStream(0))
        with pytest.raises(DomainError):
            sample_geometric(1.5, RngStream(0))


class TestPgw:
    def test_mu_zero_single_root(self):
        t = sample_pgw_tree(0.0, RngStream(0))
        assert t.size == 1 and t.parent[0] == -1

    def test_tree_structure(self):
        t = sample_pgw_tree(0.95, RngStream(2, 3))
        assert t.parent[0] == -1
        assert np.all(t.parent[1:] < np.arange(1, t.size))
        assert np.all(t.level[1:] == t.level[t.parent[1:]] + 1)

    def test_determinism(self):
        a = sample_pgw_tree(0.9, RngStream(42, 7))
        b = sample_pgw_tree(0.9, RngStream(42, 7))
        assert np.array_equal(a.parent, b.parent)
        assert np.array_equal(a.level, b.level)
        x = RngStream(42, 7).gen.random(8)
        y = RngStream(42, 8).gen.random(8)
        assert not np.array_equal(x, y)

    def test_forest_labels(self):
        f = sample_pgw_forest(0.7, 50, RngStream(1))
        assert np.array_equal(f.tree[:50], np.arange(50))
        assert np.all(f.tree[50:] == f.tree[f.parent[50:]])
        assert f.sizes().sum() == f.parent.size

    def test_guard(self):
        with pytest.raises(InvalidMu):
            sample_pgw_forest(3.0, 100, RngStream(0), max_vertices=10**5)

    def test_mean_size(self):
        mu, N = 0.8, 10**5
        sizes = sample_borel(mu, N, RngStream(9))
        k = np.arange(1, 20001)
        p = np.array([_pmf_oracle(mu, int(x)) for x in k])
        mean = (k * p).sum()
        sd = math.sqrt((k * k * p).sum() - mean**2)
        assert mean == pytest.approx(1 / (1 - mu), rel=1e-6)
        assert abs(sizes.mean() - mean) < 3 * sd / math.sqrt(N)

    def test_size_distribution_gof(self):
        sizes = sample_borel(0.9, 10**5, RngStream(7))
        _, p, dof = borel_gof(sizes, 0.9)
        assert dof > 20
        assert p > 1e-3

    def test_gof_detects_wrong_mu(self):
        sizes = sample_borel(0.85, 10**5, RngStream(7))
        _, p, _ = borel_gof(sizes, 0.9)
        assert p < 1e-6

    def test_single_tree_sizes_follow_borel(self):
        # the one-tree sampler, not the vectorised forest
        rng = RngStream(13)
        sizes = np.array([sample_pgw_tree(0.5, rng).size for _ in range(5000)])
        _, p, _ = borel_gof(sizes, 0.5)
        assert p > 1e-3
        assert stats.ks_2samp(sizes, sample_borel(0.5, 5000, RngStream(14))).pvalue > 1e-3
