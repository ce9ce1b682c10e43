import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from kgeodetic.errors import Multicollinear
from kgeodetic.regression import (
    Dataset,
    default_ridge_alpha,
    multicollinearity_check,
    ols_fit,
    reduced_fit,
    ridge_fit,
    select_representatives,
    significance_scores,
)
from kgeodetic.synthetic import correlated_groups, pair_with_correlation

import oracles


def random_design(seed, n_obs=50, n_vars=3):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n_obs, n_vars)), rng


class TestOLS:
    def test_exact_line(self):
        m = ols_fit(Dataset([[1], [2], [3]], [2, 4, 6]))
        assert m.coefficients == pytest.approx([2.0], abs=1e-14)
        assert m.residual_variance == pytest.approx(0.0, abs=1e-28)
        assert m.method == "ols" and m.alpha == 0

    def test_duplicated_column(self):
        x = np.random.default_rng(0).standard_normal(10)
        with pytest.raises(Multicollinear) as exc:
            ols_fit(Dataset(np.column_stack([x, x]), x))
        assert exc.value.rank == 1

    def test_recovers_coefficients_like_normal_equations(self):
        X, rng = random_design(1)
        a = rng.standard_normal(3)
        m = ols_fit(Dataset(X, X @ a))
        oracle = oracles.normal_equation_solution(X, X @ a)
        np.testing.assert_allclose(m.coefficients, a, rtol=0, atol=1e-8)
        np.testing.assert_allclose(m.coefficients, oracle, rtol=0, atol=1e-8)

    def test_residuals_orthogonal_to_columns(self):
        X, rng = random_design(2, n_vars=4)
        y = rng.standard_normal(50)
        m = ols_fit(Dataset(X, y))
        resid = y - X @ m.coefficients
        assert np.abs(X.T @ resid).max() < 1e-8 * np.abs(X).max() * np.abs(y).max() * 50

    def test_residual_variance_denominator(self):
        X, rng = random_design(3, n_obs=20, n_vars=2)
        y = rng.standard_normal(20)
        m = ols_fit(Dataset(X, y))
        assert m.residual_variance == pytest.approx(m.rss / 18)

    def test_square_system_flags_degenerate_dof(self):
        m = ols_fit(Dataset([[1.0, 0.0], [0.0, 1.0]], [1.0, 2.0]))
        assert "degenerate-dof" in m.flags

    def test_json(self):
        m = ols_fit(Dataset([[1.0], [2.0], [3.0]], [1.0, 2.0, 3.0], ("u",)))
        obj = m.to_json()
        assert obj["method"] == "ols" and set(obj["coefficients"]) == {"u"}


class TestRidge:
    def test_scalar(self):
        m = ridge_fit(Dataset([[1.0], [0.0]], [1.0, 0.0]), 1.0)
        # the zero row leaves X^T X = [[1]] and X^T y = [1]
        assert m.coefficients == pytest.approx([0.5])
        assert "biased" in m.flags

    def test_duplicated_columns_are_finite(self):
        x = np.random.default_rng(0).standard_normal(10)
        m = ridge_fit(Dataset(np.column_stack([x, x]), x), 0.5)
        assert np.all(np.isfinite(m.coefficients))

    def test_small_alpha_approaches_ols(self):
        X, rng = random_design(4)
        y = rng.standard_normal(50)
        ds = Dataset(X, y)
        np.testing.assert_allclose(ridge_fit(ds, 1e-10).coefficients, ols_fit(ds).coefficients, atol=1e-6)

    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError):
            ridge_fit(Dataset([[1.0], [2.0]], [1.0, 2.0]), 0.0)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6), st.floats(1e-3, 100), st.floats(1e-3, 100))
    def test_shrinkage(self, seed, a1, a2):
        X, rng = random_design(seed, n_obs=30, n_vars=4)
        ds = Dataset(X, rng.standard_normal(30))
        lo, hi = sorted([a1, a2])
        assert np.linalg.norm(ridge_fit(ds, hi).coefficients) <= np.linalg.norm(ridge_fit(ds, lo).coefficients) + 1e-12

    def test_default_alpha_scales_with_data(self):
        X = np.ones((4, 2))
        assert default_ridge_alpha(X) == pytest.approx(1e-6 * 8 / 2)


class TestMulticollinearity:
    def test_sum_dependency(self):
        X, _ = random_design(5, n_obs=30, n_vars=2)
        X = np.column_stack([X, X[:, 0] + X[:, 1]])
        rep = multicollinearity_check(Dataset(X, np.zeros(30)))
        assert rep.multicollinear and rep.rank == 2
        assert rep.witnesses == {"x3": ("x1", "x2")}

    def test_full_rank(self):
        X, _ = random_design(6, n_obs=30, n_vars=4)
        rep = multicollinearity_check(Dataset(X, np.zeros(30)))
        assert not rep.multicollinear and rep.witnesses == {}
        assert rep.rank == oracles.gaussian_rank(X) == 4

    def test_identical_columns(self):
        x = np.random.default_rng(7).standard_normal(12)
        z = np.random.default_rng(8).standard_normal(12)
        rep = multicollinearity_check(Dataset(np.column_stack([x, z, x]), z))
        assert rep.multicollinear and rep.witnesses == {"x3": ("x1",)}

    def test_greedy_witness_above_limit(self):
        X, _ = random_design(9, n_obs=40, n_vars=3)
        X = np.column_stack([X, X[:, 0] - 2 * X[:, 2]])
        rep = multicollinearity_check(Dataset(X, np.zeros(40)), exact_limit=2)
        assert not rep.exact_search
        assert rep.witnesses == {"x4": ("x1", "x3")}


class TestSignificance:
    def test_informative_variable_ranks_first(self):
        rng = np.random.default_rng(10)
        N = 200
        x1, x2 = rng.standard_normal(N), rng.standard_normal(N)
        y = 2 * x1 + 0.01 * rng.standard_normal(N)
        ds = Dataset(np.column_stack([x1, x2]), y)
        rep = significance_scores(ds)
        X = np.column_stack([x1, x2])
        rss = lambda cols: np.sum((y - X[:, cols] @ oracles.normal_equation_solution(X[:, cols], y)) ** 2)
        full = rss([0, 1])
        assert rep.scores["x1"] == pytest.approx((rss([1]) - full) / N, rel=1e-9)
        assert rep.scores["x2"] == pytest.approx((rss([0]) - full) / N, rel=1e-6, abs=1e-15)
        assert rep.ranking == ("x1", "x2") and rep.most_significant == "x1"
        assert rep.scores["x1"] > 1e4 * rep.scores["x2"] > 0

    def test_noise_only(self):
        rng = np.random.default_rng(11)
        N, sigma = 200, 1.0
        ds = Dataset(rng.standard_normal((N, 3)), sigma * rng.standard_normal(N))
        rep = significance_scores(ds)
        assert all(abs(s) < 10 * sigma**2 / N for s in rep.scores.values())

    def test_single_column_compares_with_empty_model(self):
        rng = np.random.default_rng(12)
        x = rng.standard_normal(30)
        y = 0.5 * x + rng.standard_normal(30)
        ds = Dataset(x[:, None], y)
        full = ols_fit(ds)
        rep = significance_scores(ds)
        assert rep.scores["x1"] == pytest.approx((np.sum(y**2) - full.rss) / 30)

    def test_ridge_fallback_is_flagged(self):
        x = np.random.default_rng(13).standard_normal(20)
        z = np.random.default_rng(14).standard_normal(20)
        ds = Dataset(np.column_stack([x, x, z]), x + z)
        rep = significance_scores(ds)
        assert "<full model>" in rep.fallbacks and "x3" in rep.fallbacks
        assert "x1" not in rep.fallbacks

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6))
    def test_scores_nonnegative(self, seed):
        X, rng = random_design(seed, n_obs=25, n_vars=4)
        y = rng.standard_normal(25)
        rep = significance_scores(Dataset(X, y))
        scale = np.sum(y**2) / 25
        assert all(s >= -1e-9 * scale for s in rep.scores.values())
        assert sorted(rep.ranking) == sorted(rep.scores)


class TestRepresentatives:
    def test_two_groups(self):
        ds = correlated_groups(seed=0)
        reps = select_representatives(ds, 0.9)
        assert reps.groups == ((0, 1, 2), (3, 4, 5))
        assert all(r in g for r, g in zip(reps.representatives, reps.groups))
        assert reps.cross_correlation < 0.9

    def test_no_correlated_pairs(self):
        X, rng = random_design(15, n_obs=200, n_vars=4)
        ds = Dataset(X, rng.standard_normal(200))
        reps = select_representatives(ds, 0.9)
        assert reps.groups == ((0,), (1,), (2,), (3,)) and reps.representatives == (0, 1, 2, 3)
        assert reduced_fit(ds, reps).coefficients == pytest.approx(ols_fit(ds).coefficients, abs=1e-14)

    def test_identical_columns_pick_lowest(self):
        x = np.random.default_rng(16).standard_normal(20)
        reps = select_representatives(Dataset(np.column_stack([x, x, x]), x), 0.5)
        assert reps.groups == ((0, 1, 2),) and reps.representatives == (0,)

    def test_low_delta_on_correlated_block_gives_one_representative(self):
        ds = correlated_groups(seed=3, group_sizes=(4,), noise=0.3)
        reps = select_representatives(ds, 0.05)
        assert reps.graph.m == 6 and len(reps.representatives) == 1

    def test_reduced_fit_removes_duplicate_collinearity(self):
        ds = correlated_groups(seed=1)
        with pytest.raises(Multicollinear):
            ols_fit(ds)
        model = reduced_fit(ds, select_representatives(ds, 0.9))
        assert model.condition_number < 1e6

    def test_near_threshold_cross_correlation_is_reported(self):
        X = pair_with_correlation(0.89, seed=2)
        ds = Dataset(X, X @ [1.0, -1.0])
        reps = select_representatives(ds, 0.9)
        assert len(reps.representatives) == 2
        assert reps.cross_correlation == pytest.approx(0.89, abs=1e-12)
        assert reduced_fit(ds, reps).coefficients == pytest.approx([1.0, -1.0], abs=1e-10)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**6), st.permutations(range(6)))
    def test_column_permutation_equivariance(self, seed, perm):
        ds = correlated_groups(seed=seed, noise=0.05)
        perm = list(perm)
        pds = ds.subset(perm)
        a, b = select_representatives(ds, 0.9), select_representatives(pds, 0.9)
        group_labels = lambda r: sorted(sorted(r.labels[i] for i in g) for g in r.groups)
        assert group_labels(a) == group_labels(b)
        assert sorted(a.representative_labels()) == sorted(b.representative_labels())
        sa, sb = significance_scores(ds), significance_scores(pds)
        for k in ds.labels:
            assert sa.scores[k] == pytest.approx(sb.scores[k], rel=1e-6, abs=1e-12)
        rd, rp = reduced_fit(ds, a), reduced_fit(pds, b)
        ca = dict(zip(rd.labels, rd.coefficients))
        cb = dict(zip(rp.labels, rp.coefficients))
        assert ca.keys() == cb.keys() and all(ca[k] == pytest.approx(cb[k], rel=1e-9) for k in ca)
