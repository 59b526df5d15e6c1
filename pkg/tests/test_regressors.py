import random
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

from fairmet.features import DesignMatrix
from fairmet.regressors import (BASELINE_DEBIAS, BASELINE_LINEAR_INTERP,
                                GBDT, OLS, RANDOM_FOREST, ForestParams,
                                GbdtParams, OlsParams, SchemaMismatch,
                                TooFewRows, fit, model_signature, predict)

T0 = datetime(2021, 1, 1, tzinfo=timezone.utc)


def make_matrix(X, y, names=None):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    names = tuple(names or (f"c{i}" for i in range(X.shape[1])))
    return DesignMatrix(
        indices=tuple(range(len(y))),
        timestamps=tuple(T0 + timedelta(hours=i) for i in range(len(y))),
        X=X, target=y, column_names=names, dropped=())


class TestOls:
    def test_recovers_line(self):
        x = np.arange(10.0)
        m = make_matrix(x[:, None], 2.0 * x + 1.0)
        model = fit(OLS, m, seed=1)
        w = model.payload.weights
        assert w[0] == pytest.approx(2.0, abs=1e-9)
        assert w[1] == pytest.approx(1.0, abs=1e-9)

    def test_matches_closed_form_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            n, p = 40, rng.integers(1, 10)
            X = rng.normal(size=(n, p))
            y = rng.normal(size=n)
            model = fit(OLS, make_matrix(X, y), params=OlsParams(ridge=1e-8))
            A = np.hstack([X, np.ones((n, 1))])
            beta = np.linalg.solve(A.T @ A + 1e-8 * np.eye(p + 1), A.T @ y)
            np.testing.assert_allclose(model.payload.weights, beta, atol=1e-8)

    def test_prediction_is_dot_product(self):
        m = make_matrix(np.array([[0.0], [1.0], [2.0], [3.0]]),
                        np.array([1.0, 3.0, 5.0, 7.0]))
        model = fit(OLS, m)
        q = make_matrix(np.array([[3.0]]), np.array([0.0]))
        assert predict(model, q)[0] == pytest.approx(7.0, abs=1e-6)

    def test_too_few_rows(self):
        m = make_matrix(np.ones((3, 2)), np.ones(3))
        with pytest.raises(TooFewRows):
            fit(OLS, m)


class TestRandomForest:
    def test_single_tree_memorizes(self):
        rng = np.random.default_rng(11)
        X = rng.normal(size=(30, 3))
        y = rng.normal(size=30)
        params = ForestParams(trees=1, max_depth=None, min_leaf=1,
                              mtry=3, bootstrap=False)
        model = fit(RANDOM_FOREST, make_matrix(X, y), params=params, seed=3)
        got = predict(model, make_matrix(X, y))
        np.testing.assert_allclose(got, y, atol=1e-12)

    def test_prediction_is_mean_of_trees(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(60, 2))
        y = X[:, 0] * 2.0 + rng.normal(size=60) * 0.1
        m = make_matrix(X, y)
        model = fit(RANDOM_FOREST, m, params=ForestParams(trees=7), seed=9)
        per_tree = model.payload.tree_predictions(X)
        assert per_tree.shape == (7, 60)
        np.testing.assert_allclose(predict(model, m), per_tree.mean(axis=0),
                                   atol=1e-12)

    def test_constant_target(self):
        X = np.random.default_rng(1).normal(size=(25, 2))
        y = np.full(25, 3.25)
        m = make_matrix(X, y)
        for kind, params in ((OLS, None),
                             (RANDOM_FOREST, ForestParams(trees=5)),
                             (GBDT, GbdtParams(rounds=5))):
            model = fit(kind, m, params=params, seed=4)
            np.testing.assert_allclose(predict(model, m), y, atol=1e-6)

    def test_too_few_rows(self):
        m = make_matrix(np.ones((10, 1)), np.ones(10))
        with pytest.raises(TooFewRows):
            fit(RANDOM_FOREST, m)

    def test_determinism_and_seed_sensitivity(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(80, 3))
        y = X @ np.array([1.0, -2.0, 0.5]) + rng.normal(size=80) * 0.3
        m = make_matrix(X, y)
        a = fit(RANDOM_FOREST, m, params=ForestParams(trees=10), seed=77)
        b = fit(RANDOM_FOREST, m, params=ForestParams(trees=10), seed=77)
        assert model_signature(a) == model_signature(b)
        np.testing.assert_array_equal(predict(a, m), predict(b, m))
        c = fit(RANDOM_FOREST, m, params=ForestParams(trees=10), seed=78)
        assert model_signature(a) != model_signature(c)


class TestGbdt:
    def test_training_loss_monotone(self):
        rng = np.random.default_rng(3)
        for trial in range(20):
            n = int(rng.integers(25, 120))
            p = int(rng.integers(1, 5))
            X = rng.normal(size=(n, p))
            y = rng.normal(size=n) + np.sin(X[:, 0] * 2.0)
            model = fit(GBDT, make_matrix(X, y),
                        params=GbdtParams(rounds=25), seed=trial)
            losses = np.array(model.payload.training_rmse)
            assert np.all(np.diff(losses) <= 1e-12), f"trial {trial}"

    def test_fits_smooth_function(self):
        x = np.linspace(0, 6, 300)
        y = np.sin(x) * 3.0
        m = make_matrix(x[:, None], y)
        model = fit(GBDT, m, params=GbdtParams(rounds=80), seed=5)
        rmse = np.sqrt(np.mean((predict(model, m) - y) ** 2))
        assert rmse < 0.1

    def test_determinism(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(50, 2))
        y = rng.normal(size=50)
        m = make_matrix(X, y)
        a = fit(GBDT, m, params=GbdtParams(rounds=15), seed=6)
        b = fit(GBDT, m, params=GbdtParams(rounds=15), seed=6)
        assert model_signature(a) == model_signature(b)
        np.testing.assert_array_equal(predict(a, m), predict(b, m))


class TestModelPlumbing:
    def test_schema_mismatch(self):
        m = make_matrix(np.ones((8, 1)), np.arange(8.0), names=("a",))
        model = fit(OLS, m)
        other = make_matrix(np.ones((3, 1)), np.zeros(3), names=("b",))
        with pytest.raises(SchemaMismatch):
            predict(model, other)

    def test_baseline_kinds(self):
        model = fit(BASELINE_LINEAR_INTERP, None)
        assert model.kind == BASELINE_LINEAR_INTERP
        assert model.payload is None
        with pytest.raises(ValueError):
            predict(model, make_matrix(np.ones((2, 1)), np.zeros(2)))
        with pytest.raises(ValueError):
            fit(BASELINE_DEBIAS, None)

    def test_provenance_recorded(self):
        m = make_matrix(np.arange(12.0)[:, None], np.arange(12.0))
        model = fit(OLS, m, seed=2)
        assert model.provenance.n_rows == 12
        assert model.provenance.train_first == T0
        assert model.provenance.train_last == T0 + timedelta(hours=11)
