import numpy as np
import pytest
import scipy.sparse as sp

from rstsent.logreg import (
    fit_logreg,
    holdout_split,
    logreg_gradient,
    logreg_objective,
    train_logreg,
)

from .oracles import central_differences, logistic_oracle, relative_error


def random_corpus(rng, n=200, d=40, density=0.15):
    X = sp.random(n, d, density=density, random_state=np.random.RandomState(int(rng.integers(1e9))),
                  data_rvs=lambda k: rng.integers(1, 4, size=k).astype(float), format="csr")
    w = rng.normal(size=d)
    y = np.where(X @ w + 0.3 * rng.normal(size=n) >= 0, 1.0, -1.0)
    return X, y


def toy_separable():
    X = np.array([[1.0, 0.5], [2.0, 1.0], [-1.0, -0.5], [-2.0, -1.0], [1.5, 0.2], [-1.5, -0.2]])
    y = np.array([1, 1, -1, -1, 1, -1])
    return X, y


def test_gradient_closed_form_single_doc():
    x = np.array([[2.0, 0.0, 3.0]])
    for y in (1.0, -1.0):
        g_theta, g_bias = logreg_gradient(np.zeros(3), 0.0, x, np.array([y]), reg=0.7)
        np.testing.assert_allclose(g_theta, -y * x[0] / 2, rtol=0, atol=1e-15)
        assert g_bias == pytest.approx(-y / 2)


def test_gradient_bias_zero_by_symmetry():
    X = np.array([[1.0, 2.0], [-1.0, -2.0]])
    _, g_bias = logreg_gradient(np.zeros(2), 0.0, X, np.array([1.0, -1.0]), reg=1.0)
    assert g_bias == 0.0


def test_gradient_finite_differences(rng):
    X, y = random_corpus(rng, n=60, d=25)
    theta = rng.normal(size=25) * 0.3
    bias = 0.2
    reg = 0.5
    g_theta, g_bias = logreg_gradient(theta, bias, X, y, reg)
    analytic = np.concatenate([g_theta, [g_bias]])
    coords = rng.choice(26, size=20, replace=False)

    def f(w):
        return logreg_objective(w[:-1], w[-1], X, y, reg)

    w0 = np.concatenate([theta, [bias]])
    numeric = central_differences(f, w0, 1e-5)
    assert np.max(relative_error(analytic[coords], numeric[coords])) <= 1e-5


def test_separable_small_reg():
    X, y = toy_separable()
    model = fit_logreg(X, y, reg=1e-3)
    assert np.all(model.predict(X) == y)


def test_objective_history_non_increasing(rng):
    X, y = random_corpus(rng)
    model = fit_logreg(X, y, reg=0.1)
    hist = np.array(model.history)
    assert np.all(np.diff(hist) <= 1e-12)
    assert model.objective <= logreg_objective(np.zeros(X.shape[1]), 0.0, X, y, 0.1)


def test_matches_converged_oracle(rng):
    X, y = random_corpus(rng, n=200)
    model = fit_logreg(X, y, reg=1.0)
    f_star, _ = logistic_oracle(X, y, 1.0)
    assert abs(model.objective - f_star) <= 1e-4


def test_norm_shrinks_with_reg():
    X, y = toy_separable()
    norms = [np.linalg.norm(fit_logreg(X, y, reg).theta) for reg in (0.001, 0.01, 0.1, 1.0, 10.0)]
    assert all(a >= b for a, b in zip(norms, norms[1:]))


def test_sign_invariance_under_scaling(rng):
    X, y = random_corpus(rng, n=80)
    model = fit_logreg(X, y, reg=0.1)
    base = model.predict(X)
    for c in (0.01, 3.0, 100.0):
        scaled = np.where(X @ (c * model.theta) + c * model.bias >= 0, 1, -1)
        assert np.array_equal(scaled, base)


def test_train_selects_and_refits(rng):
    X, y = random_corpus(rng, n=150)
    model = train_logreg(X, y, reg_grid=(0.01, 0.1, 1.0), heldout_fraction=0.2, seed=3)
    assert model.reg in (0.01, 0.1, 1.0)
    assert 0.0 <= model.heldout_accuracy <= 1.0
    again = train_logreg(X, y, reg_grid=(0.01, 0.1, 1.0), heldout_fraction=0.2, seed=3)
    np.testing.assert_array_equal(model.theta, again.theta)


def test_train_tie_prefers_larger_reg():
    X, y = toy_separable()
    # every value separates the held-out pair, so all tie at accuracy 1
    model = train_logreg(X, y, reg_grid=(1e-3, 1e-2), heldout_fraction=0.34, seed=0)
    assert model.reg == 1e-2


def test_train_errors():
    X, y = toy_separable()
    with pytest.raises(ValueError):
        train_logreg(X, np.ones(len(y)))
    with pytest.raises(ValueError):
        train_logreg(X, y, reg_grid=())
    with pytest.raises(ValueError):
        train_logreg(X, y, heldout_fraction=0.9)


def test_holdout_split_partition():
    tr, ho = holdout_split(50, 0.1, seed=1)
    assert len(ho) == 5 and len(tr) == 45
    assert sorted(np.concatenate([tr, ho]).tolist()) == list(range(50))
