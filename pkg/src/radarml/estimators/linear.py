"""Linear classifiers: multinomial logistic regression, perceptron, SVM.

All three operate on an augmented design matrix with a trailing bias
column that stays unpenalized. Logistic regression minimizes the mean
negative log-likelihood plus (1/(2C))||W||^2 and exposes three solvers
that share one convergence rule: max|grad| < tol.
"""

from __future__ import annotations

import numpy as np

from ..seeding import make_rng
from .base import check_predict_input, encode_training_data

_LBFGS_MEMORY = 10
_ARMIJO_C1 = 1e-4
_MAX_HALVINGS = 30

SOLVERS = ("lbfgs", "sag", "newton-cg")


def _augment(X):
    return np.hstack([X, np.ones((X.shape[0], 1))])


def _softmax_rows(Z):
    Z = Z - Z.max(axis=1, keepdims=True)
    E = np.exp(Z)
    return E / E.sum(axis=1, keepdims=True)


def _nll_loss_grad(theta, Xa, Y, lam):
    """Penalized mean NLL and its gradient; theta is (K, d+1)."""
    n = Xa.shape[0]
    Z = Xa @ theta.T
    Z = Z - Z.max(axis=1, keepdims=True)
    logsum = np.log(np.exp(Z).sum(axis=1, keepdims=True))
    logp = Z - logsum
    nll = -np.sum(logp * Y) / n
    P = np.exp(logp)
    G = (P - Y).T @ Xa / n
    W = theta.copy()
    W[:, -1] = 0.0
    loss = nll + 0.5 * lam * np.sum(W * W)
    grad = G + lam * W
    return loss, grad


def _solve_lbfgs(Xa, Y, lam, tol, max_iter):
    K = Y.shape[1]
    d1 = Xa.shape[1]
    theta = np.zeros((K, d1))
    f, g = _nll_loss_grad(theta, Xa, Y, lam)
    s_hist, y_hist, rho_hist = [], [], []
    for _ in range(max_iter):
        if np.max(np.abs(g)) < tol:
            break
        q = g.reshape(-1).copy()
        alphas = []
        for s, yv, rho in zip(reversed(s_hist), reversed(y_hist), reversed(rho_hist)):
            a = rho * s.dot(q)
            alphas.append(a)
            q -= a * yv
        if y_hist:
            q *= s_hist[-1].dot(y_hist[-1]) / y_hist[-1].dot(y_hist[-1])
        for (s, yv, rho), a in zip(zip(s_hist, y_hist, rho_hist), reversed(alphas)):
            b = rho * yv.dot(q)
            q += (a - b) * s
        p = -q.reshape(theta.shape)
        gTp = float(np.sum(g * p))
        if gTp >= 0.0:  # rounding broke descent; fall back to steepest
            p = -g
            gTp = -float(np.sum(g * g))
        step = 1.0
        for _ in range(_MAX_HALVINGS):
            theta_new = theta + step * p
            f_new, g_new = _nll_loss_grad(theta_new, Xa, Y, lam)
            if f_new <= f + _ARMIJO_C1 * step * gTp:
                break
            step *= 0.5
        else:
            break
        s_vec = (theta_new - theta).reshape(-1)
        y_vec = (g_new - g).reshape(-1)
        sy = s_vec.dot(y_vec)
        if sy > 1e-10:
            s_hist.append(s_vec)
            y_hist.append(y_vec)
            rho_hist.append(1.0 / sy)
            if len(s_hist) > _LBFGS_MEMORY:
                s_hist.pop(0)
                y_hist.pop(0)
                rho_hist.pop(0)
        theta, f, g = theta_new, f_new, g_new
    return theta


def _solve_sag(Xa, Y, lam, tol, max_iter, seed):
    """Stochastic average gradient with per-sample residual memory."""
    n, d1 = Xa.shape
    K = Y.shape[1]
    theta = np.zeros((K, d1))
    # at theta = 0 every softmax row is uniform
    resid = np.full((n, K), 1.0 / K) - Y
    grad_sum = resid.T @ Xa  # (K, d1), tracks sum_i resid_i x_i
    lipschitz = 0.5 * float(np.max(np.sum(Xa * Xa, axis=1))) + lam
    step = 1.0 / lipschitz
    rng = make_rng(seed, 0)
    for _ in range(max_iter):
        picks = rng.integers(0, n, size=n)
        for i in picks:
            x = Xa[i]
            z = theta @ x
            z -= z.max()
            p = np.exp(z)
            p /= p.sum()
            new_resid = p - Y[i]
            grad_sum += np.outer(new_resid - resid[i], x)
            resid[i] = new_resid
            update = grad_sum * (step / n)
            update[:, :-1] += (step * lam) * theta[:, :-1]
            theta -= update
        _, g = _nll_loss_grad(theta, Xa, Y, lam)
        if np.max(np.abs(g)) < tol:
            break
    return theta


def _cg(apply_h, b, tol, max_iter):
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = float(r.dot(r))
    for _ in range(max_iter):
        if np.sqrt(rs) < tol:
            break
        hp = apply_h(p)
        curvature = float(p.dot(hp))
        if curvature <= 0.0:
            break
        alpha = rs / curvature
        x += alpha * p
        r -= alpha * hp
        rs_new = float(r.dot(r))
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x


def _solve_newton_cg(Xa, Y, lam, tol, max_iter):
    n, d1 = Xa.shape
    K = Y.shape[1]
    theta = np.zeros((K, d1))
    f, g = _nll_loss_grad(theta, Xa, Y, lam)
    for _ in range(max_iter):
        gnorm = np.max(np.abs(g))
        if gnorm < tol:
            break
        P = _softmax_rows(Xa @ theta.T)

        def apply_h(v_flat):
            V = v_flat.reshape(K, d1)
            A = Xa @ V.T  # (n, K)
            M = P * (A - np.sum(P * A, axis=1, keepdims=True))
            HV = M.T @ Xa / n
            R = V.copy()
            R[:, -1] = 0.0
            return (HV + lam * R).reshape(-1)

        b = -g.reshape(-1)
        # inexact Newton forcing term keeps early iterations cheap
        cg_tol = min(0.5, np.sqrt(gnorm)) * np.linalg.norm(b)
        p = _cg(apply_h, b, cg_tol, max_iter=250)
        if not np.any(p):
            p = b
        P_dir = p.reshape(theta.shape)
        gTp = float(np.sum(g * P_dir))
        if gTp >= 0.0:
            P_dir = -g
            gTp = -float(np.sum(g * g))
        step = 1.0
        for _ in range(_MAX_HALVINGS):
            theta_new = theta + step * P_dir
            f_new, g_new = _nll_loss_grad(theta_new, Xa, Y, lam)
            if f_new <= f + _ARMIJO_C1 * step * gTp:
                break
            step *= 0.5
        else:
            break
        theta, f, g = theta_new, f_new, g_new
    return theta


class LogisticRegression:
    """Softmax regression with L2 strength 1/C."""

    kind = "logistic_regression"

    def __init__(self, C=1.0, solver="lbfgs", tol=1e-5, max_iter=500, seed=0):
        if C <= 0:
            raise ValueError("C must be positive")
        if solver not in SOLVERS:
            raise ValueError(f"unknown solver {solver!r}; expected one of {SOLVERS}")
        self.C = float(C)
        self.solver = solver
        self.tol = float(tol)
        self.max_iter = int(max_iter)
        self.seed = int(seed)

    def fit(self, X, y):
        X, codes, self.classes_ = encode_training_data(X, y)
        self.n_features_ = X.shape[1]
        K = len(self.classes_)
        Y = np.zeros((X.shape[0], K))
        Y[np.arange(X.shape[0]), codes] = 1.0
        Xa = _augment(X)
        lam = 1.0 / self.C
        if self.solver == "lbfgs":
            theta = _solve_lbfgs(Xa, Y, lam, self.tol, self.max_iter)
        elif self.solver == "sag":
            theta = _solve_sag(Xa, Y, lam, self.tol, self.max_iter, self.seed)
        else:
            theta = _solve_newton_cg(Xa, Y, lam, self.tol, self.max_iter)
        self.coef_ = theta[:, :-1]
        self.intercept_ = theta[:, -1]
        return self

    def decision_function(self, X):
        return X @ self.coef_.T + self.intercept_

    def predict_proba(self, X):
        X = check_predict_input(self, X)
        return _softmax_rows(self.decision_function(X))

    def predict(self, X):
        X = check_predict_input(self, X)
        scores = self.decision_function(X)
        return self.classes_[np.argmax(scores, axis=1)]


class Perceptron:
    """One-vs-rest perceptron with multiplicative L2 decay ``alpha``.

    Each visited sample first decays every weight vector by
    (1 - lr * alpha), then applies the classic mistake-driven update for
    the classifiers whose margin is not positive. Training stops early
    after a full epoch without mistakes.
    """

    kind = "perceptron"

    def __init__(self, alpha=0.0001, lr=1.0, max_epochs=100, seed=0):
        if alpha < 0:
            raise ValueError("alpha must be nonnegative")
        self.alpha = float(alpha)
        self.lr = float(lr)
        self.max_epochs = int(max_epochs)
        self.seed = int(seed)

    def fit(self, X, y):
        X, codes, self.classes_ = encode_training_data(X, y)
        self.n_features_ = X.shape[1]
        n, d = X.shape
        K = len(self.classes_)
        targets = np.full((n, K), -1.0)
        targets[np.arange(n), codes] = 1.0
        W = np.zeros((K, d))
        b = np.zeros(K)
        decay = 1.0 - self.lr * self.alpha
        if decay < 0:
            raise ValueError("lr * alpha must not exceed 1")
        rng = make_rng(self.seed, 0)
        for _ in range(self.max_epochs):
            order = rng.permutation(n)
            mistakes = 0
            for i in order:
                x = X[i]
                W *= decay
                scores = W @ x + b
                wrong = targets[i] * scores <= 0.0
                if np.any(wrong):
                    mistakes += int(np.count_nonzero(wrong))
                    t = self.lr * targets[i][wrong]
                    W[wrong] += t[:, None] * x
                    b[wrong] += t
            if mistakes == 0:
                break
        self.coef_ = W
        self.intercept_ = b
        return self

    def decision_function(self, X):
        return X @ self.coef_.T + self.intercept_

    def predict(self, X):
        X = check_predict_input(self, X)
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]


class LinearSVC:
    """One-vs-rest linear SVM trained by deterministic subgradient descent.

    Objective per class: (1/(2C))||w||^2 + mean hinge loss. Every epoch
    applies one full-batch subgradient step with the classic 1/(lam * t)
    schedule, so repeated fits are bit-identical without any RNG.
    """

    kind = "linear_svc"

    def __init__(self, C=1.0, max_epochs=200, seed=0):
        if C <= 0:
            raise ValueError("C must be positive")
        self.C = float(C)
        self.max_epochs = int(max_epochs)
        self.seed = int(seed)  # unused; kept for a uniform constructor surface

    def fit(self, X, y):
        X, codes, self.classes_ = encode_training_data(X, y)
        self.n_features_ = X.shape[1]
        n, d = X.shape
        K = len(self.classes_)
        T = np.full((n, K), -1.0)
        T[np.arange(n), codes] = 1.0
        W = np.zeros((K, d))
        b = np.zeros(K)
        lam = 1.0 / self.C
        for t in range(1, self.max_epochs + 1):
            step = 1.0 / (lam * t)
            margins = T * (X @ W.T + b)
            viol = margins < 1.0  # (n, K)
            coeff = np.where(viol, T, 0.0)
            grad_w = lam * W - coeff.T @ X / n
            grad_b = -coeff.sum(axis=0) / n
            W -= step * grad_w
            b -= step * grad_b
        self.coef_ = W
        self.intercept_ = b
        return self

    def decision_function(self, X):
        return X @ self.coef_.T + self.intercept_

    def predict(self, X):
        X = check_predict_input(self, X)
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]
