"""Gaussian generative classifiers: naive Bayes and linear discriminant analysis."""

from __future__ import annotations

import numpy as np

from .base import Model, class_indices


class GaussianNBModel(Model):
    """Per-class diagonal Gaussians with variance smoothing."""

    def _fit(self, X, y, seed, params):
        y_idx = class_indices(y, self.classes)
        k = len(self.classes)
        n, p = X.shape
        self.means = np.zeros((k, p))
        self.variances = np.zeros((k, p))
        self.log_priors = np.zeros(k)
        global_var = X.var(axis=0).max() if n > 1 else 1.0
        self.epsilon = params["var_smoothing"] * max(global_var, 1.0)
        for c in range(k):
            rows = X[y_idx == c]
            self.means[c] = rows.mean(axis=0)
            self.variances[c] = rows.var(axis=0) + self.epsilon
            self.log_priors[c] = np.log(len(rows) / n)

    def _raw_proba(self, X):
        # log N(x | mu, var) summed over features, then softmax across classes
        diff = X[:, None, :] - self.means[None, :, :]
        log_lik = -0.5 * (
            np.log(2.0 * np.pi * self.variances)[None, :, :] + diff**2 / self.variances[None, :, :]
        ).sum(axis=2)
        scores = log_lik + self.log_priors[None, :]
        scores -= scores.max(axis=1, keepdims=True)
        return np.exp(scores)

    def _params_to_jsonable(self) -> dict:
        return {
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "log_priors": self.log_priors.tolist(),
        }

    def _load_params(self, params: dict) -> None:
        self.means = np.array(params["means"], dtype=np.float64)
        self.variances = np.array(params["variances"], dtype=np.float64)
        self.log_priors = np.array(params["log_priors"], dtype=np.float64)


class LDAModel(Model):
    """Shared-covariance Gaussian discriminant.

    A singular pooled covariance triggers automatic ridge regularization
    (escalating until the solve succeeds); the applied ridge is flagged in
    the model metadata.
    """

    def _fit(self, X, y, seed, params):
        y_idx = class_indices(y, self.classes)
        k = len(self.classes)
        n, p = X.shape
        self.means = np.zeros((k, p))
        priors = np.zeros(k)
        pooled = np.zeros((p, p))
        for c in range(k):
            rows = X[y_idx == c]
            self.means[c] = rows.mean(axis=0)
            priors[c] = len(rows) / n
            centered = rows - self.means[c]
            pooled += centered.T @ centered
        pooled /= max(n - k, 1)

        ridge = float(params["ridge"])
        scale = max(float(np.trace(pooled)) / p, 1e-12)
        applied = ridge
        while True:
            try:
                cov = pooled + applied * scale * np.eye(p)
                solved = np.linalg.solve(cov, self.means.T).T  # (k, p) rows = Sigma^-1 mu_c
                if not np.all(np.isfinite(solved)) or np.linalg.cond(cov) > 1e12:
                    raise np.linalg.LinAlgError
                break
            except np.linalg.LinAlgError:
                applied = max(applied * 10.0, 1e-8)
        if applied != ridge:
            self.metadata.converged = True
            self.metadata.notes["lda_ridge"] = applied * scale
        self.coef = solved
        self.intercept = -0.5 * np.einsum("cp,cp->c", self.means, solved) + np.log(priors)

    def _raw_proba(self, X):
        scores = X @ self.coef.T + self.intercept[None, :]
        scores -= scores.max(axis=1, keepdims=True)
        return np.exp(scores)

    def _params_to_jsonable(self) -> dict:
        return {
            "coef": self.coef.tolist(),
            "intercept": self.intercept.tolist(),
            "means": self.means.tolist(),
        }

    def _load_params(self, params: dict) -> None:
        self.coef = np.array(params["coef"], dtype=np.float64)
        self.intercept = np.array(params["intercept"], dtype=np.float64)
        self.means = np.array(params["means"], dtype=np.float64)
