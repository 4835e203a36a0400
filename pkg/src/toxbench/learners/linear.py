"""Gradient-trained linear classifiers: multinomial logistic regression and a
one-vs-rest linear SVM.

Both standardize features internally, run full-batch gradient descent with a
fixed step and an epoch cap, and report convergence honestly: hitting the cap
leaves ``metadata.converged`` False and the model usable.
"""

from __future__ import annotations

import numpy as np

from .base import Model, Standardizer, class_indices, one_hot


def _softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


class LogisticModel(Model):
    """Softmax regression with L2 penalty (bias unpenalized)."""

    def _fit(self, X, y, seed, params):
        self.scaler = Standardizer(X)
        Xs = self.scaler.transform(X)
        y_idx = class_indices(y, self.classes)
        n, p = Xs.shape
        k = len(self.classes)
        Y = one_hot(y_idx, k)
        self.W = np.zeros((p, k))
        self.b = np.zeros(k)
        lr, l2, tol = params["lr"], params["l2"], params["tol"]
        self.metadata.converged = False
        for _ in range(params["epochs"]):
            P = _softmax(Xs @ self.W + self.b)
            err = (P - Y) / n
            grad_W = Xs.T @ err + l2 * self.W
            grad_b = err.sum(axis=0)
            self.W -= lr * grad_W
            self.b -= lr * grad_b
            if max(np.abs(grad_W).max(), np.abs(grad_b).max()) < tol:
                self.metadata.converged = True
                break

    def _raw_proba(self, X):
        return _softmax(self.scaler.transform(X) @ self.W + self.b)

    def _params_to_jsonable(self) -> dict:
        return {"W": self.W.tolist(), "b": self.b.tolist(), "scaler": self.scaler.to_jsonable()}

    def _load_params(self, params: dict) -> None:
        self.W = np.array(params["W"], dtype=np.float64)
        self.b = np.array(params["b"], dtype=np.float64)
        self.scaler = Standardizer.from_jsonable(params["scaler"])


class LinearSvmModel(Model):
    """One-vs-rest hinge loss via subgradient descent.

    Margins are mapped to a distribution with a softmax, which preserves the
    ranking of classes; no Platt-style calibration is attempted.
    """

    def _fit(self, X, y, seed, params):
        self.scaler = Standardizer(X)
        Xs = self.scaler.transform(X)
        y_idx = class_indices(y, self.classes)
        n, p = Xs.shape
        k = len(self.classes)
        signs = np.where(one_hot(y_idx, k) > 0, 1.0, -1.0)  # (n, k)
        self.W = np.zeros((p, k))
        self.b = np.zeros(k)
        lr, l2, tol = params["lr"], params["l2"], params["tol"]
        self.metadata.converged = False
        prev_obj = np.inf
        for _ in range(params["epochs"]):
            margins = signs * (Xs @ self.W + self.b)
            viol = margins < 1.0
            coef = np.where(viol, -signs, 0.0) / n
            grad_W = Xs.T @ coef + l2 * self.W
            grad_b = coef.sum(axis=0)
            self.W -= lr * grad_W
            self.b -= lr * grad_b
            obj = float(np.maximum(0.0, 1.0 - margins).sum() / n + 0.5 * l2 * np.sum(self.W**2))
            if abs(prev_obj - obj) < tol * max(1.0, abs(prev_obj)):
                self.metadata.converged = True
                break
            prev_obj = obj

    def _raw_proba(self, X):
        return _softmax(self.scaler.transform(X) @ self.W + self.b)

    def _params_to_jsonable(self) -> dict:
        return {"W": self.W.tolist(), "b": self.b.tolist(), "scaler": self.scaler.to_jsonable()}

    def _load_params(self, params: dict) -> None:
        self.W = np.array(params["W"], dtype=np.float64)
        self.b = np.array(params["b"], dtype=np.float64)
        self.scaler = Standardizer.from_jsonable(params["scaler"])
