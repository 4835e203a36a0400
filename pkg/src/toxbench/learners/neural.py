"""One-hidden-layer neural network with softmax output and cross-entropy loss.

The loss/gradient pair is exposed as a standalone function over a flat
parameter vector so analytic gradients can be checked against central finite
differences.
"""

from __future__ import annotations

import numpy as np

from .base import Model, Standardizer, class_indices, one_hot


def param_shapes(n_features: int, hidden: int, n_classes: int):
    return (
        ("W1", (n_features, hidden)),
        ("b1", (hidden,)),
        ("W2", (hidden, n_classes)),
        ("b2", (n_classes,)),
    )


def unflatten(theta: np.ndarray, shapes):
    params = {}
    offset = 0
    for name, shape in shapes:
        size = int(np.prod(shape))
        params[name] = theta[offset : offset + size].reshape(shape)
        offset += size
    return params


def flatten(params: dict, shapes) -> np.ndarray:
    return np.concatenate([params[name].ravel() for name, _ in shapes])


def loss_and_grad(theta: np.ndarray, X: np.ndarray, Y: np.ndarray, shapes, l2: float):
    """Cross-entropy + L2 loss and its analytic gradient over flat parameters.

    ``Y`` is one-hot (n, k); biases are not penalized. tanh keeps the loss
    smooth so finite differences are meaningful everywhere.
    """
    p = unflatten(theta, shapes)
    n = X.shape[0]
    H = np.tanh(X @ p["W1"] + p["b1"])
    scores = H @ p["W2"] + p["b2"]
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = -float((Y * log_probs).sum()) / n
    loss += 0.5 * l2 * (float(np.sum(p["W1"] ** 2)) + float(np.sum(p["W2"] ** 2)))

    d_scores = (np.exp(log_probs) - Y) / n
    grads = {
        "W2": H.T @ d_scores + l2 * p["W2"],
        "b2": d_scores.sum(axis=0),
    }
    d_hidden = (d_scores @ p["W2"].T) * (1.0 - H**2)
    grads["W1"] = X.T @ d_hidden + l2 * p["W1"]
    grads["b1"] = d_hidden.sum(axis=0)
    return loss, flatten(grads, shapes)


class MlpModel(Model):
    """Full-batch gradient descent on the loss above, seeded weight init."""

    def _fit(self, X, y, seed, params):
        rng = np.random.default_rng(seed)
        self.scaler = Standardizer(X)
        Xs = self.scaler.transform(X)
        y_idx = class_indices(y, self.classes)
        k = len(self.classes)
        Y = one_hot(y_idx, k)
        hidden = int(params["hidden"])
        self.shapes = param_shapes(Xs.shape[1], hidden, k)
        theta = np.concatenate(
            [
                (rng.standard_normal((Xs.shape[1], hidden)) / np.sqrt(Xs.shape[1])).ravel(),
                np.zeros(hidden),
                (rng.standard_normal((hidden, k)) / np.sqrt(hidden)).ravel(),
                np.zeros(k),
            ]
        )
        lr, l2, tol = params["lr"], params["l2"], params["tol"]
        self.metadata.converged = False
        for _ in range(params["epochs"]):
            _, grad = loss_and_grad(theta, Xs, Y, self.shapes, l2)
            theta = theta - lr * grad
            if np.abs(grad).max() < tol:
                self.metadata.converged = True
                break
        self.theta = theta
        self.hidden = hidden

    def _raw_proba(self, X):
        p = unflatten(self.theta, self.shapes)
        H = np.tanh(self.scaler.transform(X) @ p["W1"] + p["b1"])
        scores = H @ p["W2"] + p["b2"]
        shifted = scores - scores.max(axis=1, keepdims=True)
        e = np.exp(shifted)
        return e / e.sum(axis=1, keepdims=True)

    def _params_to_jsonable(self) -> dict:
        return {
            "theta": self.theta.tolist(),
            "hidden": self.hidden,
            "scaler": self.scaler.to_jsonable(),
        }

    def _load_params(self, params: dict) -> None:
        self.hidden = int(params["hidden"])
        self.theta = np.array(params["theta"], dtype=np.float64)
        self.scaler = Standardizer.from_jsonable(params["scaler"])
        self.shapes = param_shapes(len(self.feature_names), self.hidden, len(self.classes))
