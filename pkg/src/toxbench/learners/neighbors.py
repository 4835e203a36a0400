"""k-nearest-neighbors over z-standardized features."""

from __future__ import annotations

import numpy as np

from .base import Model, Standardizer, class_indices


class KnnModel(Model):
    """Euclidean kNN; the probability of a class is its share of the k
    nearest training rows. Distance ties resolve by training index order
    (stable sort), so predictions are deterministic.
    """

    def _fit(self, X, y, seed, params):
        self.k = min(int(params["k"]), X.shape[0])
        if self.k != params["k"]:
            self.metadata.notes["k_clamped_to"] = self.k
        self.scaler = Standardizer(X)
        self.train_X = self.scaler.transform(X)
        self.train_y = class_indices(y, self.classes)

    def _raw_proba(self, X):
        Xs = self.scaler.transform(X)
        k_classes = len(self.classes)
        out = np.zeros((Xs.shape[0], k_classes), dtype=np.float64)
        # Squared distances suffice for ranking.
        d2 = (
            np.sum(Xs**2, axis=1)[:, None]
            + np.sum(self.train_X**2, axis=1)[None, :]
            - 2.0 * Xs @ self.train_X.T
        )
        for i in range(Xs.shape[0]):
            nearest = np.argsort(d2[i], kind="stable")[: self.k]
            votes = np.bincount(self.train_y[nearest], minlength=k_classes)
            out[i] = votes / self.k
        return out

    def _params_to_jsonable(self) -> dict:
        return {
            "k": self.k,
            "scaler": self.scaler.to_jsonable(),
            "train_X": self.train_X.tolist(),
            "train_y": self.train_y.tolist(),
        }

    def _load_params(self, params: dict) -> None:
        self.k = int(params["k"])
        self.scaler = Standardizer.from_jsonable(params["scaler"])
        self.train_X = np.array(params["train_X"], dtype=np.float64)
        self.train_y = np.array(params["train_y"], dtype=np.int64)
