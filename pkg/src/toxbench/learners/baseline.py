"""Majority-class baseline: the floor every real learner must beat."""

from __future__ import annotations

import numpy as np

from .base import Model, class_indices


class MajorityModel(Model):
    """Predicts the training class distribution for every input.

    The hard label is therefore always the majority class (ties go to the
    first class in class order), which pins Kappa at zero against any truth.
    """

    def _fit(self, X, y, seed, params):
        y_idx = class_indices(y, self.classes)
        counts = np.bincount(y_idx, minlength=len(self.classes))
        self.distribution = counts / counts.sum()

    def _raw_proba(self, X):
        return np.tile(self.distribution, (X.shape[0], 1))

    def _params_to_jsonable(self) -> dict:
        return {"distribution": self.distribution.tolist()}

    def _load_params(self, params: dict) -> None:
        self.distribution = np.array(params["distribution"], dtype=np.float64)
