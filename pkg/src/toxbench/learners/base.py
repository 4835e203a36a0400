"""Shared train/predict contract for every classifier in the suite.

Models are immutable once fitted. ``predict_proba`` always returns rows that
are non-negative and sum to one within 1e-9; hard labels are the argmax with
ties broken toward the first class in class order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import CapabilityError, ContractError

IMPORTANCE_FAMILIES = ("tree", "forest", "boosting")


@dataclass(frozen=True)
class AlgorithmSpec:
    """Registry key plus hyperparameters; unset parameters take the defaults."""

    name: str
    family: str
    hyperparameters: dict = field(default_factory=dict)

    def resolved(self, defaults: dict) -> dict:
        unknown = set(self.hyperparameters) - set(defaults)
        if unknown:
            raise ContractError(
                f"{self.name}: unknown hyperparameters {sorted(unknown)}; "
                f"known: {sorted(defaults)}"
            )
        merged = dict(defaults)
        merged.update(self.hyperparameters)
        return merged


@dataclass
class ModelMetadata:
    seed: int
    n_instances: int
    fit_seconds: float = 0.0
    converged: bool = True
    notes: dict = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        return {
            "seed": self.seed,
            "n_instances": self.n_instances,
            "fit_seconds": self.fit_seconds,
            "converged": self.converged,
            "notes": dict(self.notes),
        }

    @classmethod
    def from_jsonable(cls, raw: dict) -> "ModelMetadata":
        return cls(
            seed=int(raw["seed"]),
            n_instances=int(raw["n_instances"]),
            fit_seconds=float(raw["fit_seconds"]),
            converged=bool(raw["converged"]),
            notes=dict(raw.get("notes", {})),
        )


class Model:
    """Base classifier: subclasses implement ``_fit`` and ``_raw_proba``."""

    def __init__(self, spec: AlgorithmSpec, classes, feature_names, metadata: ModelMetadata):
        self.spec = spec
        self.classes = tuple(classes)
        self.feature_names = tuple(feature_names)
        self.metadata = metadata

    @property
    def algorithm(self) -> str:
        return self.spec.name

    @property
    def family(self) -> str:
        return self.spec.family

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def _check_input(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ContractError(
                f"{self.algorithm}: expected {self.n_features} features, got shape {X.shape}"
            )
        return X

    def predict_proba(self, X) -> np.ndarray:
        X = self._check_input(X)
        P = np.asarray(self._raw_proba(X), dtype=np.float64)
        P = np.clip(P, 0.0, None)
        sums = P.sum(axis=1, keepdims=True)
        if np.any(sums <= 0):
            raise ContractError(f"{self.algorithm}: degenerate probability row")
        return P / sums

    def predict(self, X) -> list[str]:
        P = self.predict_proba(X)
        return [self.classes[i] for i in np.argmax(P, axis=1)]

    def _raw_proba(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def feature_importance(self) -> np.ndarray:
        raise CapabilityError(
            f"feature importance is not defined for family {self.family!r}"
        )

    # --- serialization -------------------------------------------------

    def _params_to_jsonable(self) -> dict:
        raise NotImplementedError

    @classmethod
    def _params_from_jsonable(cls, model: "Model", params: dict) -> None:
        raise NotImplementedError

    def to_jsonable(self) -> dict:
        return {
            "format": "toxbench-model",
            "version": 1,
            "algorithm": self.algorithm,
            "family": self.family,
            "hyperparameters": dict(self.spec.hyperparameters),
            "classes": list(self.classes),
            "feature_names": list(self.feature_names),
            "metadata": self.metadata.to_jsonable(),
            "parameters": self._params_to_jsonable(),
        }


def importance(model: Model) -> dict[str, float]:
    """Named Gini importance; only tree, forest and boosting models have one."""
    if model.family not in IMPORTANCE_FAMILIES:
        raise CapabilityError(
            f"importance requires family in {IMPORTANCE_FAMILIES}, "
            f"got {model.family!r} ({model.algorithm})"
        )
    values = model.feature_importance()
    return dict(zip(model.feature_names, values.tolist()))


class Standardizer:
    """Per-feature z-scaling fitted on training data; zero-variance columns pass through."""

    def __init__(self, X: np.ndarray):
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.std = np.where(std > 0, std, 1.0)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.mean) / self.std

    def to_jsonable(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}

    @classmethod
    def from_jsonable(cls, raw: dict) -> "Standardizer":
        obj = cls.__new__(cls)
        obj.mean = np.array(raw["mean"], dtype=np.float64)
        obj.std = np.array(raw["std"], dtype=np.float64)
        return obj


def class_indices(y, classes) -> np.ndarray:
    index = {label: i for i, label in enumerate(classes)}
    return np.array([index[label] for label in y], dtype=np.int64)


def one_hot(y_idx: np.ndarray, n_classes: int) -> np.ndarray:
    Y = np.zeros((len(y_idx), n_classes), dtype=np.float64)
    Y[np.arange(len(y_idx)), y_idx] = 1.0
    return Y


def save_model(model: Model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_jsonable(), fh)


def load_model(path) -> Model:
    # Local import: the registry needs the concrete model classes.
    from .registry import model_from_jsonable

    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return model_from_jsonable(raw)
