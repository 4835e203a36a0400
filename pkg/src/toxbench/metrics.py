"""Scoring: confusion matrix, accuracy, Cohen's Kappa, and per-class PR curves.

The headline ranking metric is the unweighted class average of per-class
precision-recall AUC, which penalizes mistakes on rare classes exactly as
hard as on the dominant one.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, ...]
    counts: np.ndarray = field(repr=False)  # (true, predicted)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def row(self, label: str) -> np.ndarray:
        return self.counts[self.labels.index(label)]

    def to_jsonable(self) -> dict:
        return {"labels": list(self.labels), "counts": self.counts.tolist()}


@dataclass(frozen=True)
class KappaResult:
    p_o: float
    p_e: float
    kappa: float
    degenerate: bool = False  # p_e == 1; agreement beyond chance is undefined

    def to_jsonable(self) -> dict:
        return {"p_o": self.p_o, "p_e": self.p_e, "kappa": self.kappa, "degenerate": self.degenerate}


@dataclass(frozen=True)
class HardEvaluation:
    confusion: ConfusionMatrix
    accuracy: float
    kappa: KappaResult

    def to_jsonable(self) -> dict:
        return {
            "confusion": self.confusion.to_jsonable(),
            "accuracy": self.accuracy,
            "kappa": self.kappa.to_jsonable(),
        }


def confusion_matrix(predictions, truth, labels=None) -> ConfusionMatrix:
    predictions = list(predictions)
    truth = list(truth)
    if len(predictions) != len(truth):
        raise ContractError(f"{len(predictions)} predictions vs {len(truth)} truth labels")
    if not truth:
        raise ContractError("cannot score zero instances")
    if labels is None:
        labels = tuple(sorted(set(truth) | set(predictions)))
    else:
        labels = tuple(labels)
    index = {label: i for i, label in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for t, p in zip(truth, predictions):
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(labels=labels, counts=counts)


def cohen_kappa(cm: ConfusionMatrix) -> KappaResult:
    total = cm.total
    p_o = float(np.trace(cm.counts)) / total
    rows = cm.counts.sum(axis=1) / total
    cols = cm.counts.sum(axis=0) / total
    p_e = float(np.dot(rows, cols))
    if p_e >= 1.0:
        # Both marginals are the same point mass, which forces p_o = 1.
        return KappaResult(p_o=p_o, p_e=p_e, kappa=1.0, degenerate=True)
    return KappaResult(p_o=p_o, p_e=p_e, kappa=(p_o - p_e) / (1.0 - p_e))


def evaluate_hard(predictions, truth, labels=None) -> HardEvaluation:
    """Confusion matrix, accuracy = trace/total, and chance-corrected Kappa."""
    cm = confusion_matrix(predictions, truth, labels=labels)
    accuracy = float(np.trace(cm.counts)) / cm.total
    return HardEvaluation(confusion=cm, accuracy=accuracy, kappa=cohen_kappa(cm))


@dataclass(frozen=True)
class PRCurve:
    """One-vs-rest precision-recall sweep for a single class.

    Points are ordered by non-decreasing recall. Tied scores enter the
    positive set together (threshold semantics ``>=``), so the curve does not
    depend on instance order. The curve is anchored at recall 0 with the
    precision of the highest threshold, and ``auc`` integrates precision over
    recall by trapezoid. ``defined`` is False when the class never occurs in
    the truth labels, which leaves recall meaningless.
    """

    label: str
    recalls: tuple[float, ...]
    precisions: tuple[float, ...]
    thresholds: tuple[float, ...]
    auc: float
    defined: bool = True

    def to_jsonable(self) -> dict:
        return {
            "label": self.label,
            "recalls": list(self.recalls),
            "precisions": list(self.precisions),
            "thresholds": list(self.thresholds),
            "auc": self.auc,
            "defined": self.defined,
        }


@dataclass(frozen=True)
class ProbaEvaluation:
    curves: tuple[PRCurve, ...]
    mean_auc: float
    undefined_labels: tuple[str, ...]

    def to_jsonable(self) -> dict:
        return {
            "curves": [c.to_jsonable() for c in self.curves],
            "mean_auc": self.mean_auc,
            "undefined_labels": list(self.undefined_labels),
        }


def pr_curve(scores, positives, label: str = "") -> PRCurve:
    """Precision-recall curve for one class from per-instance scores.

    ``positives`` is a boolean mask aligned with ``scores``.
    """
    scores = np.asarray(scores, dtype=np.float64)
    positives = np.asarray(positives, dtype=bool)
    if scores.shape != positives.shape:
        raise ContractError("scores and positives must align")
    n_pos = int(positives.sum())
    if n_pos == 0:
        return PRCurve(label, (), (), (), auc=float("nan"), defined=False)

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_pos = positives[order]
    tp = np.cumsum(sorted_pos)
    predicted = np.arange(1, len(scores) + 1)
    # Last index of each tied-score block: all equal scores cross together.
    block_ends = np.nonzero(np.append(sorted_scores[1:] != sorted_scores[:-1], True))[0]
    recalls = tp[block_ends] / n_pos
    precisions = tp[block_ends] / predicted[block_ends]
    thresholds = sorted_scores[block_ends]

    anchor_r = np.concatenate(([0.0], recalls))
    anchor_p = np.concatenate(([precisions[0]], precisions))
    auc = float(np.trapz(anchor_p, anchor_r))
    return PRCurve(
        label=label,
        recalls=tuple(anchor_r.tolist()),
        precisions=tuple(anchor_p.tolist()),
        thresholds=tuple(thresholds.tolist()),
        auc=auc,
    )


def evaluate_proba(probabilities, truth, classes) -> ProbaEvaluation:
    """Per-class one-vs-rest PR curves plus their unweighted mean AUC.

    ``probabilities`` is (n, K) with columns aligned to ``classes``; each row
    must be a distribution. Classes absent from the truth get an undefined
    curve, are excluded from the mean, and trigger a warning.
    """
    P = np.asarray(probabilities, dtype=np.float64)
    truth = list(truth)
    classes = tuple(classes)
    if P.ndim != 2 or P.shape[1] != len(classes):
        raise ContractError(f"probability matrix shape {P.shape} does not match {len(classes)} classes")
    if P.shape[0] != len(truth):
        raise ContractError(f"{P.shape[0]} probability rows vs {len(truth)} truth labels")
    if np.any(P < -1e-9) or np.any(np.abs(P.sum(axis=1) - 1.0) > 1e-6):
        raise ContractError("probability rows must be distributions")

    curves = []
    defined_aucs = []
    undefined = []
    for j, label in enumerate(classes):
        mask = np.array([t == label for t in truth], dtype=bool)
        curve = pr_curve(P[:, j], mask, label=label)
        curves.append(curve)
        if curve.defined:
            defined_aucs.append(curve.auc)
        else:
            undefined.append(label)
            warnings.warn(f"class {label!r} absent from truth; AUC undefined and excluded")
    if not defined_aucs:
        raise ContractError("no class present in truth; mean AUC undefined")
    return ProbaEvaluation(
        curves=tuple(curves),
        mean_auc=float(np.mean(defined_aucs)),
        undefined_labels=tuple(undefined),
    )


def pr_curves_to_csv(curves, path) -> None:
    """Dump curve points as (label, threshold, recall, precision) rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "threshold", "recall", "precision"])
        for curve in curves:
            if not curve.defined:
                continue
            # The recall-0 anchor has no threshold of its own.
            writer.writerow([curve.label, "", curve.recalls[0], curve.precisions[0]])
            for thr, r, p in zip(curve.thresholds, curve.recalls[1:], curve.precisions[1:]):
                writer.writerow([curve.label, repr(thr), r, p])
