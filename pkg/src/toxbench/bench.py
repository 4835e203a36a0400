"""Benchmark harness: one protocol, many algorithms, comparable timings.

Every algorithm sees byte-identical training folds (rebalancing, when
requested, is applied by the harness to training folds only; test folds are
never rebalanced). Fit wall time is measured around training alone, and
relative time rescales each total against the slowest completed algorithm,
so the slowest is exactly 1.0. Failures (crashes or blowing the time budget)
keep their record, mirroring a survey that reports its non-starters.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from .corpus import Dataset, make_partitions
from .errors import ContractError
from .learners import AlgorithmSpec, make_spec, train
from .metrics import evaluate_hard
from .sampling import rebalance

SIGNIFICANCE_ALPHA = 0.05


@dataclass(frozen=True)
class SuiteConfig:
    algorithms: tuple
    scheme: dict
    seed: int = 0
    timing_reps: int = 1
    rebalance_mode: str | None = None
    pool_kappa: bool = False
    parallel: bool = False
    time_budget_s: float | None = None
    environment_note: str = ""

    def __post_init__(self):
        if not self.algorithms:
            raise ContractError("suite needs at least one algorithm")
        if self.timing_reps < 1:
            raise ContractError("timing_reps must be >= 1")

    def specs(self) -> list[AlgorithmSpec]:
        return [make_spec(a) if isinstance(a, str) else a for a in self.algorithms]

    def to_jsonable(self) -> dict:
        return {
            "algorithms": [
                {"name": s.name, "family": s.family, "hyperparameters": dict(s.hyperparameters)}
                for s in self.specs()
            ],
            "scheme": dict(self.scheme),
            "seed": self.seed,
            "timing_reps": self.timing_reps,
            "rebalance_mode": self.rebalance_mode,
            "pool_kappa": self.pool_kappa,
            "parallel": self.parallel,
            "time_budget_s": self.time_budget_s,
            "environment_note": self.environment_note,
        }


@dataclass
class BenchmarkRecord:
    name: str
    family: str
    status: str = "ok"  # ok | failed
    error: str | None = None
    fold_accuracies: list[float] = field(default_factory=list)
    fold_kappas: list[float] = field(default_factory=list)
    mean_accuracy: float | None = None
    mean_kappa: float | None = None
    pooled_kappa: float | None = None
    total_seconds: float | None = None
    relative_time: float | None = None
    converged: bool = True
    fold_fingerprints: list[str] = field(default_factory=list)

    def to_jsonable(self) -> dict:
        return {
            "name": self.name,
            "family": self.family,
            "status": self.status,
            "error": self.error,
            "fold_accuracies": list(self.fold_accuracies),
            "fold_kappas": list(self.fold_kappas),
            "mean_accuracy": self.mean_accuracy,
            "mean_kappa": self.mean_kappa,
            "pooled_kappa": self.pooled_kappa,
            "total_seconds": self.total_seconds,
            "relative_time": self.relative_time,
            "converged": self.converged,
            "fold_fingerprints": list(self.fold_fingerprints),
        }


@dataclass
class BenchmarkReport:
    records: list[BenchmarkRecord]
    p_values: list[list[float | None]]
    significant: list[list[bool]]
    dataset_fingerprint: str
    config: SuiteConfig
    times_comparable: bool

    def record(self, name: str) -> BenchmarkRecord:
        for rec in self.records:
            if rec.name == name:
                return rec
        raise KeyError(name)

    def to_jsonable(self) -> dict:
        return {
            "records": [r.to_jsonable() for r in self.records],
            "significance": {
                "alpha": SIGNIFICANCE_ALPHA,
                "method": "paired two-sided t-test over per-fold accuracies",
                "algorithms": [r.name for r in self.records],
                "p_values": self.p_values,
                "significant": self.significant,
            },
            "dataset_fingerprint": self.dataset_fingerprint,
            "environment_note": self.config.environment_note,
            "times_comparable": self.times_comparable,
            "config": self.config.to_jsonable(),
        }


def _stable_seed(*parts) -> int:
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big") % (2**63)


def dataset_fingerprint(dataset: Dataset) -> str:
    h = hashlib.sha256()
    h.update("|".join(dataset.feature_names).encode())
    h.update(np.ascontiguousarray(dataset.X).tobytes())
    h.update("|".join(dataset.y).encode())
    return h.hexdigest()


def _prepare_folds(config: SuiteConfig, dataset: Dataset):
    plan = make_partitions(dataset, config.scheme, config.seed)
    folds = []
    for fold_idx, (train_idx, test_idx) in enumerate(plan.splits):
        train_ds = dataset.subset(train_idx)
        if config.rebalance_mode is not None:
            train_ds = rebalance(
                train_ds, config.rebalance_mode, seed=_stable_seed("rebalance", config.seed, fold_idx)
            )
        folds.append((train_ds, dataset.subset(test_idx), dataset_fingerprint(train_ds)))
    return folds


def _run_one(spec: AlgorithmSpec, folds, config: SuiteConfig, classes) -> BenchmarkRecord:
    rec = BenchmarkRecord(name=spec.name, family=spec.family)
    pooled_pred: list[str] = []
    pooled_truth: list[str] = []
    total = 0.0
    try:
        for fold_idx, (train_ds, test_ds, fingerprint) in enumerate(folds):
            seed = _stable_seed("train", config.seed, spec.name, fold_idx)
            fold_time = math.inf
            model = None
            for _ in range(config.timing_reps):
                model = train(spec, train_ds, seed=seed)
                fold_time = min(fold_time, model.metadata.fit_seconds)
            total += fold_time
            if config.time_budget_s is not None and total > config.time_budget_s:
                raise TimeoutError(
                    f"exceeded time budget ({total:.1f}s > {config.time_budget_s}s)"
                )
            predictions = model.predict(test_ds.X)
            scored = evaluate_hard(predictions, list(test_ds.y), labels=classes)
            rec.fold_accuracies.append(scored.accuracy)
            rec.fold_kappas.append(scored.kappa.kappa)
            rec.fold_fingerprints.append(fingerprint)
            rec.converged = rec.converged and model.metadata.converged
            pooled_pred.extend(predictions)
            pooled_truth.extend(test_ds.y)
        rec.mean_accuracy = float(np.mean(rec.fold_accuracies))
        rec.mean_kappa = float(np.mean(rec.fold_kappas))
        rec.pooled_kappa = evaluate_hard(pooled_pred, pooled_truth, labels=classes).kappa.kappa
        rec.total_seconds = total
    except Exception as exc:  # a broken algorithm must not sink the suite
        rec.status = "failed"
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.fold_accuracies = []
        rec.fold_kappas = []
        rec.mean_accuracy = None
        rec.mean_kappa = None
        rec.pooled_kappa = None
        rec.total_seconds = None
        rec.relative_time = None
    return rec


def paired_t_test(a, b) -> float:
    """Two-sided paired t-test p-value over per-fold accuracy pairs."""
    diffs = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    if len(diffs) < 2:
        return float("nan")
    sd = diffs.std(ddof=1)
    if sd == 0.0:
        return 1.0 if np.mean(diffs) == 0.0 else 0.0
    t = float(np.mean(diffs) / (sd / np.sqrt(len(diffs))))
    return float(2.0 * stats.t.sf(abs(t), df=len(diffs) - 1))


def run_suite(config: SuiteConfig, dataset: Dataset) -> BenchmarkReport:
    """Train and score every configured algorithm on identical folds."""
    specs = config.specs()
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise ContractError(f"duplicate algorithm names in suite: {names}")
    folds = _prepare_folds(config, dataset)
    classes = dataset.classes

    if config.parallel:
        with ThreadPoolExecutor() as pool:
            records = list(
                pool.map(lambda spec: _run_one(spec, folds, config, classes), specs)
            )
    else:
        records = [_run_one(spec, folds, config, classes) for spec in specs]

    completed = [r for r in records if r.status == "ok"]
    if completed:
        slowest = max(r.total_seconds for r in completed)
        for r in completed:
            r.relative_time = r.total_seconds / slowest if slowest > 0 else 1.0

    n = len(records)
    p_values: list[list[float | None]] = [[None] * n for _ in range(n)]
    significant = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if records[i].status != "ok" or records[j].status != "ok":
                continue
            p = paired_t_test(records[i].fold_accuracies, records[j].fold_accuracies)
            if math.isnan(p):
                continue
            p_values[i][j] = p_values[j][i] = p
            significant[i][j] = significant[j][i] = p < SIGNIFICANCE_ALPHA

    return BenchmarkReport(
        records=records,
        p_values=p_values,
        significant=significant,
        dataset_fingerprint=dataset_fingerprint(dataset),
        config=config,
        times_comparable=not config.parallel,
    )


RECORDS_HEADER = ["name", "family", "accuracy", "kappa", "time_s", "relative_time", "status"]
SCATTER_HEADER = ["name", "family", "relative_time", "accuracy"]
BARS_HEADER = ["name", "accuracy", "kappa", "log_time_s"]


def emit_report(report: BenchmarkReport, directory) -> list[Path]:
    """Write records.csv, scatter.csv, bars.csv and report.json."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []

    def kappa_of(rec: BenchmarkRecord):
        return rec.pooled_kappa if report.config.pool_kappa else rec.mean_kappa

    records_path = directory / "records.csv"
    with open(records_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORDS_HEADER)
        for rec in report.records:
            if rec.status == "ok":
                writer.writerow(
                    [
                        rec.name,
                        rec.family,
                        repr(rec.mean_accuracy),
                        repr(kappa_of(rec)),
                        repr(rec.total_seconds),
                        repr(rec.relative_time),
                        rec.status,
                    ]
                )
            else:
                writer.writerow([rec.name, rec.family, "", "", "", "", rec.status])
    written.append(records_path)

    scatter_path = directory / "scatter.csv"
    with open(scatter_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SCATTER_HEADER)
        for rec in report.records:
            if rec.status == "ok":
                writer.writerow([rec.name, rec.family, repr(rec.relative_time), repr(rec.mean_accuracy)])
    written.append(scatter_path)

    bars_path = directory / "bars.csv"
    with open(bars_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BARS_HEADER)
        for rec in report.records:
            if rec.status == "ok":
                log_time = math.log(max(rec.total_seconds, 1e-12))
                writer.writerow([rec.name, repr(rec.mean_accuracy), repr(kappa_of(rec)), repr(log_time)])
    written.append(bars_path)

    json_path = directory / "report.json"
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_jsonable(), fh, indent=2)
    written.append(json_path)
    return written
