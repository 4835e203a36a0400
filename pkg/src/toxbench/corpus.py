"""Jigsaw-format ingestion, exclusive class resolution, and reproducible partitions.

The raw data is multi-label (six binary toxicity annotations per comment).
Training and scoring work on a single exclusive class per comment, so the six
flags are collapsed onto one label by a configurable priority order; all-zero
rows become ``benign``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    ContractError,
    CsvParseError,
    SchemaError,
    StratificationError,
)

TOXIC_LABELS = ("toxic", "severe_toxic", "obscene", "threat", "insult", "identity_hate")
BENIGN = "benign"
ALL_LABELS = (BENIGN,) + TOXIC_LABELS

# Rarest-first priority: when several flags are set the scarcest label wins,
# which preserves the tiny classes the balanced training sets depend on.
DEFAULT_PRIORITY = ("severe_toxic", "threat", "identity_hate", "obscene", "insult", "toxic")

JIGSAW_COLUMNS = ("id", "comment_text") + TOXIC_LABELS


@dataclass(frozen=True)
class RawComment:
    """One Jigsaw row: opaque id, comment text, six 0/1 annotations.

    ``flags`` follows the column order ``toxic, severe_toxic, obscene,
    threat, insult, identity_hate``.
    """

    id: str
    text: str
    flags: tuple[int, int, int, int, int, int]

    def __post_init__(self):
        if len(self.flags) != 6 or any(f not in (0, 1) for f in self.flags):
            raise ContractError(f"flags must be six 0/1 values, got {self.flags!r}")

    def flag(self, label: str) -> int:
        return self.flags[TOXIC_LABELS.index(label)]


def resolve_class(flags, priority=DEFAULT_PRIORITY) -> str:
    """Collapse six binary flags onto one exclusive label.

    All-zero flags map to ``benign``; otherwise the highest-priority label
    whose flag is set wins. ``priority`` must be a permutation of the six
    toxic labels.
    """
    if sorted(priority) != sorted(TOXIC_LABELS):
        raise ContractError(f"priority must permute {TOXIC_LABELS}, got {tuple(priority)!r}")
    flags = tuple(flags)
    if len(flags) != 6:
        raise ContractError(f"expected 6 flags, got {len(flags)}")
    for label in priority:
        if flags[TOXIC_LABELS.index(label)]:
            return label
    return BENIGN


def load_jigsaw_csv(path) -> list[RawComment]:
    """Parse a Jigsaw-format CSV into RawComment records, preserving row order.

    Standard CSV quoting applies (embedded commas/newlines, doubled quotes).
    The file is decoded as UTF-8 with malformed bytes replaced, since wild
    comments routinely contain junk bytes. Extra columns are ignored.
    """
    path = Path(path)
    with open(path, encoding="utf-8", errors="replace", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty, expected a header row") from None
        positions = {}
        for col in JIGSAW_COLUMNS:
            if col not in header:
                raise SchemaError(f"{path}: missing required column {col!r}")
            positions[col] = header.index(col)

        comments = []
        for rownum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < len(header):
                raise CsvParseError(f"expected {len(header)} fields, found {len(row)}", row=rownum)
            flags = []
            for label in TOXIC_LABELS:
                value = row[positions[label]].strip()
                if value not in ("0", "1"):
                    raise CsvParseError(
                        f"column {label!r} must be 0 or 1, got {value!r}", row=rownum
                    )
                flags.append(int(value))
            comments.append(
                RawComment(
                    id=row[positions["id"]],
                    text=row[positions["comment_text"]],
                    flags=tuple(flags),
                )
            )
    return comments


def write_jigsaw_csv(comments, path) -> None:
    """Serialize records back to the Jigsaw schema (round-trips with the loader)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(JIGSAW_COLUMNS)
        for c in comments:
            writer.writerow([c.id, c.text, *c.flags])


class Dataset:
    """A named feature matrix with one class label per row.

    The matrix is float64 and read-only after construction; a Dataset can be
    shared freely across threads.
    """

    def __init__(self, feature_names, X, y):
        feature_names = tuple(feature_names)
        X = np.asarray(X, dtype=np.float64)
        y = tuple(str(label) for label in y)
        if X.ndim != 2:
            raise ContractError(f"X must be 2-dimensional, got shape {X.shape}")
        if X.shape[1] != len(feature_names):
            raise ContractError(
                f"{len(feature_names)} feature names but {X.shape[1]} columns"
            )
        if X.shape[0] != len(y):
            raise ContractError(f"{X.shape[0]} rows but {len(y)} labels")
        if X.size and not np.all(np.isfinite(X)):
            raise ContractError("feature matrix contains non-finite values")
        X = X.copy()
        X.flags.writeable = False
        self.feature_names = feature_names
        self.X = X
        self.y = y

    def __len__(self) -> int:
        return self.X.shape[0]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Dataset)
            and self.feature_names == other.feature_names
            and self.y == other.y
            and np.array_equal(self.X, other.X)
        )

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    @property
    def classes(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.y)))

    def class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for label in self.y:
            counts[label] = counts.get(label, 0) + 1
        return counts

    def subset(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(self.feature_names, self.X[indices], [self.y[i] for i in indices])

    def to_csv(self, path) -> None:
        """Write ``feature names + class`` with one row per instance."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(list(self.feature_names) + ["class"])
            for row, label in zip(self.X, self.y):
                writer.writerow([_format_cell(v) for v in row] + [label])

    @classmethod
    def from_csv(cls, path) -> "Dataset":
        path = Path(path)
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: file is empty") from None
            if not header or header[-1] != "class":
                raise SchemaError(f"{path}: last column must be 'class'")
            names = header[:-1]
            X, y = [], []
            for rownum, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(header):
                    raise CsvParseError(
                        f"expected {len(header)} fields, found {len(row)}", row=rownum
                    )
                try:
                    X.append([float(v) for v in row[:-1]])
                except ValueError as exc:
                    raise CsvParseError(str(exc), row=rownum) from None
                y.append(row[-1])
        return cls(names, np.array(X, dtype=np.float64).reshape(len(y), len(names)), y)


def _format_cell(value: float) -> str:
    # Integral values print without a trailing .0 so count columns stay readable.
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


@dataclass(frozen=True)
class PartitionPlan:
    """Reproducible train/test index splits over one dataset."""

    scheme: dict
    seed: int
    splits: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.splits)

    def to_json(self) -> str:
        return json.dumps(
            {
                "scheme": self.scheme,
                "seed": self.seed,
                "splits": [
                    {"train": list(train), "test": list(test)}
                    for train, test in self.splits
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PartitionPlan":
        raw = json.loads(text)
        splits = tuple(
            (tuple(s["train"]), tuple(s["test"])) for s in raw["splits"]
        )
        return cls(scheme=raw["scheme"], seed=int(raw["seed"]), splits=splits)


def make_partitions(dataset: Dataset, scheme, seed: int) -> PartitionPlan:
    """Build a stratified partition plan.

    ``scheme`` is either ``{"holdout": fraction}`` (one train/test split with
    ``fraction`` of each class held out) or ``{"folds": k, "repeats": r}``
    (k-fold cross-validation repeated r times; each repeat reshuffles).
    Per-class allocation uses largest-remainder rounding with ties broken by
    class name, so proportions match the whole within one instance per class.
    """
    if len(dataset) == 0:
        raise ContractError("cannot partition an empty dataset")
    by_class: dict[str, list[int]] = {}
    for i, label in enumerate(dataset.y):
        by_class.setdefault(label, []).append(i)

    if "holdout" in scheme:
        fraction = float(scheme["holdout"])
        if not 0.0 < fraction < 1.0:
            raise ContractError(f"holdout fraction must be in (0,1), got {fraction}")
        rng = np.random.default_rng(seed)
        test_quota = _largest_remainder(by_class, fraction)
        train, test = [], []
        for label in sorted(by_class):
            idx = np.array(by_class[label])
            perm = rng.permutation(len(idx))
            cut = test_quota[label]
            test.extend(idx[perm[:cut]].tolist())
            train.extend(idx[perm[cut:]].tolist())
        splits = ((tuple(sorted(train)), tuple(sorted(test))),)
        return PartitionPlan(scheme={"holdout": fraction}, seed=seed, splits=splits)

    if "folds" in scheme:
        k = int(scheme["folds"])
        repeats = int(scheme.get("repeats", 1))
        if k < 2 or repeats < 1:
            raise ContractError(f"need folds >= 2 and repeats >= 1, got {k}x{repeats}")
        for label in sorted(by_class):
            if len(by_class[label]) < k:
                raise StratificationError(
                    f"class {label!r} has {len(by_class[label])} instances, fewer than {k} folds"
                )
        all_indices = set(range(len(dataset)))
        splits = []
        seeds = np.random.SeedSequence(seed).spawn(repeats)
        for rep_seq in seeds:
            rng = np.random.default_rng(rep_seq)
            folds: list[list[int]] = [[] for _ in range(k)]
            for label in sorted(by_class):
                idx = np.array(by_class[label])
                perm = idx[rng.permutation(len(idx))]
                # Deal class members round-robin so fold sizes differ by <= 1.
                for j, i in enumerate(perm.tolist()):
                    folds[j % k].append(i)
            for fold in folds:
                test = tuple(sorted(fold))
                train = tuple(sorted(all_indices.difference(fold)))
                splits.append((train, test))
        return PartitionPlan(
            scheme={"folds": k, "repeats": repeats}, seed=seed, splits=tuple(splits)
        )

    raise ContractError(f"unknown partition scheme {scheme!r}")


def _largest_remainder(by_class: dict[str, list[int]], fraction: float) -> dict[str, int]:
    total = sum(len(v) for v in by_class.values())
    target = round(total * fraction)
    quotas = {label: len(idx) * fraction for label, idx in by_class.items()}
    base = {label: int(np.floor(q)) for label, q in quotas.items()}
    leftover = target - sum(base.values())
    remainders = sorted(
        by_class, key=lambda label: (-(quotas[label] - base[label]), label)
    )
    for label in remainders[: max(leftover, 0)]:
        base[label] += 1
    return base
