"""Tree learners grown by weighted Gini minimization: CART, random forest,
and multi-class AdaBoost over shallow trees.

Split search is a vectorized sorted sweep per candidate feature. Zero-gain
splits are allowed on impure nodes (required to solve XOR-style layouts);
recursion cannot loop because both children must hold at least ``min_leaf``
rows. Tie-breaks are deterministic: lowest feature index, then lowest
threshold.
"""

from __future__ import annotations

import numpy as np

from ..errors import ContractError
from .base import Model, class_indices


class TreeNode:
    __slots__ = ("feature", "threshold", "left", "right", "n", "class_counts")

    def __init__(self, n, class_counts, feature=None, threshold=0.0, left=None, right=None):
        self.feature = feature
        self.threshold = threshold
        self.left = left
        self.right = right
        self.n = n
        self.class_counts = class_counts

    def is_leaf(self) -> bool:
        return self.feature is None

    def to_jsonable(self) -> dict:
        out = {"n": float(self.n), "counts": self.class_counts.tolist()}
        if not self.is_leaf():
            out.update(
                feature=int(self.feature),
                threshold=float(self.threshold),
                left=self.left.to_jsonable(),
                right=self.right.to_jsonable(),
            )
        return out

    @classmethod
    def from_jsonable(cls, raw: dict) -> "TreeNode":
        node = cls(n=float(raw["n"]), class_counts=np.array(raw["counts"], dtype=np.float64))
        if "feature" in raw:
            node.feature = int(raw["feature"])
            node.threshold = float(raw["threshold"])
            node.left = cls.from_jsonable(raw["left"])
            node.right = cls.from_jsonable(raw["right"])
        return node


def _gini(counts: np.ndarray, total: float) -> float:
    if total <= 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.dot(p, p))


def _best_split(X, y_idx, w, n_classes, feature_ids, min_leaf):
    """Return (gain, feature, threshold) of the best axis split, or None.

    ``gain`` is the weighted impurity decrease of the node itself; min_leaf
    is enforced on unweighted row counts.
    """
    n = X.shape[0]
    total_w = float(w.sum())
    counts_total = np.bincount(y_idx, weights=w, minlength=n_classes)
    parent_gini = _gini(counts_total, total_w)
    best = None
    for f in feature_ids:
        col = X[:, f]
        order = np.argsort(col, kind="stable")
        sv = col[order]
        sw_onehot = np.zeros((n, n_classes), dtype=np.float64)
        sw_onehot[np.arange(n), y_idx[order]] = w[order]
        boundaries = np.nonzero(sv[1:] != sv[:-1])[0]
        if boundaries.size == 0:
            continue
        valid = boundaries[
            (boundaries + 1 >= min_leaf) & (n - boundaries - 1 >= min_leaf)
        ]
        if valid.size == 0:
            continue
        cum = np.cumsum(sw_onehot, axis=0)
        left_counts = cum[valid]
        right_counts = counts_total - left_counts
        wl = left_counts.sum(axis=1)
        wr = right_counts.sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            gini_l = 1.0 - np.sum((left_counts / np.maximum(wl, 1e-300)[:, None]) ** 2, axis=1)
            gini_r = 1.0 - np.sum((right_counts / np.maximum(wr, 1e-300)[:, None]) ** 2, axis=1)
        gains = parent_gini - (wl * gini_l + wr * gini_r) / total_w
        k = int(np.argmax(gains))  # first max -> lowest threshold
        if best is None or gains[k] > best[0]:
            pos = valid[k]
            best = (float(gains[k]), int(f), float((sv[pos] + sv[pos + 1]) / 2.0))
    return best


def grow_tree(
    X,
    y_idx,
    w,
    n_classes: int,
    max_depth=None,
    min_leaf: int = 1,
    max_features=None,
    rng=None,
    importance_out=None,
):
    """Grow one tree; ``importance_out`` accumulates weighted Gini decreases.

    ``max_features`` < n_features draws a fresh feature subsample per node
    (the random forest behaviour) from ``rng``.
    """
    n_features = X.shape[1]
    total_w = float(w.sum())
    root_box: list = [None]
    stack = [(np.arange(X.shape[0]), 0, root_box, 0)]
    while stack:
        rows, depth, box, slot = stack.pop()
        sub_w = w[rows]
        counts = np.bincount(y_idx[rows], weights=sub_w, minlength=n_classes)
        node = TreeNode(n=float(sub_w.sum()), class_counts=counts)
        box[slot] = node
        pure = np.count_nonzero(counts) <= 1
        if pure or len(rows) < 2 * min_leaf or (max_depth is not None and depth >= max_depth):
            continue
        if max_features is not None and max_features < n_features:
            feature_ids = np.sort(rng.choice(n_features, size=max_features, replace=False))
        else:
            feature_ids = np.arange(n_features)
        found = _best_split(X[rows], y_idx[rows], sub_w, n_classes, feature_ids, min_leaf)
        if found is None:
            continue
        gain, feature, threshold = found
        if importance_out is not None:
            importance_out[feature] += max(gain, 0.0) * node.n / total_w
        node.feature = feature
        node.threshold = threshold
        go_left = X[rows, feature] <= threshold
        children: list = [None, None]
        node.left, node.right = children, children  # placeholders, fixed below
        stack.append((rows[go_left], depth + 1, children, 0))
        stack.append((rows[~go_left], depth + 1, children, 1))
        node.left = children  # list shared; resolved in _resolve pass
    _resolve_children(root_box[0])
    return root_box[0]


def _resolve_children(node: TreeNode) -> None:
    stack = [node]
    while stack:
        cur = stack.pop()
        if cur.is_leaf():
            continue
        children = cur.left  # the shared placeholder list
        cur.left, cur.right = children[0], children[1]
        stack.append(cur.left)
        stack.append(cur.right)


def tree_apply(node: TreeNode, X: np.ndarray) -> list[TreeNode]:
    leaves = []
    for x in X:
        cur = node
        while not cur.is_leaf():
            cur = cur.left if x[cur.feature] <= cur.threshold else cur.right
        leaves.append(cur)
    return leaves


def tree_proba(node: TreeNode, X: np.ndarray, n_classes: int) -> np.ndarray:
    out = np.empty((X.shape[0], n_classes), dtype=np.float64)
    for i, leaf in enumerate(tree_apply(node, X)):
        out[i] = leaf.class_counts / leaf.n
    return out


class CartModel(Model):
    """Single Gini decision tree; the source of extractable if-then rules."""

    def _fit(self, X, y, seed, params):
        self.root = None
        y_idx = class_indices(y, self.classes)
        w = np.ones(len(y), dtype=np.float64)
        self._importances = np.zeros(X.shape[1], dtype=np.float64)
        self.root = grow_tree(
            X,
            y_idx,
            w,
            n_classes=len(self.classes),
            max_depth=params["max_depth"],
            min_leaf=params["min_leaf"],
            importance_out=self._importances,
        )

    def _raw_proba(self, X):
        return tree_proba(self.root, X, len(self.classes))

    def feature_importance(self) -> np.ndarray:
        total = self._importances.sum()
        if total > 0:
            return self._importances / total
        return self._importances.copy()

    def _params_to_jsonable(self) -> dict:
        return {"tree": self.root.to_jsonable(), "importances": self._importances.tolist()}

    def _load_params(self, params: dict) -> None:
        self.root = TreeNode.from_jsonable(params["tree"])
        self._importances = np.array(params["importances"], dtype=np.float64)


class ForestModel(Model):
    """Bagged Gini trees with per-node feature subsampling.

    Out-of-bag class distributions are kept on the fitted model (not
    serialized); rows that were in every bootstrap fall back to the
    training prior so every row still carries a valid distribution.
    """

    def _fit(self, X, y, seed, params):
        rng = np.random.default_rng(seed)
        n, p = X.shape
        y_idx = class_indices(y, self.classes)
        k = len(self.classes)
        n_trees = params["n_trees"]
        if params["max_features"] == "sqrt":
            max_features = max(1, int(np.sqrt(p)))
        else:
            max_features = min(int(params["max_features"]), p)
        self.trees = []
        self._importances = np.zeros(p, dtype=np.float64)
        oob_votes = np.zeros((n, k), dtype=np.float64)
        oob_counts = np.zeros(n, dtype=np.float64)
        for _ in range(n_trees):
            boot = rng.integers(0, n, size=n)
            w = np.ones(n, dtype=np.float64)
            tree = grow_tree(
                X[boot],
                y_idx[boot],
                w,
                n_classes=k,
                max_depth=params["max_depth"],
                min_leaf=params["min_leaf"],
                max_features=max_features,
                rng=rng,
                importance_out=self._importances,
            )
            self.trees.append(tree)
            oob = np.setdiff1d(np.arange(n), boot, assume_unique=False)
            if oob.size:
                oob_votes[oob] += tree_proba(tree, X[oob], k)
                oob_counts[oob] += 1.0
        prior = np.bincount(y_idx, minlength=k).astype(np.float64) / n
        covered = oob_counts > 0
        self.oob_proba = np.tile(prior, (n, 1))
        self.oob_proba[covered] = oob_votes[covered] / oob_counts[covered, None]

    def _raw_proba(self, X):
        total = np.zeros((X.shape[0], len(self.classes)), dtype=np.float64)
        for tree in self.trees:
            total += tree_proba(tree, X, len(self.classes))
        return total / len(self.trees)

    def feature_importance(self) -> np.ndarray:
        total = self._importances.sum()
        if total > 0:
            return self._importances / total
        return self._importances.copy()

    def _params_to_jsonable(self) -> dict:
        return {
            "trees": [t.to_jsonable() for t in self.trees],
            "importances": self._importances.tolist(),
        }

    def _load_params(self, params: dict) -> None:
        self.trees = [TreeNode.from_jsonable(t) for t in params["trees"]]
        self._importances = np.array(params["importances"], dtype=np.float64)
        self.oob_proba = None


class AdaBoostModel(Model):
    """SAMME boosting of depth-capped Gini trees with hard votes."""

    def _fit(self, X, y, seed, params):
        n = X.shape[0]
        k = len(self.classes)
        y_idx = class_indices(y, self.classes)
        w = np.full(n, 1.0 / n, dtype=np.float64)
        self.trees, self.alphas = [], []
        self._importances = np.zeros(X.shape[1], dtype=np.float64)
        for _ in range(params["n_rounds"]):
            round_imp = np.zeros(X.shape[1], dtype=np.float64)
            tree = grow_tree(
                X,
                y_idx,
                w,
                n_classes=k,
                max_depth=params["max_depth"],
                min_leaf=1,
                importance_out=round_imp,
            )
            pred = np.argmax(tree_proba(tree, X, k), axis=1)
            miss = pred != y_idx
            err = float(w[miss].sum())
            if err <= 0.0:
                # Perfect member dominates; further rounds cannot help.
                self.trees.append(tree)
                self.alphas.append(np.log((1.0 - 1e-10) / 1e-10) + np.log(k - 1.0))
                self._importances += self.alphas[-1] * round_imp
                break
            if err >= 1.0 - 1.0 / k:
                if not self.trees:  # keep one member so predictions stay defined
                    self.trees.append(tree)
                    self.alphas.append(1.0)
                    self._importances += round_imp
                break
            alpha = float(np.log((1.0 - err) / err) + np.log(k - 1.0))
            self.trees.append(tree)
            self.alphas.append(alpha)
            self._importances += alpha * round_imp
            w = w * np.exp(alpha * miss)
            w = w / w.sum()

    def _raw_proba(self, X):
        k = len(self.classes)
        votes = np.zeros((X.shape[0], k), dtype=np.float64)
        for tree, alpha in zip(self.trees, self.alphas):
            pred = np.argmax(tree_proba(tree, X, k), axis=1)
            votes[np.arange(X.shape[0]), pred] += alpha
        if not np.all(votes.sum(axis=1) > 0):
            raise ContractError("adaboost produced an empty vote row")
        return votes

    def feature_importance(self) -> np.ndarray:
        total = self._importances.sum()
        if total > 0:
            return self._importances / total
        return self._importances.copy()

    def _params_to_jsonable(self) -> dict:
        return {
            "trees": [t.to_jsonable() for t in self.trees],
            "alphas": list(self.alphas),
            "importances": self._importances.tolist(),
        }

    def _load_params(self, params: dict) -> None:
        self.trees = [TreeNode.from_jsonable(t) for t in params["trees"]]
        self.alphas = [float(a) for a in params["alphas"]]
        self._importances = np.array(params["importances"], dtype=np.float64)
