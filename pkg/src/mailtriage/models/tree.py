"""CART decision tree over binary keyword vectors.

Greedy recursive splitting by maximal Gini-impurity decrease. Candidate
features are those not yet tested on the path with both branches non-empty;
growth stops on purity, on a depth limit, or when no split has positive
gain. Gain comparisons use exact rational arithmetic so tie-breaking
(lowest feature index) is never at the mercy of float rounding. No pruning:
the tree is allowed to overfit, which is the behaviour under study.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np


@dataclass(frozen=True)
class Leaf:
    counts: tuple[int, ...]  # per-category training sample counts


@dataclass(frozen=True)
class Split:
    feature: int
    left: "Node"  # feature value 0
    right: "Node"  # feature value 1


Node = Union[Leaf, Split]


@dataclass
class TreeModel:
    root: Node
    categories: list[str]
    feature_names: list[str]


def gini(counts: Sequence[int]) -> float:
    """Gini impurity of a node with the given per-class counts."""
    total = sum(counts)
    if total == 0:
        return 0.0
    return 1.0 - sum((c / total) ** 2 for c in counts)


def _split_quality(left_counts: np.ndarray, right_counts: np.ndarray) -> Fraction:
    # Maximising sum(l^2)/n_L + sum(r^2)/n_R is equivalent to maximising the
    # Gini gain at a fixed parent node; kept rational for exact comparisons.
    n_left = int(left_counts.sum())
    n_right = int(right_counts.sum())
    return Fraction(int((left_counts**2).sum()), n_left) + Fraction(
        int((right_counts**2).sum()), n_right
    )


def _build(
    x: np.ndarray,
    y: np.ndarray,
    idx: np.ndarray,
    used: frozenset[int],
    depth: int,
    max_depth: int | None,
    n_classes: int,
) -> Node:
    counts = np.bincount(y[idx], minlength=n_classes)
    leaf = Leaf(counts=tuple(int(c) for c in counts))
    if np.count_nonzero(counts) <= 1:
        return leaf
    if max_depth is not None and depth >= max_depth:
        return leaf

    n = len(idx)
    parent_quality = Fraction(int((counts.astype(np.int64) ** 2).sum()), n)
    best_feature = -1
    best_quality = parent_quality  # a split must beat this to have positive gain
    for feature in range(x.shape[1]):
        if feature in used:
            continue
        ones = x[idx, feature] == 1
        n_right = int(ones.sum())
        if n_right == 0 or n_right == n:
            continue
        right_counts = np.bincount(y[idx[ones]], minlength=n_classes)
        quality = _split_quality(counts - right_counts, right_counts)
        if quality > best_quality:  # strict: ties keep the lowest feature index
            best_quality = quality
            best_feature = feature

    if best_feature < 0:
        return leaf
    ones = x[idx, best_feature] == 1
    child_used = used | {best_feature}
    return Split(
        feature=best_feature,
        left=_build(x, y, idx[~ones], child_used, depth + 1, max_depth, n_classes),
        right=_build(x, y, idx[ones], child_used, depth + 1, max_depth, n_classes),
    )


def train_tree(
    x: Sequence[np.ndarray] | np.ndarray,
    y: Sequence[int],
    max_depth: int | None = None,
    *,
    categories: Sequence[str],
    feature_names: Sequence[str],
) -> TreeModel:
    x = np.asarray(x)
    y = np.asarray(y, dtype=np.int64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("x must be a non-empty 2D array of binary vectors")
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"{x.shape[0]} feature vectors but {y.shape[0]} labels")
    if not np.isin(x, (0, 1)).all():
        raise ValueError("non-binary feature value in training data")
    if x.shape[1] != len(feature_names):
        raise ValueError("feature dimension does not match feature_names")
    n_classes = len(categories)
    if y.min() < 0 or y.max() >= n_classes:
        raise ValueError("label index out of range")
    x = x.astype(np.int64)

    root = _build(x, y, np.arange(len(y)), frozenset(), 0, max_depth, n_classes)
    return TreeModel(root=root, categories=list(categories), feature_names=list(feature_names))


def tree_predict(model: TreeModel, x: Sequence[int] | np.ndarray) -> tuple[str, float]:
    """Walk to a leaf; return its majority category and the majority fraction."""
    x = np.asarray(x)
    if x.shape != (len(model.feature_names),):
        raise ValueError(
            f"feature vector has dimension {x.shape}, expected ({len(model.feature_names)},)"
        )
    if not np.isin(x, (0, 1)).all():
        raise ValueError("non-binary feature value")
    node = model.root
    while isinstance(node, Split):
        node = node.right if x[node.feature] == 1 else node.left
    counts = node.counts
    best = max(range(len(counts)), key=lambda i: (counts[i], -i))
    return model.categories[best], counts[best] / sum(counts)
