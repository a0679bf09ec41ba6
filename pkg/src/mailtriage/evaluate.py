"""Evaluation machinery: stratified splitting, confusion matrices,
classification reports, renderers, and the three-way model comparison.

Zero denominators score 0 by convention (a class never predicted has
precision 0, one with no support has recall 0), and macro averages are
unweighted means of the per-class values.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .augment import DEFAULT_THESAURUS, AugmentConfig, SynonymLexicon
from .labeling import CategorySpec, LabeledEmail
from .models import MlpModel, TrainConfig, TreeModel
from .pipeline import (
    augment_samples,
    classify_clean,
    tokenize_labeled,
    train_nn_from_samples,
    train_tree_from_labeled,
)
from .rng import subrng, subseed


class EvalError(ValueError):
    """Unusable evaluation input."""


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: tuple[tuple[int, ...], ...]  # rows = true, columns = predicted
    categories: tuple[str, ...]

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    per_class: tuple[tuple[str, ClassMetrics], ...]
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    total: int


def stratified_split(
    data: Sequence[LabeledEmail], train_ratio: float, seed: int
) -> tuple[list[LabeledEmail], list[LabeledEmail]]:
    """Per-category shuffled split keeping class proportions.

    Each category contributes floor(ratio * n) samples to train, then the
    categories with the largest remainders gain one extra each until the
    global train size equals round(ratio * total). Union is the input,
    intersection empty.
    """
    if not 0.0 < train_ratio < 1.0:
        raise EvalError("train_ratio must be strictly between 0 and 1")
    by_category: dict[str, list[LabeledEmail]] = {}
    for item in data:
        by_category.setdefault(item.category, []).append(item)
    for name, items in by_category.items():
        if len(items) < 2:
            raise EvalError(f"category {name!r} has {len(items)} sample(s); cannot stratify")

    total = len(data)
    target_train = int(math.floor(train_ratio * total + 0.5))
    rng = subrng(seed, "split")

    shuffled: dict[str, list[LabeledEmail]] = {}
    base: dict[str, int] = {}
    remainders: list[tuple[float, int, str]] = []
    for order, (name, items) in enumerate(by_category.items()):
        perm = rng.permutation(len(items))
        shuffled[name] = [items[int(i)] for i in perm]
        exact = train_ratio * len(items)
        base[name] = int(math.floor(exact))
        remainders.append((exact - base[name], order, name))

    deficit = target_train - sum(base.values())
    # largest remainder first; the original category order breaks ties
    for _, _, name in sorted(remainders, key=lambda r: (-r[0], r[1]))[:deficit]:
        base[name] += 1

    train: list[LabeledEmail] = []
    test: list[LabeledEmail] = []
    for name, items in shuffled.items():
        take = base[name]
        train.extend(items[:take])
        test.extend(items[take:])
    return train, test


def confusion(
    y_true: Sequence[str], y_pred: Sequence[str], categories: Sequence[str]
) -> ConfusionMatrix:
    if len(y_true) != len(y_pred):
        raise EvalError(f"{len(y_true)} true labels but {len(y_pred)} predictions")
    index = {name: i for i, name in enumerate(categories)}
    counts = [[0] * len(categories) for _ in categories]
    for true, pred in zip(y_true, y_pred):
        if true not in index:
            raise EvalError(f"unknown true label {true!r}")
        if pred not in index:
            raise EvalError(f"unknown predicted label {pred!r}")
        counts[index[true]][index[pred]] += 1
    return ConfusionMatrix(
        counts=tuple(tuple(row) for row in counts), categories=tuple(categories)
    )


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def report(cm: ConfusionMatrix) -> EvalReport:
    """Per-class precision/recall/F1/support, accuracy, and macro averages."""
    n = cm.total
    if n == 0:
        raise EvalError("empty confusion matrix")
    counts = np.asarray(cm.counts, dtype=np.int64)
    per_class = []
    for i, name in enumerate(cm.categories):
        tp = int(counts[i, i])
        precision = _safe_div(tp, int(counts[:, i].sum()))
        recall = _safe_div(tp, int(counts[i, :].sum()))
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class.append((name, ClassMetrics(precision, recall, f1, int(counts[i, :].sum()))))
    accuracy = float(np.trace(counts)) / n
    return EvalReport(
        per_class=tuple(per_class),
        accuracy=accuracy,
        macro_precision=sum(m.precision for _, m in per_class) / len(per_class),
        macro_recall=sum(m.recall for _, m in per_class) / len(per_class),
        macro_f1=sum(m.f1 for _, m in per_class) / len(per_class),
        total=n,
    )


def render_confusion(cm: ConfusionMatrix, fmt: str = "csv") -> str:
    """CSV with name headers, or an aligned ASCII grid."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + list(cm.categories))
        for name, row in zip(cm.categories, cm.counts):
            writer.writerow([name] + list(row))
        return buf.getvalue()
    if fmt == "ascii":
        width = max(
            [len(n) for n in cm.categories] + [len(str(v)) for row in cm.counts for v in row]
        )
        header = " " * (width + 2) + "  ".join(n.rjust(width) for n in cm.categories)
        lines = [header]
        for name, row in zip(cm.categories, cm.counts):
            lines.append(name.rjust(width) + "  " + "  ".join(str(v).rjust(width) for v in row))
        return "\n".join(lines) + "\n"
    raise EvalError(f"unknown confusion format {fmt!r}")


def parse_confusion_csv(text: str) -> ConfusionMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or len(rows) < 2:
        raise EvalError("confusion CSV has no data rows")
    categories = tuple(rows[0][1:])
    counts = []
    for row in rows[1:]:
        if len(row) != len(categories) + 1:
            raise EvalError(f"confusion CSV row {row!r} has the wrong width")
        counts.append(tuple(int(v) for v in row[1:]))
    return ConfusionMatrix(counts=tuple(counts), categories=categories)


def format_report(rep: EvalReport) -> str:
    """The classic classification-report table layout."""
    name_width = max([len(n) for n, _ in rep.per_class] + [len("macro avg")])
    lines = [f"{'':>{name_width}}  precision    recall  f1-score   support", ""]
    for name, m in rep.per_class:
        lines.append(
            f"{name:>{name_width}}  {m.precision:>9.2f}  {m.recall:>8.2f}"
            f"  {m.f1:>8.2f}  {m.support:>8d}"
        )
    lines.append("")
    lines.append(f"{'accuracy':>{name_width}}  {'':>9}  {'':>8}  {rep.accuracy:>8.2f}  {rep.total:>8d}")
    lines.append(
        f"{'macro avg':>{name_width}}  {rep.macro_precision:>9.2f}  {rep.macro_recall:>8.2f}"
        f"  {rep.macro_f1:>8.2f}  {rep.total:>8d}"
    )
    return "\n".join(lines) + "\n"


def report_csv(rep: EvalReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["class", "precision", "recall", "f1-score", "support"])
    for name, m in rep.per_class:
        writer.writerow([name, repr(m.precision), repr(m.recall), repr(m.f1), m.support])
    writer.writerow(["accuracy", "", "", repr(rep.accuracy), rep.total])
    writer.writerow(
        ["macro avg", repr(rep.macro_precision), repr(rep.macro_recall), repr(rep.macro_f1), rep.total]
    )
    return buf.getvalue()


@dataclass
class ArmResult:
    name: str
    model: MlpModel | TreeModel
    matrix: ConfusionMatrix
    report: EvalReport


def evaluate_model(
    model: MlpModel | TreeModel,
    test: Sequence[LabeledEmail],
    categories: Sequence[CategorySpec],
) -> tuple[ConfusionMatrix, EvalReport]:
    names = [c.name for c in sorted(categories, key=lambda c: c.rank)]
    y_true = [item.category for item in test]
    y_pred = [classify_clean(model, item.email)[0] for item in test]
    cm = confusion(y_true, y_pred, names)
    return cm, report(cm)


def compare_runs(
    labeled: Sequence[LabeledEmail],
    categories: Sequence[CategorySpec],
    seed: int,
    train_cfg: TrainConfig | None = None,
    aug_cfg: AugmentConfig | None = None,
    lexicon: SynonymLexicon | None = None,
    train_ratio: float = 0.8,
    hidden_units: int = 40,
    dropout_rate: float = 0.5,
) -> dict[str, ArmResult]:
    """Train {nn, nn_augmented, tree} on one shared split and evaluate all
    three on the shared test set. Augmentation touches only the nn_augmented
    arm's training data; the test set is never augmented.

    ``labeled`` is label-source agnostic: keyword-assigned labels for real
    corpora, or the generator's ground truth for synthetic ones.
    """
    train, test = stratified_split(labeled, train_ratio, seed)
    samples = tokenize_labeled(train)
    lexicon = lexicon or DEFAULT_THESAURUS
    aug_cfg = aug_cfg or AugmentConfig(seed=subseed(seed, "augment"))

    base_cfg = train_cfg or TrainConfig()
    results: dict[str, ArmResult] = {}

    nn_cfg = TrainConfig(
        epochs=base_cfg.epochs, learning_rate=base_cfg.learning_rate,
        momentum=base_cfg.momentum, batch_size=base_cfg.batch_size,
        seed=subseed(seed, "train", "nn"),
    )
    nn = train_nn_from_samples(samples, categories, nn_cfg, hidden_units, dropout_rate)
    results["nn"] = ArmResult("nn", nn, *evaluate_model(nn, test, categories))

    aug = augment_samples(samples, categories, aug_cfg, lexicon)
    nn_aug_cfg = TrainConfig(
        epochs=base_cfg.epochs, learning_rate=base_cfg.learning_rate,
        momentum=base_cfg.momentum, batch_size=base_cfg.batch_size,
        seed=subseed(seed, "train", "nn_augmented"),
    )
    nn_aug = train_nn_from_samples(aug, categories, nn_aug_cfg, hidden_units, dropout_rate)
    results["nn_augmented"] = ArmResult(
        "nn_augmented", nn_aug, *evaluate_model(nn_aug, test, categories)
    )

    tree = train_tree_from_labeled(train, categories)
    results["tree"] = ArmResult("tree", tree, *evaluate_model(tree, test, categories))
    return results


def median(values: Sequence[float]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    if n == 0:
        raise EvalError("median of no values")
    mid = n // 2
    return ordered[mid] if n % 2 else (ordered[mid - 1] + ordered[mid]) / 2.0
