"""Feed-forward softmax classifier with one hidden layer.

Architecture: count vector -> dropout -> 40 rectifier units -> dropout ->
softmax over categories. Trained with seeded mini-batch gradient descent
with momentum on cross-entropy loss. Dropout is inverted (activations are
scaled by 1/(1-rate) at train time) so inference needs no scaling, and it
sits after the input layer's output and after the hidden activation.

Everything is float64 and fully determined by (seed, data, config).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..features import Vocabulary


class TrainingDiverged(RuntimeError):
    """Loss became non-finite during training."""


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 50
    learning_rate: float = 0.01
    momentum: float = 0.9
    batch_size: int = 8
    seed: int = 7

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must be in [0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class MlpModel:
    w1: np.ndarray  # (hidden, vocab)
    b1: np.ndarray  # (hidden,)
    w2: np.ndarray  # (categories, hidden)
    b2: np.ndarray  # (categories,)
    hidden_units: int
    dropout_rate: float
    categories: list[str]
    vocab: Vocabulary
    train_loss: list[float] = field(default_factory=list)
    train_accuracy: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        h, d = self.w1.shape
        c = self.w2.shape[0]
        if (
            h != self.hidden_units
            or self.b1.shape != (h,)
            or self.w2.shape != (c, h)
            or self.b2.shape != (c,)
        ):
            raise ValueError("inconsistent weight shapes")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")
        if len(self.categories) != c:
            raise ValueError("category count does not match output layer size")
        if len(self.vocab) != d:
            raise ValueError("vocabulary size does not match input layer size")


def softmax(scores: np.ndarray) -> np.ndarray:
    """Stable softmax along the last axis (max-subtracted before exp)."""
    scores = np.asarray(scores, dtype=np.float64)
    shifted = scores - scores.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def _scores(w1, b1, w2, b2, x2d):
    hidden = np.maximum(x2d @ w1.T + b1, 0.0)
    return hidden @ w2.T + b2


def loss_and_grads(
    w1: np.ndarray,
    b1: np.ndarray,
    w2: np.ndarray,
    b2: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    in_mask: np.ndarray | None = None,
    hid_mask: np.ndarray | None = None,
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy loss and its gradients for a batch.

    ``in_mask``/``hid_mask`` are pre-scaled inverted-dropout masks (entries 0
    or 1/(1-rate)); pass None for a deterministic, dropout-free pass.
    """
    n = x.shape[0]
    xd = x * in_mask if in_mask is not None else x
    z1 = xd @ w1.T + b1
    hidden = np.maximum(z1, 0.0)
    hd = hidden * hid_mask if hid_mask is not None else hidden
    scores = hd @ w2.T + b2

    # log-sum-exp form keeps the loss finite for large scores
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1)) + scores.max(axis=1)
    loss = float(np.mean(log_norm - scores[np.arange(n), y]))

    probs = softmax(scores)
    dscores = probs
    dscores[np.arange(n), y] -= 1.0
    dscores /= n

    dw2 = dscores.T @ hd
    db2 = dscores.sum(axis=0)
    dhd = dscores @ w2
    dhidden = dhd * hid_mask if hid_mask is not None else dhd
    dz1 = dhidden * (z1 > 0.0)
    dw1 = dz1.T @ xd
    db1 = dz1.sum(axis=0)
    return loss, {"w1": dw1, "b1": db1, "w2": dw2, "b2": db2}


def train_mlp(
    x: Sequence[np.ndarray] | np.ndarray,
    y: Sequence[int],
    cfg: TrainConfig,
    categories: Sequence[str],
    vocab: Vocabulary,
    hidden_units: int = 40,
    dropout_rate: float = 0.5,
) -> MlpModel:
    """Train the network for exactly cfg.epochs passes over the data.

    Weights start from seeded uniform(-a, a) with a = sqrt(6/(fan_in +
    fan_out)); biases start at zero. Data is reshuffled each epoch with the
    same seeded generator. Per-epoch loss/accuracy are recorded on the full
    training set with dropout off.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("x must be a non-empty 2D array of feature vectors")
    if x.shape[0] != y.shape[0]:
        raise ValueError(f"{x.shape[0]} feature vectors but {y.shape[0]} labels")
    n, dim = x.shape
    n_classes = len(categories)
    if n_classes == 0:
        raise ValueError("categories must be non-empty")
    if y.min() < 0 or y.max() >= n_classes:
        raise ValueError("label index out of range")
    if dim != len(vocab):
        raise ValueError(f"feature dimension {dim} does not match vocabulary size {len(vocab)}")
    if not 0.0 <= dropout_rate < 1.0:
        raise ValueError("dropout_rate must be in [0, 1)")

    rng = np.random.default_rng(cfg.seed)
    a1 = np.sqrt(6.0 / (dim + hidden_units))
    a2 = np.sqrt(6.0 / (hidden_units + n_classes))
    w1 = rng.uniform(-a1, a1, size=(hidden_units, dim))
    b1 = np.zeros(hidden_units)
    w2 = rng.uniform(-a2, a2, size=(n_classes, hidden_units))
    b2 = np.zeros(n_classes)
    vel = {"w1": np.zeros_like(w1), "b1": np.zeros_like(b1),
           "w2": np.zeros_like(w2), "b2": np.zeros_like(b2)}
    params = {"w1": w1, "b1": b1, "w2": w2, "b2": b2}

    keep = 1.0 - dropout_rate
    loss_history: list[float] = []
    acc_history: list[float] = []
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n)
        for start in range(0, n, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            xb, yb = x[batch], y[batch]
            if dropout_rate > 0.0:
                in_mask = (rng.random(xb.shape) >= dropout_rate) / keep
                hid_mask = (rng.random((len(batch), hidden_units)) >= dropout_rate) / keep
            else:
                in_mask = hid_mask = None
            loss, grads = loss_and_grads(
                params["w1"], params["b1"], params["w2"], params["b2"],
                xb, yb, in_mask, hid_mask,
            )
            if not np.isfinite(loss):
                raise TrainingDiverged(f"non-finite loss at epoch {epoch}")
            for key in params:
                vel[key] = cfg.momentum * vel[key] - cfg.learning_rate * grads[key]
                params[key] = params[key] + vel[key]

        scores = _scores(params["w1"], params["b1"], params["w2"], params["b2"], x)
        epoch_loss, _ = loss_and_grads(
            params["w1"], params["b1"], params["w2"], params["b2"], x, y
        )
        if not np.isfinite(epoch_loss):
            raise TrainingDiverged(f"non-finite loss at epoch {epoch}")
        loss_history.append(epoch_loss)
        acc_history.append(float(np.mean(scores.argmax(axis=1) == y)))

    return MlpModel(
        w1=params["w1"], b1=params["b1"], w2=params["w2"], b2=params["b2"],
        hidden_units=hidden_units,
        dropout_rate=dropout_rate,
        categories=list(categories),
        vocab=vocab,
        train_loss=loss_history,
        train_accuracy=acc_history,
    )


def predict_proba(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Probability distribution over the model's categories; dropout inactive."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (len(model.vocab),):
        raise ValueError(
            f"feature vector has dimension {x.shape}, expected ({len(model.vocab)},)"
        )
    scores = _scores(model.w1, model.b1, model.w2, model.b2, x[np.newaxis, :])
    return softmax(scores)[0]


def predict(model: MlpModel, x: np.ndarray) -> tuple[str, float]:
    """Most probable category and its probability; ties go to the lowest rank."""
    probs = predict_proba(model, x)
    best = int(np.argmax(probs))  # argmax returns the first maximum
    return model.categories[best], float(probs[best])
