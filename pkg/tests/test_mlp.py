"""Network tests: softmax properties, gradient checks against central
finite differences, overfit sanity, and determinism."""
import numpy as np
import pytest

from mailtriage.features import Vocabulary
from mailtriage.models import (
    MlpModel,
    TrainConfig,
    TrainingDiverged,
    loss_and_grads,
    predict,
    predict_proba,
    softmax,
    train_mlp,
)


def _vocab(dim):
    return Vocabulary.from_terms([f"w{i:03d}" for i in range(dim)])


def _zero_model(dim=3, classes=5):
    return MlpModel(
        w1=np.zeros((4, dim)),
        b1=np.zeros(4),
        w2=np.zeros((classes, 4)),
        b2=np.zeros(classes),
        hidden_units=4,
        dropout_rate=0.0,
        categories=[f"c{i}" for i in range(classes)],
        vocab=_vocab(dim),
    )


def test_zero_weights_give_uniform_probabilities():
    model = _zero_model()
    probs = predict_proba(model, np.array([1.0, 2.0, 3.0]))
    assert np.allclose(probs, 0.2, atol=1e-12)


def test_softmax_properties_on_random_logits():
    rng = np.random.default_rng(123)
    for _ in range(1000):
        logits = rng.normal(scale=rng.uniform(0.1, 50), size=rng.integers(2, 8))
        probs = softmax(logits)
        assert (probs >= 0).all()
        assert abs(probs.sum() - 1.0) <= 1e-9
        shift = softmax(logits + rng.uniform(-100, 100))
        assert np.argmax(shift) == np.argmax(probs)
        assert np.allclose(shift, probs, atol=1e-9)


def test_softmax_handles_extreme_logits():
    probs = softmax(np.array([1e4, 0.0, -1e4]))
    assert np.isfinite(probs).all()
    assert abs(probs.sum() - 1.0) <= 1e-9


def _finite_difference_grads(w1, b1, w2, b2, x, y, eps=1e-6):
    """Independent oracle: central differences on every parameter."""
    grads = {}
    params = {"w1": w1.copy(), "b1": b1.copy(), "w2": w2.copy(), "b2": b2.copy()}
    for key, value in params.items():
        grad = np.zeros_like(value)
        flat = value.ravel()
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + eps
            up, _ = loss_and_grads(params["w1"], params["b1"], params["w2"], params["b2"], x, y)
            flat[i] = original - eps
            down, _ = loss_and_grads(params["w1"], params["b1"], params["w2"], params["b2"], x, y)
            flat[i] = original
            grad.ravel()[i] = (up - down) / (2 * eps)
        grads[key] = grad
    return grads


def test_gradients_match_finite_differences():
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 6))
        dim = int(rng.integers(3, 7))
        hidden = int(rng.integers(2, 5))
        classes = int(rng.integers(2, 5))
        w1 = rng.normal(scale=0.7, size=(hidden, dim))
        b1 = rng.normal(scale=0.3, size=hidden)
        w2 = rng.normal(scale=0.7, size=(classes, hidden))
        b2 = rng.normal(scale=0.3, size=classes)
        x = rng.normal(size=(n, dim))
        y = rng.integers(0, classes, size=n)
        _, analytic = loss_and_grads(w1, b1, w2, b2, x, y)
        numeric = _finite_difference_grads(w1, b1, w2, b2, x, y)
        for key in analytic:
            denom = np.maximum(np.maximum(np.abs(analytic[key]), np.abs(numeric[key])), 1e-8)
            worst = max(worst, float(np.max(np.abs(analytic[key] - numeric[key]) / denom)))
    assert worst <= 1e-4, f"max relative gradient error {worst}"


def _toy_set(rng, n=20, dim=6, classes=4):
    x = rng.integers(0, 2, size=(n, dim)).astype(np.float64)
    y = rng.integers(0, classes, size=n)
    x[np.arange(n), y] += 5.0  # make each class separable via its own feature
    return x, [int(v) for v in y]


def test_overfits_toy_set_without_dropout():
    rng = np.random.default_rng(5)
    x, y = _toy_set(rng)
    cfg = TrainConfig(epochs=200, seed=1)
    model = train_mlp(x, y, cfg, ["a", "b", "c", "d"], _vocab(6), hidden_units=16, dropout_rate=0.0)
    assert model.train_accuracy[-1] == 1.0
    assert len(model.train_loss) == 200


def test_training_is_bit_deterministic():
    rng = np.random.default_rng(8)
    x, y = _toy_set(rng)
    cfg = TrainConfig(epochs=10, seed=42)
    kwargs = dict(categories=["a", "b", "c", "d"], vocab=_vocab(6), dropout_rate=0.5)
    m1 = train_mlp(x, y, cfg, hidden_units=8, **kwargs)
    m2 = train_mlp(x, y, cfg, hidden_units=8, **kwargs)
    assert np.array_equal(m1.w1, m2.w1)
    assert np.array_equal(m1.b1, m2.b1)
    assert np.array_equal(m1.w2, m2.w2)
    assert np.array_equal(m1.b2, m2.b2)
    assert m1.train_loss == m2.train_loss


def test_full_batch_descent_loss_non_increasing():
    # plain gradient descent (no momentum, no dropout, full batch)
    rng = np.random.default_rng(21)
    x, y = _toy_set(rng)
    cfg = TrainConfig(epochs=60, learning_rate=0.01, momentum=0.0, batch_size=len(y), seed=3)
    model = train_mlp(x, y, cfg, ["a", "b", "c", "d"], _vocab(6), dropout_rate=0.0)
    losses = model.train_loss
    assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))


def test_diverging_training_raises_with_epoch():
    rng = np.random.default_rng(2)
    x, y = _toy_set(rng)
    cfg = TrainConfig(epochs=30, learning_rate=1e15, seed=1)
    with pytest.raises(TrainingDiverged, match="epoch"):
        train_mlp(x, y, cfg, ["a", "b", "c", "d"], _vocab(6), dropout_rate=0.0)


def test_predict_argmax_and_confidence():
    model = _zero_model(dim=3, classes=5)
    # biases give an exact softmax of [0.1, 0.6, 0.1, 0.1, 0.1] up to rounding
    model.b2 = np.log(np.array([0.1, 0.6, 0.1, 0.1, 0.1]))
    category, confidence = predict(model, np.zeros(3))
    assert category == "c1"
    assert confidence == pytest.approx(0.6)


def test_predict_tie_breaks_to_lowest_rank():
    model = _zero_model()
    category, confidence = predict(model, np.array([1.0, 0.0, 2.0]))
    assert category == "c0"
    assert confidence == pytest.approx(0.2)


def test_predict_rejects_wrong_dimension():
    model = _zero_model(dim=3)
    with pytest.raises(ValueError, match="dimension"):
        predict_proba(model, np.zeros(4))


def test_train_input_validation():
    vocab = _vocab(3)
    cfg = TrainConfig(epochs=1, seed=0)
    with pytest.raises(ValueError):
        train_mlp(np.zeros((2, 3)), [0], cfg, ["a", "b"], vocab)  # length mismatch
    with pytest.raises(ValueError):
        train_mlp(np.zeros((2, 4)), [0, 1], cfg, ["a", "b"], vocab)  # dim vs vocab
    with pytest.raises(ValueError):
        train_mlp(np.zeros((2, 3)), [0, 5], cfg, ["a", "b"], vocab)  # label range
    with pytest.raises(ValueError):
        TrainConfig(momentum=1.0)
    with pytest.raises(ValueError):
        TrainConfig(epochs=0)


def test_dropout_training_still_learns():
    rng = np.random.default_rng(31)
    x, y = _toy_set(rng, n=40)
    cfg = TrainConfig(epochs=120, seed=4)
    model = train_mlp(x, y, cfg, ["a", "b", "c", "d"], _vocab(6), dropout_rate=0.5)
    assert model.train_accuracy[-1] >= 0.9
