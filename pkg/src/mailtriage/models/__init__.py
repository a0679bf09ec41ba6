"""The two classifiers: a one-hidden-layer softmax network and a CART tree."""

from .mlp import (  # noqa: F401
    MlpModel,
    TrainConfig,
    TrainingDiverged,
    loss_and_grads,
    predict,
    predict_proba,
    softmax,
    train_mlp,
)
from .store import ModelFormatError, load_model, save_model  # noqa: F401
from .tree import Leaf, Split, TreeModel, gini, train_tree, tree_predict  # noqa: F401
