"""Versioned model persistence.

One JSON artifact per model holding everything prediction needs: the
category order, the vocabulary or flattened keyword list, the parameters,
the training config, and recorded training metrics. JSON float round-trip
is exact for float64, so loaded models predict identically.
"""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..features import Vocabulary
from .mlp import MlpModel, TrainConfig
from .tree import Leaf, Node, Split, TreeModel

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """Corrupt or incompatible model artifact."""


def _node_to_dict(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"kind": "leaf", "counts": list(node.counts)}
    return {
        "kind": "split",
        "feature": node.feature,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(data: dict, where: str) -> Node:
    kind = data.get("kind")
    if kind == "leaf":
        counts = data.get("counts")
        if not isinstance(counts, list) or not counts:
            raise ModelFormatError(f"{where}: bad leaf counts")
        return Leaf(counts=tuple(int(c) for c in counts))
    if kind == "split":
        try:
            return Split(
                feature=int(data["feature"]),
                left=_node_from_dict(data["left"], where),
                right=_node_from_dict(data["right"], where),
            )
        except (KeyError, TypeError) as exc:
            raise ModelFormatError(f"{where}: malformed split node") from exc
    raise ModelFormatError(f"{where}: unknown node kind {kind!r}")


def save_model(model: MlpModel | TreeModel, path: str | Path, train_config: TrainConfig | None = None) -> None:
    if isinstance(model, MlpModel):
        artifact = {
            "format_version": FORMAT_VERSION,
            "model_kind": "mlp",
            "categories": model.categories,
            "vocab": list(model.vocab.terms),
            "parameters": {
                "w1": model.w1.tolist(),
                "b1": model.b1.tolist(),
                "w2": model.w2.tolist(),
                "b2": model.b2.tolist(),
                "hidden_units": model.hidden_units,
                "dropout_rate": model.dropout_rate,
            },
            "train_config": asdict(train_config) if train_config else None,
            "metrics": {
                "train_loss": model.train_loss,
                "train_accuracy": model.train_accuracy,
            },
        }
    elif isinstance(model, TreeModel):
        artifact = {
            "format_version": FORMAT_VERSION,
            "model_kind": "tree",
            "categories": model.categories,
            "feature_names": model.feature_names,
            "parameters": {"root": _node_to_dict(model.root)},
            "train_config": asdict(train_config) if train_config else None,
            "metrics": {},
        }
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    Path(path).write_text(json.dumps(artifact, sort_keys=True) + "\n", encoding="utf-8")


def _require(artifact: dict, field: str):
    if field not in artifact or artifact[field] is None:
        raise ModelFormatError(f"model artifact missing field {field!r}")
    return artifact[field]


def load_model(path: str | Path) -> MlpModel | TreeModel:
    try:
        artifact = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model artifact {path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(artifact, dict):
        raise ModelFormatError("model artifact: expected a JSON object")

    version = _require(artifact, "format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported format_version {version!r} (this build reads {FORMAT_VERSION})"
        )
    kind = _require(artifact, "model_kind")
    categories = [str(c) for c in _require(artifact, "categories")]
    params = _require(artifact, "parameters")
    metrics = artifact.get("metrics") or {}

    if kind == "mlp":
        vocab = Vocabulary.from_terms([str(t) for t in _require(artifact, "vocab")])
        try:
            return MlpModel(
                w1=np.asarray(params["w1"], dtype=np.float64),
                b1=np.asarray(params["b1"], dtype=np.float64),
                w2=np.asarray(params["w2"], dtype=np.float64),
                b2=np.asarray(params["b2"], dtype=np.float64),
                hidden_units=int(params["hidden_units"]),
                dropout_rate=float(params["dropout_rate"]),
                categories=categories,
                vocab=vocab,
                train_loss=[float(v) for v in metrics.get("train_loss", [])],
                train_accuracy=[float(v) for v in metrics.get("train_accuracy", [])],
            )
        except KeyError as exc:
            raise ModelFormatError(f"model artifact missing parameter {exc.args[0]!r}") from exc
    if kind == "tree":
        feature_names = [str(f) for f in _require(artifact, "feature_names")]
        if "root" not in params:
            raise ModelFormatError("model artifact missing parameter 'root'")
        root = _node_from_dict(params["root"], "parameters.root")
        return TreeModel(root=root, categories=categories, feature_names=feature_names)
    raise ModelFormatError(f"unknown model_kind {kind!r}")


def artifact_info(path: str | Path) -> dict:
    """Cheap metadata peek used by the service health endpoint."""
    artifact = json.loads(Path(path).read_text(encoding="utf-8"))
    return {
        "format_version": artifact.get("format_version"),
        "model_kind": artifact.get("model_kind"),
    }
