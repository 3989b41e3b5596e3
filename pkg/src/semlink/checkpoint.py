"""Versioned JSON checkpoints shared by the NTL model and the two
classifiers.

Floats are serialized as decimal text via Python's shortest-round-trip
repr, so fp64 values survive a save/load cycle exactly and identical
runs produce byte-identical files.
"""

from __future__ import annotations

import json

import numpy as np

from .classifiers import (
    BaselineClassifier,
    FusionClassifier,
)
from .errors import ValidationError
from .ntl import NtlModel, NtlRelationParams

FORMAT_VERSION = 1


def _write(path, document: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh)
        fh.write("\n")


def _read(path, expected_kind: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValidationError(
            f"unsupported checkpoint format_version {version!r}"
        )
    kind = doc.get("kind")
    if kind != expected_kind:
        raise ValidationError(
            f"checkpoint is of kind {kind!r}, expected {expected_kind!r}"
        )
    return doc


def save_ntl(model: NtlModel, path) -> None:
    document = {
        "format_version": FORMAT_VERSION,
        "kind": "ntl",
        "d": model.d,
        "k": model.k,
        "relations": {
            label: {
                # W stored slice-major: k matrices of shape d x d
                "W": np.moveaxis(p.W, 2, 0).tolist(),
                "V": p.V.tolist(),
                "b": p.b.tolist(),
            }
            for label, p in model.relation_params.items()
        },
        "entities": {
            label: model.entity_vectors[label].tolist()
            for label in model.entities
        },
    }
    _write(path, document)


def load_ntl(path) -> NtlModel:
    doc = _read(path, "ntl")
    relations = {
        label: NtlRelationParams(
            W=np.moveaxis(np.array(entry["W"], dtype=np.float64), 0, 2),
            V=np.array(entry["V"], dtype=np.float64),
            b=np.array(entry["b"], dtype=np.float64),
        )
        for label, entry in doc["relations"].items()
    }
    entities = {
        label: np.array(vec, dtype=np.float64)
        for label, vec in doc["entities"].items()
    }
    return NtlModel(doc["d"], doc["k"], relations, entities,
                    list(entities.keys()))


_CLASSIFIER_KINDS = {"baseline": BaselineClassifier,
                     "fusion": FusionClassifier}


def save_classifier(model, kind: str, labels, path) -> None:
    if kind not in _CLASSIFIER_KINDS:
        raise ValidationError(f"unknown classifier kind {kind!r}")
    document = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "labels": list(labels),
        "hyperparams": model.get_params(),
        "params": [p.tolist() for p in model.network_.params()],
    }
    _write(path, document)


def load_classifier(path, kind: str | None = None):
    """Rebuild the estimator and overwrite its network parameters."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    found = doc.get("kind")
    if kind is None:
        kind = found
    doc = _read(path, kind)
    cls = _CLASSIFIER_KINDS.get(kind)
    if cls is None:
        raise ValidationError(f"unknown classifier kind {kind!r}")
    model = cls(**doc["hyperparams"])
    model.network_ = model._build_network()
    model.classes_ = np.arange(len(doc["labels"]))
    stored = doc["params"]
    current = model.network_.params()
    if len(stored) != len(current):
        raise ValidationError("checkpoint parameter count mismatch")
    for target, values in zip(current, stored):
        arr = np.array(values, dtype=np.float64)
        if arr.shape != target.shape:
            raise ValidationError(
                f"checkpoint parameter shape {arr.shape} does not match "
                f"architecture shape {target.shape}"
            )
        target[...] = arr
    return model, doc["labels"]
