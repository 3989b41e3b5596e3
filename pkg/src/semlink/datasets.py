"""Ingestion of feature records, raw detections, and the label
vocabulary, plus the feature-matrix builders the classifiers consume.

File formats (one JSON object per line):
  features.jsonl   {"image_id": str, "label": str, "entities": [str],
                    "vgg": [4096 numbers]}
  detections.jsonl {"image_id": str, "boxes": [{"x_min": n, "y_min": n,
                    "x_max": n, "y_max": n, "score": n, "label": str}]}
  labels.txt       12 lines, one class label each
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .boxes import DetBox
from .embeddings import WordVectorTable, embed_entity_set_or_zero
from .errors import FileFormatError, ValidationError

FEATURE_DIM = 4096

# Class labels as published, kept as data rather than code; the
# "Utencils" spelling is deliberate.
DEFAULT_LABELS = [
    "Human with animals",
    "Tennis racket",
    "Baseball",
    "Sportsball",
    "Person snowboarding",
    "Kitchen electronics",
    "Living room",
    "Traffic",
    "Utencils",
    "Person with bags",
    "Animals",
    "Human with Umbrella",
]


class LabelVocabulary:
    """Exactly 12 unique class labels with stable one-hot positions."""

    SIZE = 12

    def __init__(self, labels=None):
        labels = list(DEFAULT_LABELS if labels is None else labels)
        if len(labels) != self.SIZE:
            raise ValidationError(
                f"vocabulary must have exactly {self.SIZE} labels, "
                f"got {len(labels)}"
            )
        if len(set(labels)) != len(labels):
            raise ValidationError("vocabulary labels must be unique")
        self.labels = labels
        self._index = {label: i for i, label in enumerate(labels)}

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label):
        return label in self._index

    def index(self, label: str) -> int:
        if label not in self._index:
            raise ValidationError(f"unknown class label {label!r}")
        return self._index[label]

    def label(self, index: int) -> str:
        return self.labels[index]

    @classmethod
    def from_file(cls, path) -> "LabelVocabulary":
        with open(path, encoding="utf-8") as fh:
            labels = [line.strip() for line in fh if line.strip()]
        return cls(labels)

    def to_file(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for label in self.labels:
                fh.write(label + "\n")


@dataclass
class FeatureRecord:
    image_id: str
    label: str
    entity_labels: list[str]
    image_feature: np.ndarray


class Dataset:
    """Validated, ordered feature records with unique image ids."""

    def __init__(self, vocabulary: LabelVocabulary, records=()):
        self.vocabulary = vocabulary
        self.records: list[FeatureRecord] = []
        self._ids: set[str] = set()
        for r in records:
            self.append(r)

    def append(self, record: FeatureRecord) -> None:
        if record.image_id in self._ids:
            raise ValidationError(f"duplicate image_id {record.image_id!r}")
        if record.label not in self.vocabulary:
            raise ValidationError(f"unknown class label {record.label!r}")
        if record.image_feature.shape != (FEATURE_DIM,):
            raise ValidationError(
                f"image feature must have length {FEATURE_DIM}, "
                f"got {record.image_feature.shape[0]}"
            )
        self._ids.add(record.image_id)
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def labels_as_indices(self) -> np.ndarray:
        return np.array(
            [self.vocabulary.index(r.label) for r in self.records],
            dtype=np.int64,
        )


def _required(obj, key, lineno, path):
    if key not in obj:
        raise FileFormatError(f"missing field {key!r}", path=path,
                              line=lineno)
    return obj[key]


def read_features(path, vocabulary: LabelVocabulary) -> Dataset:
    """Read and validate a features.jsonl file; every malformed line is
    reported with its 1-based line number."""
    dataset = Dataset(vocabulary)
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise FileFormatError(f"malformed JSON: {exc}", path=path,
                                      line=lineno) from exc
            image_id = _required(obj, "image_id", lineno, path)
            label = _required(obj, "label", lineno, path)
            entities = _required(obj, "entities", lineno, path)
            vgg = _required(obj, "vgg", lineno, path)
            feature = np.asarray(vgg, dtype=np.float64)
            if feature.ndim != 1 or feature.shape[0] != FEATURE_DIM:
                raise FileFormatError(
                    f"vgg vector has length {feature.size}, "
                    f"expected {FEATURE_DIM}",
                    path=path, line=lineno,
                )
            if not np.all(np.isfinite(feature)):
                raise FileFormatError("non-finite vgg value", path=path,
                                      line=lineno)
            try:
                dataset.append(FeatureRecord(
                    image_id=str(image_id),
                    label=str(label),
                    entity_labels=[str(e) for e in entities],
                    image_feature=feature,
                ))
            except ValidationError as exc:
                raise FileFormatError(str(exc), path=path,
                                      line=lineno) from exc
    return dataset


def read_detections(path) -> dict[str, list[DetBox]]:
    """Read raw (pre-NMS) boxes per image; repeated image ids extend
    the image's box list."""
    detections: dict[str, list[DetBox]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise FileFormatError(f"malformed JSON: {exc}", path=path,
                                      line=lineno) from exc
            image_id = str(_required(obj, "image_id", lineno, path))
            boxes = _required(obj, "boxes", lineno, path)
            parsed = detections.setdefault(image_id, [])
            for entry in boxes:
                try:
                    parsed.append(DetBox(
                        x_min=float(_required(entry, "x_min", lineno, path)),
                        y_min=float(_required(entry, "y_min", lineno, path)),
                        x_max=float(_required(entry, "x_max", lineno, path)),
                        y_max=float(_required(entry, "y_max", lineno, path)),
                        score=float(_required(entry, "score", lineno, path)),
                        class_label=str(_required(entry, "label", lineno,
                                                  path)),
                    ))
                except ValidationError as exc:
                    raise FileFormatError(str(exc), path=path,
                                          line=lineno) from exc
    return detections


def write_detections(detections: dict[str, list[DetBox]], path) -> None:
    """Emit the detections.jsonl schema, one image per line, in map
    order."""
    with open(path, "w", encoding="utf-8") as fh:
        for image_id, boxes in detections.items():
            obj = {
                "image_id": image_id,
                "boxes": [
                    {
                        "x_min": b.x_min,
                        "y_min": b.y_min,
                        "x_max": b.x_max,
                        "y_max": b.y_max,
                        "score": b.score,
                        "label": b.class_label,
                    }
                    for b in boxes
                ],
            }
            fh.write(json.dumps(obj) + "\n")


def baseline_matrix(dataset: Dataset, table: WordVectorTable):
    """(X, y): rows are the averaged entity-set embeddings. Records
    with no embeddable entities fall back to the zero vector."""
    X = np.stack([
        embed_entity_set_or_zero(table, r.entity_labels) for r in dataset
    ]) if len(dataset) else np.zeros((0, table.dim))
    return X, dataset.labels_as_indices()


def fusion_matrix(dataset: Dataset, table: WordVectorTable):
    """(X, y): rows are [4096-d image feature | embedding]."""
    emb, y = baseline_matrix(dataset, table)
    img = np.stack([r.image_feature for r in dataset]) if len(dataset) \
        else np.zeros((0, FEATURE_DIM))
    return np.concatenate([img, emb], axis=1), y
