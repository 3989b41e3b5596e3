"""The two relation classifiers and their training harness.

Baseline: a dense stack over the 100-d averaged entity embedding.
Fusion: five conv/pool blocks compress the 4096-d image feature to
1024 values, which are concatenated with the 100-d embedding and
classified by a dense head. Both end in softmax over the 12 classes and
train with Adam on categorical cross-entropy.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array

from .errors import ValidationError
from .nn import (
    Adam,
    Conv1d,
    Dense,
    Dropout,
    Flatten,
    FusionNetwork,
    MaxPool1d,
    Sequential,
    Softmax,
    cross_entropy,
    one_hot,
)
from .nn.rng import SHUFFLE_SPACE, stream

N_CLASSES = 12
EMBED_DIM = 100
IMAGE_DIM = 4096
CONV_FILTERS = 8
CONV_KERNEL = 4
POOL_BLOCKS = 5


def build_baseline_network(seed: int, n_classes: int = N_CLASSES,
                           input_dim: int = EMBED_DIM) -> Sequential:
    """Dense 128/64/64 with dropout 0.5 after each hidden layer."""
    return Sequential(
        [
            Dense(input_dim, 128, activation="relu"),
            Dropout(0.5),
            Dense(128, 64, activation="relu"),
            Dropout(0.5),
            Dense(64, 64, activation="relu"),
            Dropout(0.5),
            Dense(64, n_classes, activation="linear"),
            Softmax(),
        ],
        seed=seed,
    )


def build_fusion_network(seed: int, n_classes: int = N_CLASSES,
                         image_dim: int = IMAGE_DIM,
                         embed_dim: int = EMBED_DIM,
                         filters: int = CONV_FILTERS) -> FusionNetwork:
    """Five conv(4)/pool(2) blocks, flatten, concat, dense 64, output."""
    blocks = []
    in_channels = 1
    for _ in range(POOL_BLOCKS):
        blocks.append(Conv1d(in_channels, filters, kernel=CONV_KERNEL,
                             activation="relu"))
        blocks.append(MaxPool1d(2, 2))
        in_channels = filters
    blocks.append(Flatten())
    image_stack = Sequential(blocks)
    conv_out = filters * (image_dim // 2 ** POOL_BLOCKS)
    head = Sequential(
        [
            Dense(conv_out + embed_dim, 64, activation="relu"),
            Dense(64, n_classes, activation="linear"),
            Softmax(),
        ]
    )
    return FusionNetwork(image_stack, head, image_dim, embed_dim, seed=seed)


@dataclass
class TrainConfig:
    epochs: int = 200
    lr: float = 0.01
    val_split: float = 0.2
    batch_size: int = 32
    seed: int = 0


@dataclass
class TrainReport:
    train_loss: list[float] = field(default_factory=list)
    train_accuracy: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    val_accuracy: list[float] = field(default_factory=list)
    final_val_accuracy: float | None = None
    seed: int = 0
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "train_loss": self.train_loss,
            "train_accuracy": self.train_accuracy,
            "val_loss": self.val_loss,
            "val_accuracy": self.val_accuracy,
            "final_val_accuracy": self.final_val_accuracy,
            "seed": self.seed,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def write_curves_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["epoch", "train_loss", "train_acc", "val_loss", "val_acc"]
            )
            for i in range(len(self.train_loss)):
                writer.writerow([
                    i + 1,
                    repr(self.train_loss[i]),
                    repr(self.train_accuracy[i]),
                    repr(self.val_loss[i]) if self.val_loss else "",
                    repr(self.val_accuracy[i]) if self.val_accuracy else "",
                ])


@dataclass
class CvReport:
    fold_accuracies: list[float]
    fold_sizes: list[int]
    mean: float
    std: float
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "fold_accuracies": self.fold_accuracies,
            "fold_sizes": self.fold_sizes,
            "mean": self.mean,
            "std": self.std,
            "seed": self.seed,
        }


def forward_in_chunks(network, X, chunk: int = 256) -> np.ndarray:
    """Eval-mode forward pass in bounded-memory chunks."""
    return np.concatenate([
        network.forward(X[start:start + chunk], train=False)
        for start in range(0, X.shape[0], chunk)
    ])


def _metrics(network, X, y_idx, n_classes):
    p = forward_in_chunks(network, X)
    loss = cross_entropy(one_hot(y_idx, n_classes), p)
    acc = float((p.argmax(axis=1) == y_idx).mean())
    return loss, acc


def train_network(network, X, y_idx, config: TrainConfig,
                  n_classes: int = N_CLASSES) -> TrainReport:
    """Adam + categorical cross-entropy with a deterministic last-20%
    validation split of a seeded shuffle."""
    n = X.shape[0]
    if n == 0:
        raise ValidationError("empty dataset")
    if np.any(y_idx < 0) or np.any(y_idx >= n_classes):
        raise ValidationError(
            f"class index outside the {n_classes}-label vocabulary"
        )
    report = TrainReport(
        seed=config.seed,
        config={
            "epochs": config.epochs,
            "lr": config.lr,
            "val_split": config.val_split,
            "batch_size": config.batch_size,
        },
    )
    perm = stream(config.seed, SHUFFLE_SPACE).permutation(n)
    n_val = int(round(config.val_split * n))
    train_idx = perm[: n - n_val]
    val_idx = perm[n - n_val:]
    if train_idx.size == 0:
        raise ValidationError("validation split leaves no training data")
    X_train, y_train = X[train_idx], y_idx[train_idx]
    X_val, y_val = X[val_idx], y_idx[val_idx]

    optimizer = Adam(network.params(), lr=config.lr)
    for epoch in range(config.epochs):
        order = stream(config.seed, SHUFFLE_SPACE, 1 + epoch).permutation(
            train_idx.size
        )
        for start in range(0, order.size, config.batch_size):
            batch = order[start:start + config.batch_size]
            targets = one_hot(y_train[batch], n_classes)
            _, grads = network.loss_and_gradients(
                X_train[batch], targets, train=True
            )
            optimizer.step(grads)
        loss, acc = _metrics(network, X_train, y_train, n_classes)
        report.train_loss.append(loss)
        report.train_accuracy.append(acc)
        if val_idx.size:
            vloss, vacc = _metrics(network, X_val, y_val, n_classes)
            report.val_loss.append(vloss)
            report.val_accuracy.append(vacc)
    if report.val_accuracy:
        report.final_val_accuracy = report.val_accuracy[-1]
    return report


class _NetworkClassifier(BaseEstimator, ClassifierMixin):
    """Shared sklearn-style surface for the two architectures."""

    def __init__(self, epochs=200, learning_rate=0.01, val_split=0.2,
                 batch_size=32, seed=0):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.val_split = val_split
        self.batch_size = batch_size
        self.seed = seed

    def _build_network(self):
        raise NotImplementedError

    def _input_width(self):
        raise NotImplementedError

    def _validate_X(self, X):
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self._input_width():
            raise ValidationError(
                f"expected {self._input_width()} input columns, "
                f"got {X.shape[1]}"
            )
        return X

    def fit(self, X, y):
        X = self._validate_X(X)
        y = np.asarray(y, dtype=np.int64)
        if y.shape[0] != X.shape[0]:
            raise ValidationError("X and y lengths differ")
        self.network_ = self._build_network()
        self.report_ = train_network(
            self.network_, X, y,
            TrainConfig(
                epochs=self.epochs,
                lr=self.learning_rate,
                val_split=self.val_split,
                batch_size=self.batch_size,
                seed=self.seed,
            ),
        )
        self.classes_ = np.arange(N_CLASSES)
        return self

    def predict_proba(self, X):
        X = self._validate_X(X)
        return forward_in_chunks(self.network_, X)

    def predict(self, X):
        # argmax takes the first maximum, so exact ties go to the
        # lowest class index
        return self.predict_proba(X).argmax(axis=1)

    def predict_one(self, x):
        """(label index, probability vector) for a single record."""
        probs = self.predict_proba(np.asarray(x)[None, :])[0]
        return int(probs.argmax()), probs


class BaselineClassifier(_NetworkClassifier):
    """Embedding-only dense classifier over 100-d entity vectors."""

    def _build_network(self):
        return build_baseline_network(self.seed)

    def _input_width(self):
        return EMBED_DIM


class FusionClassifier(_NetworkClassifier):
    """Image + embedding classifier; rows are [4096-d feature | 100-d
    embedding]."""

    def _build_network(self):
        return build_fusion_network(self.seed)

    def _input_width(self):
        return IMAGE_DIM + EMBED_DIM


def evaluate(model, X, y) -> float:
    """Fraction of records whose prediction matches the label index."""
    y = np.asarray(y, dtype=np.int64)
    if y.size == 0:
        raise ValidationError("cannot evaluate on an empty dataset")
    return float((model.predict(X) == y).mean())


def kfold_cv(model_builder, X, y, k: int = 10, seed: int = 0) -> CvReport:
    """Seeded shuffle, contiguous folds with sizes differing by at most
    one; each fold serves once as the validation set against a freshly
    built model trained on the rest."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = X.shape[0]
    if k < 2:
        raise ValidationError(f"k must be >= 2, got {k}")
    if k > n:
        raise ValidationError(f"k={k} exceeds dataset size {n}")
    perm = stream(seed, SHUFFLE_SPACE).permutation(n)
    folds = np.array_split(perm, k)
    accuracies = []
    for fold_idx, fold in enumerate(folds):
        train_idx = np.concatenate(
            [f for i, f in enumerate(folds) if i != fold_idx]
        )
        model = model_builder(int(stream(seed, fold_idx).integers(2 ** 31)))
        model.fit(X[train_idx], y[train_idx])
        accuracies.append(evaluate(model, X[fold], y[fold]))
    return CvReport(
        fold_accuracies=accuracies,
        fold_sizes=[len(f) for f in folds],
        mean=float(np.mean(accuracies)),
        std=float(np.std(accuracies)),
        seed=seed,
    )
