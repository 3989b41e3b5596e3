"""Categorical cross-entropy on probability vectors."""

from __future__ import annotations

import numpy as np

PROB_FLOOR = 1e-12


def cross_entropy(target_one_hot, predicted) -> float:
    """-log of the predicted probability of the true class, clamped at
    1e-12 so a zero prediction stays finite. Accepts single vectors or
    (batch, classes) arrays; batches return the mean."""
    t = np.asarray(target_one_hot, dtype=np.float64)
    p = np.asarray(predicted, dtype=np.float64)
    picked = (t * p).sum(axis=-1)
    losses = -np.log(np.maximum(picked, PROB_FLOOR))
    return float(losses.mean())


def cross_entropy_grad(target_one_hot, predicted) -> np.ndarray:
    """Gradient of the mean batch loss w.r.t. the predictions.

    Zero below the clamp floor, where the loss is constant.
    """
    t = np.asarray(target_one_hot, dtype=np.float64)
    p = np.asarray(predicted, dtype=np.float64)
    n = 1 if t.ndim == 1 else t.shape[0]
    grad = np.zeros_like(p)
    live = p > PROB_FLOOR
    grad[live] = -t[live] / p[live] / n
    return grad


def one_hot(labels, n_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.shape[0], n_classes))
    out[np.arange(labels.shape[0]), labels] = 1.0
    return out
