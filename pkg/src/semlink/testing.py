"""Finite-difference probes for the tensor-layer scorer, shared by the
grad-check CLI command and the test suite."""

from __future__ import annotations

import numpy as np

from .ntl import NtlRelationParams, ntl_gradients, ntl_score


def ntl_numeric_gradients(p: NtlRelationParams, h, t, step: float = 1e-6):
    """Central-difference gradients of the raw score for every
    coordinate of W, V, b, h, and t."""
    h = np.asarray(h, dtype=np.float64).copy()
    t = np.asarray(t, dtype=np.float64).copy()

    def diff(array):
        grad = np.zeros_like(array)
        flat = array.reshape(-1)
        gflat = grad.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            up = ntl_score(p, h, t)
            flat[i] = orig - step
            down = ntl_score(p, h, t)
            flat[i] = orig
            gflat[i] = (up - down) / (2.0 * step)
        return grad

    return diff(p.W), diff(p.V), diff(p.b), diff(h), diff(t)


def ntl_grad_check_error(rng, d: int = 6, k: int = 3,
                         step: float = 1e-6) -> float:
    """Max relative error between analytic and numeric gradients for
    one random draw with entries in [-1, 1]."""
    p = NtlRelationParams(
        W=rng.uniform(-1, 1, size=(d, d, k)),
        V=rng.uniform(-1, 1, size=(k, 2 * d)),
        b=rng.uniform(-1, 1, size=k),
    )
    h = rng.uniform(-1, 1, size=d)
    t = rng.uniform(-1, 1, size=d)
    analytic = ntl_gradients(p, h, t)
    numeric = ntl_numeric_gradients(p, h, t, step=step)
    worst = 0.0
    for a, n in zip(analytic, numeric):
        denom = np.maximum(1.0, np.maximum(np.abs(a), np.abs(n)))
        worst = max(worst, float((np.abs(a - n) / denom).max()))
    return worst
