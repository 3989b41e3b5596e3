"""Minimal fp64 layer zoo: dense, dropout, 1-D conv, 1-D max-pool,
flatten, softmax.

Every layer is single-threaded and caches exactly what its backward
pass needs from the last forward call. Shapes are batched: dense-style
layers take (batch, features), conv-style layers take
(batch, channels, length).
"""

from __future__ import annotations

import numpy as np

from .rng import stream


def relu(x):
    return np.maximum(x, 0.0)


class Layer:
    """Forward/backward unit with optional trainable parameters."""

    def params(self) -> list[np.ndarray]:
        return []

    def grads(self) -> list[np.ndarray]:
        return []

    def zero_grads(self) -> None:
        for g in self.grads():
            g.fill(0.0)

    def init_params(self, rng) -> None:
        pass

    def reset_stream(self, rng) -> None:
        pass

    def forward(self, x, train: bool = False) -> np.ndarray:
        raise NotImplementedError

    def backward(self, grad_out: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def output_shape(self, input_shape):
        return input_shape

    def kink_signature(self):
        """Selector state of the last forward (relu sign pattern, pool
        choices), or None for smooth layers. Used by the gradient
        checker to reject finite-difference probes that step across a
        non-differentiable point."""
        return None


def glorot_uniform(rng, shape, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


class Dense(Layer):
    """activation(W x + b) with activation in {relu, linear}."""

    def __init__(self, in_dim: int, out_dim: int, activation: str = "linear"):
        if activation not in ("relu", "linear"):
            raise ValueError(f"unknown activation {activation!r}")
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.activation = activation
        self.W = np.zeros((out_dim, in_dim))
        self.b = np.zeros(out_dim)
        self.dW = np.zeros_like(self.W)
        self.db = np.zeros_like(self.b)
        self._x = None
        self._pre = None

    def init_params(self, rng):
        self.W = glorot_uniform(
            rng, (self.out_dim, self.in_dim), self.in_dim, self.out_dim
        )
        self.b = np.zeros(self.out_dim)
        self.dW = np.zeros_like(self.W)
        self.db = np.zeros_like(self.b)

    def params(self):
        return [self.W, self.b]

    def grads(self):
        return [self.dW, self.db]

    def forward(self, x, train=False):
        self._x = x
        pre = x @ self.W.T + self.b
        if self.activation == "relu":
            self._pre = pre
            return relu(pre)
        return pre

    def backward(self, grad_out):
        if self.activation == "relu":
            grad_out = grad_out * (self._pre > 0)
        self.dW += grad_out.T @ self._x
        self.db += grad_out.sum(axis=0)
        return grad_out @ self.W

    def output_shape(self, input_shape):
        return (self.out_dim,)

    def kink_signature(self):
        if self.activation == "relu":
            return self._pre > 0
        return None


class Dropout(Layer):
    """Inverted dropout: identity in eval mode; in train mode each
    element is zeroed with probability rate and survivors are scaled by
    1/(1-rate). Masks come from the layer's own seeded stream, so they
    are a deterministic function of (seed, call index)."""

    def __init__(self, rate: float):
        if not 0.0 <= rate < 1.0:
            raise ValueError(f"dropout rate must be in [0, 1), got {rate}")
        self.rate = rate
        self._rng = None
        self._mask = None

    def reset_stream(self, rng):
        self._rng = rng

    def forward(self, x, train=False):
        if not train or self.rate == 0.0:
            self._mask = None
            return x
        if self._rng is None:
            raise RuntimeError("dropout stream not seeded")
        keep = 1.0 - self.rate
        self._mask = (self._rng.random(x.shape) >= self.rate) / keep
        return x * self._mask

    def backward(self, grad_out):
        if self._mask is None:
            return grad_out
        return grad_out * self._mask


class Conv1d(Layer):
    """Same-padding 1-D cross-correlation, stride 1, kernel width 4.

    The even kernel is aligned by padding 1 on the left and 2 on the
    right, so output position j sees inputs j-1 .. j+2. Input is
    (batch, in_channels, length), output (batch, filters, length).
    """

    def __init__(self, in_channels: int, filters: int, kernel: int = 4,
                 activation: str = "relu"):
        if activation not in ("relu", "linear"):
            raise ValueError(f"unknown activation {activation!r}")
        self.in_channels = in_channels
        self.filters = filters
        self.kernel = kernel
        self.activation = activation
        self.pad_left = (kernel - 1) // 2
        self.pad_right = kernel - 1 - self.pad_left
        self.K = np.zeros((filters, in_channels, kernel))
        self.b = np.zeros(filters)
        self.dK = np.zeros_like(self.K)
        self.db = np.zeros_like(self.b)
        self._cols = None
        self._pre = None
        self._length = None

    def init_params(self, rng):
        fan_in = self.in_channels * self.kernel
        fan_out = self.filters * self.kernel
        self.K = glorot_uniform(
            rng, (self.filters, self.in_channels, self.kernel), fan_in, fan_out
        )
        self.b = np.zeros(self.filters)
        self.dK = np.zeros_like(self.K)
        self.db = np.zeros_like(self.b)

    def params(self):
        return [self.K, self.b]

    def grads(self):
        return [self.dK, self.db]

    def forward(self, x, train=False):
        n, _, length = x.shape
        self._length = length
        xp = np.pad(x, ((0, 0), (0, 0), (self.pad_left, self.pad_right)))
        windows = np.lib.stride_tricks.sliding_window_view(
            xp, self.kernel, axis=2
        )
        # im2col: (n * length, in_channels * kernel), one GEMM per pass
        cols = windows.transpose(0, 2, 1, 3).reshape(
            n * length, self.in_channels * self.kernel
        )
        self._cols = cols
        pre = cols @ self.K.reshape(self.filters, -1).T
        pre = np.ascontiguousarray(
            pre.reshape(n, length, self.filters).transpose(0, 2, 1)
        )
        pre += self.b[None, :, None]
        if self.activation == "relu":
            self._pre = pre
            return relu(pre)
        return pre

    def backward(self, grad_out):
        if self.activation == "relu":
            grad_out = grad_out * (self._pre > 0)
        self.db += grad_out.sum(axis=(0, 2))
        n = grad_out.shape[0]
        length = self._length
        g2 = np.ascontiguousarray(grad_out.transpose(0, 2, 1)).reshape(
            n * length, self.filters
        )
        self.dK += (g2.T @ self._cols).reshape(self.K.shape)
        dcols = (g2 @ self.K.reshape(self.filters, -1)).reshape(
            n, length, self.in_channels, self.kernel
        )
        # col2im in (n, padded length, channels) layout, transposed once
        gxp = np.zeros((n, length + self.pad_left + self.pad_right,
                        self.in_channels))
        for u in range(self.kernel):
            gxp[:, u:u + length, :] += dcols[:, :, :, u]
        core = gxp[:, self.pad_left:self.pad_left + length, :]
        return np.ascontiguousarray(core.transpose(0, 2, 1))

    def output_shape(self, input_shape):
        return (self.filters, input_shape[1])

    def kink_signature(self):
        if self.activation == "relu":
            return self._pre > 0
        return None


class MaxPool1d(Layer):
    """Window-2 stride-2 max pooling; a trailing odd element is dropped.

    On a tie within a window the earlier element gets the gradient.
    """

    def __init__(self, window: int = 2, stride: int = 2):
        if window != 2 or stride != 2:
            raise ValueError("only window=2, stride=2 pooling is supported")
        self.window = window
        self.stride = stride
        self._second_wins = None
        self._in_shape = None

    def forward(self, x, train=False):
        n, c, length = x.shape
        if length < self.window:
            raise ValueError(
                f"input length {length} shorter than pool window {self.window}"
            )
        out_len = length // 2
        self._in_shape = x.shape
        first = x[:, :, 0:out_len * 2:2]
        second = x[:, :, 1:out_len * 2:2]
        self._second_wins = second > first
        return np.where(self._second_wins, second, first)

    def backward(self, grad_out):
        n, c, length = self._in_shape
        out_len = grad_out.shape[2]
        gx = np.zeros((n, c, length))
        second = self._second_wins
        np.multiply(grad_out, ~second, out=gx[:, :, 0:out_len * 2:2])
        np.multiply(grad_out, second, out=gx[:, :, 1:out_len * 2:2])
        return gx

    def output_shape(self, input_shape):
        return (input_shape[0], input_shape[1] // self.stride)

    def kink_signature(self):
        return self._second_wins


class Flatten(Layer):
    def __init__(self):
        self._in_shape = None

    def forward(self, x, train=False):
        self._in_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, grad_out):
        return grad_out.reshape(self._in_shape)

    def output_shape(self, input_shape):
        return (int(np.prod(input_shape)),)


class Softmax(Layer):
    """Row-wise softmax with max subtraction for stability."""

    def __init__(self):
        self._p = None

    def forward(self, x, train=False):
        self._p = softmax(x)
        return self._p

    def backward(self, grad_out):
        p = self._p
        inner = (grad_out * p).sum(axis=-1, keepdims=True)
        return p * (grad_out - inner)


def softmax(z):
    """Stable softmax over the last axis; components sum to 1."""
    z = np.asarray(z, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise ValueError("softmax input must be finite")
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)
