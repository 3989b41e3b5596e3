"""Network containers, exact backpropagation, and gradient checking."""

from __future__ import annotations

import numpy as np

from .layers import Flatten, Layer
from .losses import cross_entropy, cross_entropy_grad
from .rng import stream


class Sequential:
    """A chain of layers trained with mean-batch cross-entropy.

    The last layer is expected to be Softmax so forward output is a
    probability distribution per row.
    """

    def __init__(self, layers, seed=None):
        self.layers: list[Layer] = list(layers)
        if seed is not None:
            self.seed_layers(seed)

    def seed_layers(self, seed: int, offset: int = 0) -> None:
        """Give every layer its own init and mask streams.

        Layer i draws initial parameters from spawn key (offset+i, 0)
        and, when it is stochastic, masks from (offset+i, 1).
        """
        for i, layer in enumerate(self.layers):
            layer.init_params(stream(seed, offset + i, 0))
            layer.reset_stream(stream(seed, offset + i, 1))

    def params(self):
        return [p for layer in self.layers for p in layer.params()]

    def grads(self):
        return [g for layer in self.layers for g in layer.grads()]

    def zero_grads(self):
        for layer in self.layers:
            layer.zero_grads()

    def forward(self, x, train: bool = False):
        for layer in self.layers:
            x = layer.forward(x, train=train)
        return x

    def backward(self, grad_out):
        for layer in reversed(self.layers):
            grad_out = layer.backward(grad_out)
        return grad_out

    def loss(self, x, y_one_hot, train: bool = False) -> float:
        return cross_entropy(y_one_hot, self.forward(x, train=train))

    def loss_and_gradients(self, x, y_one_hot, train: bool = False):
        """Mean minibatch loss; leaves dLoss/dparam in the layer grad
        buffers (overwriting, not accumulating)."""
        self.zero_grads()
        p = self.forward(x, train=train)
        loss = cross_entropy(y_one_hot, p)
        self.backward(cross_entropy_grad(y_one_hot, p))
        return loss, self.grads()

    def kink_signature(self):
        return [s for layer in self.layers
                if (s := layer.kink_signature()) is not None]

    def parameter_count(self) -> int:
        return sum(p.size for p in self.params())


class FusionNetwork:
    """Two-input network: a conv/pool stack compresses the image vector,
    its flattened output is concatenated with the entity embedding, and
    a dense head classifies.

    Input rows are [image_feature | embedding] of width
    image_dim + embed_dim; the split is re-applied internally.
    """

    def __init__(self, image_stack: Sequential, head: Sequential,
                 image_dim: int, embed_dim: int, seed=None):
        self.image_stack = image_stack
        self.head = head
        self.image_dim = image_dim
        self.embed_dim = embed_dim
        if not any(isinstance(l, Flatten) for l in image_stack.layers):
            raise ValueError("image stack must end with a Flatten layer")
        if seed is not None:
            self.seed_layers(seed)

    def seed_layers(self, seed: int) -> None:
        self.image_stack.seed_layers(seed, offset=0)
        self.head.seed_layers(seed, offset=len(self.image_stack.layers))

    @property
    def layers(self):
        return self.image_stack.layers + self.head.layers

    def params(self):
        return self.image_stack.params() + self.head.params()

    def grads(self):
        return self.image_stack.grads() + self.head.grads()

    def zero_grads(self):
        self.image_stack.zero_grads()
        self.head.zero_grads()

    def _split(self, x):
        if x.shape[1] != self.image_dim + self.embed_dim:
            raise ValueError(
                f"expected input width {self.image_dim + self.embed_dim}, "
                f"got {x.shape[1]}"
            )
        img = x[:, : self.image_dim].reshape(x.shape[0], 1, self.image_dim)
        emb = x[:, self.image_dim:]
        return img, emb

    def forward(self, x, train: bool = False):
        img, emb = self._split(x)
        z = self.image_stack.forward(img, train=train)
        self._z_width = z.shape[1]
        h = np.concatenate([z, emb], axis=1)
        return self.head.forward(h, train=train)

    def backward(self, grad_out):
        gh = self.head.backward(grad_out)
        g_img = self.image_stack.backward(gh[:, : self._z_width])
        g_emb = gh[:, self._z_width:]
        n = grad_out.shape[0]
        return np.concatenate(
            [g_img.reshape(n, self.image_dim), g_emb], axis=1
        )

    def loss(self, x, y_one_hot, train: bool = False) -> float:
        return cross_entropy(y_one_hot, self.forward(x, train=train))

    def loss_and_gradients(self, x, y_one_hot, train: bool = False):
        self.zero_grads()
        p = self.forward(x, train=train)
        loss = cross_entropy(y_one_hot, p)
        self.backward(cross_entropy_grad(y_one_hot, p))
        return loss, self.grads()

    def kink_signature(self):
        return [s for layer in self.layers
                if (s := layer.kink_signature()) is not None]

    def parameter_count(self) -> int:
        return sum(p.size for p in self.params())


def _signatures_match(a, b) -> bool:
    return all(np.array_equal(x, y) for x, y in zip(a, b))


def grad_check(network, x, y_one_hot, step: float = 1e-6,
               max_coords_per_param=None, rng=None) -> float:
    """Max relative error between analytic and central-difference
    gradients of the mean batch loss. Dropout must be inactive, so both
    passes run in eval mode.

    With max_coords_per_param set, only a random coordinate subsample of
    each parameter tensor is probed (rng required); otherwise every
    coordinate is checked. Probes whose perturbation flips a relu sign
    or a pool selection are discarded: the loss is not differentiable
    there, so the central difference does not estimate the gradient.
    """
    _, grads = network.loss_and_gradients(x, y_one_hot, train=False)
    analytic = [g.copy() for g in grads]
    max_err = 0.0
    for p, g in zip(network.params(), analytic):
        flat = p.reshape(-1)
        gflat = g.reshape(-1)
        if max_coords_per_param is None or flat.size <= max_coords_per_param:
            coords = range(flat.size)
        else:
            coords = rng.choice(flat.size, size=max_coords_per_param,
                                replace=False)
        for i in coords:
            orig = flat[i]
            flat[i] = orig + step
            up = network.loss(x, y_one_hot, train=False)
            sig_up = network.kink_signature()
            flat[i] = orig - step
            down = network.loss(x, y_one_hot, train=False)
            sig_down = network.kink_signature()
            flat[i] = orig
            if not _signatures_match(sig_up, sig_down):
                continue
            numeric = (up - down) / (2.0 * step)
            err = abs(numeric - gflat[i]) / max(
                1.0, abs(numeric), abs(gflat[i])
            )
            max_err = max(max_err, err)
    return max_err
