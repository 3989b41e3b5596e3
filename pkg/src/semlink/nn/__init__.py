from .layers import (
    Conv1d,
    Dense,
    Dropout,
    Flatten,
    Layer,
    MaxPool1d,
    Softmax,
    relu,
    softmax,
)
from .losses import cross_entropy, cross_entropy_grad, one_hot
from .network import FusionNetwork, Sequential, grad_check
from .optim import Adam
from .rng import stream

__all__ = [
    "Adam",
    "Conv1d",
    "Dense",
    "Dropout",
    "Flatten",
    "FusionNetwork",
    "Layer",
    "MaxPool1d",
    "Sequential",
    "Softmax",
    "cross_entropy",
    "cross_entropy_grad",
    "grad_check",
    "one_hot",
    "relu",
    "softmax",
    "stream",
]
