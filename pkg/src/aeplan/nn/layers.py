"""Dense layers and parameter initialization."""

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeError

ACTIVATIONS = ("linear", "tanh", "relu")


def xavier_uniform(rng: np.random.Generator, out_dim: int, in_dim: int) -> np.ndarray:
    """Xavier-uniform weights, bounded by sqrt(6 / (fan_in + fan_out))."""
    limit = np.sqrt(6.0 / (in_dim + out_dim))
    return rng.uniform(-limit, limit, size=(out_dim, in_dim))


@dataclass
class DenseLayer:
    weights: np.ndarray  # (out_dim, in_dim)
    bias: np.ndarray  # (out_dim,)
    activation: str = "linear"

    def __post_init__(self):
        self.weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        self.bias = np.ascontiguousarray(self.bias, dtype=np.float64)
        if self.activation not in ACTIVATIONS:
            raise ShapeError(f"unknown activation {self.activation!r}")
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ShapeError(
                f"dense layer shapes inconsistent: weights {self.weights.shape}, bias {self.bias.shape}"
            )

    @property
    def in_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def out_dim(self) -> int:
        return self.weights.shape[0]

    def copy(self) -> "DenseLayer":
        return DenseLayer(self.weights.copy(), self.bias.copy(), self.activation)


def init_dense(in_dim: int, out_dim: int, activation: str, rng: np.random.Generator) -> DenseLayer:
    if in_dim < 1 or out_dim < 1:
        raise ShapeError(f"dense dims must be >= 1, got in={in_dim}, out={out_dim}")
    return DenseLayer(xavier_uniform(rng, out_dim, in_dim), np.zeros(out_dim), activation)


def apply_activation(name: str, z: np.ndarray) -> np.ndarray:
    if name == "linear":
        return z
    if name == "tanh":
        return np.tanh(z)
    if name == "relu":
        return np.maximum(z, 0.0)
    raise ShapeError(f"unknown activation {name!r}")


def activation_grad(name: str, pre: np.ndarray, out: np.ndarray) -> np.ndarray:
    """d activation / d pre-activation, using whichever of pre/out is cheaper."""
    if name == "linear":
        return np.ones_like(pre)
    if name == "tanh":
        return 1.0 - out * out
    if name == "relu":
        return (pre > 0.0).astype(np.float64)
    raise ShapeError(f"unknown activation {name!r}")


def dense_forward(layer: DenseLayer, x: np.ndarray) -> np.ndarray:
    """activation(weights @ x + bias); x may be a vector or a (batch, in_dim) matrix."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != layer.in_dim:
        raise ShapeError(f"dense input has dim {x.shape[-1]}, layer expects {layer.in_dim}")
    z = x @ layer.weights.T + layer.bias
    return apply_activation(layer.activation, z)
