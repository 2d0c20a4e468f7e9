"""Fully-connected network with ELU hidden layers and a selectable head.

Parameters live in one contiguous float64 vector; ``weights`` and
``biases`` are reshaped views into it, which lets the optimizer and the
target-network blend operate on a single array.
"""

from dataclasses import dataclass

import numpy as np

HEADS = ("identity", "tanh", "softmax")


def elu(z: np.ndarray, alpha: float = 1.0) -> np.ndarray:
    neg = np.minimum(z, 0.0)
    np.expm1(neg, out=neg)
    if alpha != 1.0:
        neg *= alpha
    out = np.maximum(z, 0.0)
    out += neg
    return out


def elu_grad(z: np.ndarray, alpha: float = 1.0) -> np.ndarray:
    out = np.ones_like(z)
    neg = z < 0
    out[neg] = alpha * np.exp(z[neg])
    return out


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class MlpSpec:
    input_dim: int
    output_dim: int
    hidden: tuple = (128, 128, 128)
    hidden_activation: str = "elu"
    output_activation: str = "identity"

    def __post_init__(self):
        object.__setattr__(self, "hidden", tuple(int(h) for h in self.hidden))
        if self.input_dim < 1 or self.output_dim < 1:
            raise ValueError("input_dim and output_dim must be >= 1")
        if any(h < 1 for h in self.hidden):
            raise ValueError("hidden widths must be >= 1")
        if self.hidden_activation != "elu":
            raise ValueError(f"unsupported hidden activation {self.hidden_activation!r}")
        if self.output_activation not in HEADS:
            raise ValueError(f"unsupported head {self.output_activation!r}")

    @property
    def layer_sizes(self) -> tuple:
        return (self.input_dim, *self.hidden, self.output_dim)

    @property
    def param_count(self) -> int:
        sizes = self.layer_sizes
        return sum(a * b + b for a, b in zip(sizes, sizes[1:]))


@dataclass
class _MlpCache:
    net: "Mlp"
    inputs: list           # activation fed into each layer
    pre: list              # pre-activation of each layer
    output: np.ndarray


class Mlp:
    """MLP over row-batches; forward returns a cache consumed by backward."""

    def __init__(self, spec: MlpSpec, rng: np.random.Generator,
                 final_layer_scale: float = 1.0):
        self.spec = spec
        self.param_vector = np.empty(spec.param_count)
        self.weights, self.biases = self._views(self.param_vector)
        sizes = spec.layer_sizes
        for i, (fan_in, fan_out) in enumerate(zip(sizes, sizes[1:])):
            bound = 1.0 / np.sqrt(fan_in)
            self.weights[i][...] = rng.uniform(-bound, bound, size=(fan_in, fan_out))
            self.biases[i][...] = rng.uniform(-bound, bound, size=fan_out)
        if final_layer_scale != 1.0:
            self.weights[-1] *= final_layer_scale
            self.biases[-1] *= final_layer_scale

    def _views(self, vector: np.ndarray) -> tuple[list, list]:
        weights, biases, offset = [], [], 0
        sizes = self.spec.layer_sizes
        for fan_in, fan_out in zip(sizes, sizes[1:]):
            weights.append(vector[offset:offset + fan_in * fan_out]
                           .reshape(fan_in, fan_out))
            offset += fan_in * fan_out
            biases.append(vector[offset:offset + fan_out])
            offset += fan_out
        return weights, biases

    @property
    def params(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def set_params(self, params: list[np.ndarray]) -> None:
        """Copy values in; existing views (and the flat vector) stay valid."""
        targets = self.params
        if len(params) != len(targets):
            raise ValueError("parameter list length mismatch")
        for target, value in zip(targets, params):
            value = np.asarray(value, dtype=np.float64)
            if value.shape != target.shape:
                raise ValueError(f"shape mismatch: {value.shape} vs {target.shape}")
            target[...] = value

    def flatten_grads(self, grads: list[np.ndarray],
                      out: np.ndarray | None = None) -> np.ndarray:
        """Pack a backward() gradient list into one vector aligned with
        ``param_vector``."""
        if out is None:
            out = np.empty(self.spec.param_count)
        g_views = self._views(out)
        flat_views = [v for pair in zip(*g_views) for v in pair]
        if len(grads) != len(flat_views):
            raise ValueError("gradient list length mismatch")
        for view, g in zip(flat_views, grads):
            view[...] = g
        return out

    def copy(self) -> "Mlp":
        clone = Mlp.__new__(Mlp)
        clone.spec = self.spec
        clone.param_vector = self.param_vector.copy()
        clone.weights, clone.biases = clone._views(clone.param_vector)
        return clone

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, _MlpCache]:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.spec.input_dim:
            raise ValueError(f"expected input of shape (batch, {self.spec.input_dim}), "
                             f"got {x.shape}")
        inputs, pre = [], []
        a = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            inputs.append(a)
            z = a @ w
            z += b
            pre.append(z)
            a = self._head(z) if i == last else elu(z)
        return a, _MlpCache(net=self, inputs=inputs, pre=pre, output=a)

    def _head(self, z: np.ndarray) -> np.ndarray:
        head = self.spec.output_activation
        if head == "identity":
            return z
        if head == "tanh":
            return np.tanh(z)
        return softmax(z)

    def _head_grad(self, cache: _MlpCache, output_grad: np.ndarray) -> np.ndarray:
        if cache.net is not self:
            raise ValueError("cache does not belong to this network")
        output_grad = np.asarray(output_grad, dtype=np.float64)
        if output_grad.shape != cache.output.shape:
            raise ValueError(f"output_grad shape {output_grad.shape} != "
                             f"output shape {cache.output.shape}")
        head = self.spec.output_activation
        y = cache.output
        if head == "identity":
            return output_grad
        if head == "tanh":
            return output_grad * (1.0 - y * y)
        return y * (output_grad - (output_grad * y).sum(axis=1, keepdims=True))

    @staticmethod
    def _elu_grad_cached(pre: np.ndarray, activation: np.ndarray,
                         alpha: float = 1.0) -> np.ndarray:
        # d/dz elu(z) = 1 for z > 0 and elu(z) + alpha below; reuses the
        # cached activation instead of re-exponentiating
        return np.where(pre > 0, 1.0, activation + alpha)

    def backward(self, cache: _MlpCache,
                 output_grad: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
        """Return (parameter gradients aligned with ``params``, input gradient)."""
        gz = self._head_grad(cache, output_grad)
        grads: list[np.ndarray] = []
        for i in range(len(self.weights) - 1, -1, -1):
            gw = cache.inputs[i].T @ gz
            gb = gz.sum(axis=0)
            grads.append(gb)
            grads.append(gw)
            gz = gz @ self.weights[i].T
            if i > 0:
                gz *= self._elu_grad_cached(cache.pre[i - 1], cache.inputs[i])
        grads.reverse()
        return grads, gz

    def input_gradient(self, cache: _MlpCache, output_grad: np.ndarray) -> np.ndarray:
        """Input gradient only; skips the parameter-gradient matmuls.

        Used to chain one network's policy update through another's value
        surface.
        """
        gz = self._head_grad(cache, output_grad)
        for i in range(len(self.weights) - 1, -1, -1):
            gz = gz @ self.weights[i].T
            if i > 0:
                gz *= self._elu_grad_cached(cache.pre[i - 1], cache.inputs[i])
        return gz
