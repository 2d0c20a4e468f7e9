"""Stacked LSTM with a linear head, backpropagation-through-time included.

Gate layout follows the usual convention: the pre-activation of each layer
is split into [input, forget, cell, output] blocks of ``hidden_size``.
"""

from dataclasses import dataclass

import numpy as np


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class LstmSpec:
    input_dim: int = 1
    layers: int = 2
    hidden_size: int = 4
    output_dim: int = 1

    def __post_init__(self):
        if min(self.input_dim, self.layers, self.hidden_size, self.output_dim) < 1:
            raise ValueError("all LstmSpec dimensions must be >= 1")

    @property
    def param_count(self) -> int:
        h = self.hidden_size
        total = 0
        for layer in range(self.layers):
            d = self.input_dim if layer == 0 else h
            total += d * 4 * h + h * 4 * h + 4 * h
        total += h * self.output_dim + self.output_dim
        return total


@dataclass
class _LstmCache:
    net: "Lstm"
    x: np.ndarray
    layer_steps: list      # [layer][t] -> dict of per-step tensors
    last_hidden: np.ndarray
    output: np.ndarray


class Lstm:
    def __init__(self, spec: LstmSpec, rng: np.random.Generator):
        self.spec = spec
        h = spec.hidden_size
        bound = 1.0 / np.sqrt(h)
        self.w_in: list[np.ndarray] = []
        self.w_rec: list[np.ndarray] = []
        self.bias: list[np.ndarray] = []
        for layer in range(spec.layers):
            d = spec.input_dim if layer == 0 else h
            self.w_in.append(rng.uniform(-bound, bound, size=(d, 4 * h)))
            self.w_rec.append(rng.uniform(-bound, bound, size=(h, 4 * h)))
            self.bias.append(rng.uniform(-bound, bound, size=4 * h))
        self.w_head = rng.uniform(-bound, bound, size=(h, spec.output_dim))
        self.b_head = rng.uniform(-bound, bound, size=spec.output_dim)

    @property
    def params(self) -> list[np.ndarray]:
        out = []
        for layer in range(self.spec.layers):
            out.extend((self.w_in[layer], self.w_rec[layer], self.bias[layer]))
        out.extend((self.w_head, self.b_head))
        return out

    def set_params(self, params: list[np.ndarray]) -> None:
        current = self.params
        if len(params) != len(current):
            raise ValueError("parameter list length mismatch")
        arrays = [np.asarray(p, dtype=np.float64) for p in params]
        for new, old in zip(arrays, current):
            if new.shape != old.shape:
                raise ValueError(f"shape mismatch: {new.shape} vs {old.shape}")
        i = 0
        for layer in range(self.spec.layers):
            self.w_in[layer], self.w_rec[layer], self.bias[layer] = arrays[i:i + 3]
            i += 3
        self.w_head, self.b_head = arrays[i], arrays[i + 1]

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, _LstmCache]:
        """Run a batch of sequences shaped (batch, time, input_dim)."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 3 or x.shape[2] != self.spec.input_dim:
            raise ValueError(f"expected input of shape (batch, time, "
                             f"{self.spec.input_dim}), got {x.shape}")
        if x.shape[1] < 1:
            raise ValueError("sequence length must be >= 1")
        batch, steps, _ = x.shape
        h_size = self.spec.hidden_size
        layer_steps = []
        seq = x
        for layer in range(self.spec.layers):
            h = np.zeros((batch, h_size))
            c = np.zeros((batch, h_size))
            records = []
            outputs = np.empty((batch, steps, h_size))
            for t in range(steps):
                x_t = seq[:, t, :]
                z = x_t @ self.w_in[layer] + h @ self.w_rec[layer] + self.bias[layer]
                gi = _sigmoid(z[:, :h_size])
                gf = _sigmoid(z[:, h_size:2 * h_size])
                gc = np.tanh(z[:, 2 * h_size:3 * h_size])
                go = _sigmoid(z[:, 3 * h_size:])
                c_new = gf * c + gi * gc
                tc = np.tanh(c_new)
                h_new = go * tc
                records.append({"x": x_t, "h_prev": h, "c_prev": c,
                                "i": gi, "f": gf, "g": gc, "o": go, "tc": tc})
                h, c = h_new, c_new
                outputs[:, t, :] = h_new
            layer_steps.append(records)
            seq = outputs
        y = seq[:, -1, :] @ self.w_head + self.b_head
        return y, _LstmCache(net=self, x=x, layer_steps=layer_steps,
                             last_hidden=seq[:, -1, :], output=y)

    def backward(self, cache: _LstmCache,
                 output_grad: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
        if cache.net is not self:
            raise ValueError("cache does not belong to this network")
        output_grad = np.asarray(output_grad, dtype=np.float64)
        if output_grad.shape != cache.output.shape:
            raise ValueError("output_grad shape mismatch")
        batch, steps, _ = cache.x.shape
        h_size = self.spec.hidden_size

        g_w_head = cache.last_hidden.T @ output_grad
        g_b_head = output_grad.sum(axis=0)
        # gradient flowing into each layer's hidden outputs, per time step
        gh_seq = np.zeros((batch, steps, h_size))
        gh_seq[:, -1, :] = output_grad @ self.w_head.T

        g_w_in = [np.zeros_like(w) for w in self.w_in]
        g_w_rec = [np.zeros_like(w) for w in self.w_rec]
        g_bias = [np.zeros_like(b) for b in self.bias]

        for layer in range(self.spec.layers - 1, -1, -1):
            records = cache.layer_steps[layer]
            in_dim = self.w_in[layer].shape[0]
            gx_seq = np.zeros((batch, steps, in_dim))
            gh_next = np.zeros((batch, h_size))
            gc_next = np.zeros((batch, h_size))
            for t in range(steps - 1, -1, -1):
                rec = records[t]
                gh = gh_seq[:, t, :] + gh_next
                go = gh * rec["tc"]
                gc = gh * rec["o"] * (1.0 - rec["tc"] ** 2) + gc_next
                gi = gc * rec["g"]
                gg = gc * rec["i"]
                gf = gc * rec["c_prev"]
                gc_next = gc * rec["f"]
                gz = np.concatenate([gi * rec["i"] * (1.0 - rec["i"]),
                                     gf * rec["f"] * (1.0 - rec["f"]),
                                     gg * (1.0 - rec["g"] ** 2),
                                     go * rec["o"] * (1.0 - rec["o"])], axis=1)
                g_w_in[layer] += rec["x"].T @ gz
                g_w_rec[layer] += rec["h_prev"].T @ gz
                g_bias[layer] += gz.sum(axis=0)
                gx_seq[:, t, :] = gz @ self.w_in[layer].T
                gh_next = gz @ self.w_rec[layer].T
            gh_seq = gx_seq  # feeds the layer below
        grads: list[np.ndarray] = []
        for layer in range(self.spec.layers):
            grads.extend((g_w_in[layer], g_w_rec[layer], g_bias[layer]))
        grads.extend((g_w_head, g_b_head))
        return grads, gh_seq
