"""Central finite-difference oracle for the analytic backward passes."""

import numpy as np


def finite_difference_grads(loss_fn, params: list[np.ndarray],
                            h: float = 1e-5) -> list[np.ndarray]:
    """Central-difference gradient of ``loss_fn()`` w.r.t. every entry.

    Perturbs the parameter arrays in place and restores them; ``loss_fn``
    must read the same arrays.
    """
    grads = []
    for p in params:
        g = np.zeros_like(p)
        flat_p = p.ravel()
        flat_g = g.ravel()
        for i in range(flat_p.size):
            orig = flat_p[i]
            flat_p[i] = orig + h
            up = loss_fn()
            flat_p[i] = orig - h
            down = loss_fn()
            flat_p[i] = orig
            flat_g[i] = (up - down) / (2.0 * h)
        grads.append(g)
    return grads


def max_relative_error(analytic: list[np.ndarray], numeric: list[np.ndarray],
                       floor: float = 1e-6) -> float:
    """max |a - n| / max(floor, |a| + |n|) over all gradient entries."""
    worst = 0.0
    for a, n in zip(analytic, numeric):
        denom = np.maximum(floor, np.abs(a) + np.abs(n))
        worst = max(worst, float((np.abs(a - n) / denom).max()))
    return worst


def gradient_check(net, x: np.ndarray, target: np.ndarray,
                   h: float = 1e-5) -> float:
    """Compare analytic parameter gradients of a mean-squared-error loss
    against central finite differences; returns the max relative error.

    ``net`` must expose forward / backward / params (Mlp and Lstm do).
    """
    y, cache = net.forward(x)
    if y.shape != target.shape:
        raise ValueError(f"target shape {target.shape} != output shape {y.shape}")
    analytic, _ = net.backward(cache, 2.0 * (y - target) / y.size)

    def loss():
        out, _ = net.forward(x)
        return float(((out - target) ** 2).mean())

    numeric = finite_difference_grads(loss, net.params, h=h)
    return max_relative_error(analytic, numeric)
