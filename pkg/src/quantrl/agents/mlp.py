"""Small multilayer perceptron with hand-written reverse-mode gradients.

Hidden layers use tanh, the output layer is linear. Weights are stored as
(fan_in, fan_out) matrices so a batch forward is x @ W + b. All math is
float64 and deterministic for a seeded generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ShapeMismatch


@dataclass
class MlpPolicy:
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def __post_init__(self):
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ShapeMismatch("weights and biases must pair up")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[1] != b.shape[0]:
                raise ShapeMismatch(f"layer {i}: W {w.shape} incompatible with b {b.shape}")
            if i > 0 and self.weights[i - 1].shape[1] != w.shape[0]:
                raise ShapeMismatch(f"layer {i}: fan-in {w.shape[0]} != previous fan-out")
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ShapeMismatch(f"layer {i}: non-finite parameters")

    @property
    def layer_sizes(self) -> list[int]:
        return [self.weights[0].shape[0]] + [w.shape[1] for w in self.weights]

    @property
    def input_size(self) -> int:
        return self.weights[0].shape[0]

    @property
    def output_size(self) -> int:
        return self.weights[-1].shape[1]

    def copy(self) -> "MlpPolicy":
        return MlpPolicy([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def parameters(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out


def init_mlp(layer_sizes: list[int], rng: np.random.Generator) -> MlpPolicy:
    """Glorot-uniform weights, zero biases."""
    if len(layer_sizes) < 2 or any(s < 1 for s in layer_sizes):
        raise ShapeMismatch(f"bad layer sizes {layer_sizes}")
    weights, biases = [], []
    for fan_in, fan_out in zip(layer_sizes, layer_sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpPolicy(weights, biases)


def _as_batch(policy: MlpPolicy, x: np.ndarray) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != policy.input_size:
        raise ShapeMismatch(f"input shape {x.shape} for input size {policy.input_size}")
    return x, single


def mlp_forward(policy: MlpPolicy, x: np.ndarray) -> np.ndarray:
    """Action values (or logits) for a single observation or a batch."""
    x, single = _as_batch(policy, x)
    h = x
    last = len(policy.weights) - 1
    for i, (w, b) in enumerate(zip(policy.weights, policy.biases)):
        h = h @ w + b
        if i != last:
            h = np.tanh(h)
    return h[0] if single else h


def forward_cached(policy: MlpPolicy, x: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Batch forward keeping each layer's input for the backward pass."""
    x, single = _as_batch(policy, x)
    if single:
        raise ShapeMismatch("forward_cached expects a batch")
    cache = []
    h = x
    last = len(policy.weights) - 1
    for i, (w, b) in enumerate(zip(policy.weights, policy.biases)):
        cache.append(h)
        h = h @ w + b
        if i != last:
            h = np.tanh(h)
    return h, cache


def mlp_backward(policy: MlpPolicy, cache: list[np.ndarray], grad_out: np.ndarray) -> list[np.ndarray]:
    """Gradients of a scalar loss given dL/d(output), ordered like
    policy.parameters(): [dW0, db0, dW1, db1, ...]."""
    grads: list[np.ndarray] = [None] * (2 * len(policy.weights))
    delta = np.asarray(grad_out, dtype=float)
    for i in range(len(policy.weights) - 1, -1, -1):
        inputs = cache[i]
        if i != len(policy.weights) - 1:
            # recompute the tanh output of layer i that fed layer i+1
            activated = cache[i + 1]
            delta = delta * (1.0 - activated * activated)
        grads[2 * i] = inputs.T @ delta
        grads[2 * i + 1] = delta.sum(axis=0)
        if i > 0:
            delta = delta @ policy.weights[i].T
    return grads


def log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax(logits))
