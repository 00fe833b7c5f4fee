"""Binary policy persistence.

Layout (all little-endian): 4-byte magic ``QRLP``, uint32 format version,
uint32 layer count L, (L+1) uint32 layer sizes, then per layer the weight
matrix (fan_in x fan_out, row-major float64) followed by the bias vector.
The round trip is bit-exact on parameters.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import CorruptFile, ShapeMismatch
from .mlp import MlpPolicy

MAGIC = b"QRLP"
FORMAT_VERSION = 1


def save_policy(policy: MlpPolicy, path: str | Path) -> None:
    sizes = policy.layer_sizes
    parts = [MAGIC, struct.pack("<II", FORMAT_VERSION, len(policy.weights))]
    parts.append(struct.pack(f"<{len(sizes)}I", *sizes))
    for w, b in zip(policy.weights, policy.biases):
        parts.append(np.ascontiguousarray(w, dtype="<f8").tobytes())
        parts.append(np.ascontiguousarray(b, dtype="<f8").tobytes())
    Path(path).write_bytes(b"".join(parts))


def load_policy(path: str | Path) -> MlpPolicy:
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:4] != MAGIC:
        raise CorruptFile(f"{path}: bad magic")
    version, n_layers = struct.unpack_from("<II", data, 4)
    if version != FORMAT_VERSION:
        raise CorruptFile(f"{path}: unsupported format version {version}")
    if n_layers < 1:
        raise ShapeMismatch(f"{path}: header declares {n_layers} layers")
    offset = 12
    if len(data) < offset + 4 * (n_layers + 1):
        raise CorruptFile(f"{path}: truncated header")
    sizes = struct.unpack_from(f"<{n_layers + 1}I", data, offset)
    offset += 4 * (n_layers + 1)
    if any(s < 1 for s in sizes):
        raise ShapeMismatch(f"{path}: zero-sized layer in header {sizes}")
    expected = offset + 8 * sum(fi * fo + fo for fi, fo in zip(sizes, sizes[1:]))
    if len(data) != expected:
        raise CorruptFile(f"{path}: payload {len(data)} bytes, header implies {expected}")
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        w = np.frombuffer(data, dtype="<f8", count=fan_in * fan_out, offset=offset).reshape(fan_in, fan_out)
        offset += 8 * fan_in * fan_out
        b = np.frombuffer(data, dtype="<f8", count=fan_out, offset=offset)
        offset += 8 * fan_out
        weights.append(w.astype(float))
        biases.append(b.astype(float))
    return MlpPolicy(weights, biases)
