"""Counter-based uniform variates with per-trial substreams.

The generator is SplitMix64 (Steele, Lea & Flood): the j-th raw draw of a
stream with state ``base`` is ``mix64(base + j * GAMMA)`` where ``mix64``
is the standard 64-bit finalizer and GAMMA the golden-ratio increment.
Stream state is derived only from ``(seed, trial_index)``, so every trial
reproduces the same variates whether it runs alone, inside a vectorized
batch, or on any worker - the contract all experiment determinism rests on.

Uniforms take the top 53 bits of a raw draw, giving values in [0, 1).
"""

from __future__ import annotations

import numpy as np

ALGORITHM = "splitmix64-counter/v1"

_MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_U_GAMMA = np.uint64(GAMMA)
_U_MIX1 = np.uint64(_MIX1)
_U_MIX2 = np.uint64(_MIX2)
_SH30 = np.uint64(30)
_SH27 = np.uint64(27)
_SH31 = np.uint64(31)
_SH11 = np.uint64(11)
_TO_UNIT = 2.0 ** -53


def mix64(z: int) -> int:
    """Scalar SplitMix64 finalizer on Python ints (reference path)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _SH30)) * _U_MIX1
    z = (z ^ (z >> _SH27)) * _U_MIX2
    return z ^ (z >> _SH31)


def stream_base(seed: int, trial_index: int) -> int:
    return mix64((mix64(seed ^ GAMMA) + trial_index) & _MASK)


def uniform_matrix(seed: int, trial_indices: np.ndarray, n: int) -> np.ndarray:
    """Row t = first ``n`` uniforms of the (seed, trial_indices[t]) stream."""
    trials = np.asarray(trial_indices, dtype=np.uint64)
    base = _mix64_np(np.uint64(mix64(seed ^ GAMMA)) + trials)
    steps = (np.arange(1, n + 1, dtype=np.uint64) * _U_GAMMA)[None, :]
    raw = _mix64_np(base[:, None] + steps)
    return (raw >> _SH11).astype(np.float64) * _TO_UNIT


def uniforms(seed: int, trial_index: int, n: int) -> np.ndarray:
    """The first ``n`` uniforms of one trial stream (same values as the matrix row)."""
    return uniform_matrix(seed, np.array([trial_index], dtype=np.uint64), n)[0]


def weighted_pick(weights: np.ndarray, prefix: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Cumulative-inversion pick along the last axis.

    ``prefix`` must be the cumulative sum of ``weights`` along the last
    axis.  A boundary hit (u * total landing exactly on a prefix value)
    resolves to the lower index; leading zero-weight buckets are skipped.
    """
    total = prefix[..., -1]
    target = u * total
    raw = (prefix < target[..., None]).sum(axis=-1)
    first_nz = (weights > 0).argmax(axis=-1)
    return np.maximum(raw, first_nz)
