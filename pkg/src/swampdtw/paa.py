"""Piecewise Aggregate Approximation and the downsampled LB_Keogh.

A trailing remainder shorter than one frame is dropped, so every frame
averages exactly ``factor`` source points. That keeps the ``sqrt(factor)``
rescaling admissible: by convexity of the clipped squared deviation,
``factor * clip(mean)^2 <= sum(clip^2)`` over each frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .core import ConfigError
from .distance import Envelope, _as_array


@dataclass(frozen=True)
class PaaSeries:
    values: np.ndarray
    factor: int
    source_length: int

    def __len__(self) -> int:
        return self.values.shape[0]


def _frame_means(x: np.ndarray, D: int) -> np.ndarray:
    k = x.shape[0] // D
    return x[: k * D].reshape(k, D).mean(axis=1)


def paa(ts, D: int) -> PaaSeries:
    x = _as_array(getattr(ts, "values", ts))
    n = x.shape[0]
    if not isinstance(D, (int, np.integer)) or D < 1 or D > n:
        raise ConfigError(f"PAA factor must lie in [1, {n}], got {D!r}")
    D = int(D)
    vals = x.copy() if D == 1 else _frame_means(x, D)
    return PaaSeries(vals, D, n)


def downsampled_envelope(env: Envelope, D: int) -> tuple[PaaSeries, PaaSeries]:
    """PAA of the full-resolution upper and lower envelopes, separately."""
    return paa(env.upper, D), paa(env.lower, D)


@numba.njit(cache=True, inline="always")
def _clip_sq_sum(upper, lower, c):
    # branchless: at most one of the two terms is non-zero
    s = 0.0
    for k in range(c.shape[0]):
        v = c[k]
        d = max(v - upper[k], 0.0) + min(v - lower[k], 0.0)
        s += d * d
    return s


def lb_keogh_paa(upper: PaaSeries, lower: PaaSeries, candidate: PaaSeries, D: int) -> float:
    """Downsampled LB_Keogh rescaled by ``sqrt(D)`` so it stays below full-resolution DTW."""
    for s in (upper, lower, candidate):
        if s.factor != D:
            raise ConfigError(f"PAA factor {s.factor} does not match D={D}")
    if not len(upper) == len(lower) == len(candidate):
        raise ConfigError(
            f"shape mismatch: upper {len(upper)}, lower {len(lower)}, candidate {len(candidate)}"
        )
    s = _clip_sq_sum(upper.values, lower.values, candidate.values)
    return math.sqrt(D) * math.sqrt(s)


def downsample_mask(pruned, D: int) -> np.ndarray:
    """AND-reduce a pruned mask over blocks of ``D`` positions.

    A block is pruned only if every position in it is; the last block may be
    shorter than ``D``.
    """
    m = np.asarray(pruned, dtype=bool)
    if D < 1:
        raise ConfigError(f"factor must be >= 1, got {D}")
    n = m.shape[0]
    if n == 0:
        return m.copy()
    k = -(-n // D)
    pad = np.ones(k * D, dtype=bool)
    pad[:n] = m
    return pad.reshape(k, D).all(axis=1)
