"""Full-resolution distance kernels.

All kernels accumulate squared costs and take a single square root on the
way out. The ``_sq`` numba functions are the hot-path versions used by the
matrix-profile and search modules; the public wrappers validate input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from .core import ConfigError

INF = np.inf


@dataclass(frozen=True)
class Envelope:
    upper: np.ndarray
    lower: np.ndarray
    window: int

    def __len__(self) -> int:
        return self.upper.shape[0]


@numba.njit(cache=True)
def _envelope(x, w, upper, lower):
    """Clamped sliding max/min of radius ``w`` with two monotonic deques."""
    n = x.shape[0]
    dq_max = np.empty(n, dtype=np.int64)
    dq_min = np.empty(n, dtype=np.int64)
    h_max = t_max = 0
    h_min = t_min = 0
    nxt = 0
    for i in range(n):
        hi = min(n - 1, i + w)
        while nxt <= hi:
            v = x[nxt]
            while t_max > h_max and x[dq_max[t_max - 1]] <= v:
                t_max -= 1
            dq_max[t_max] = nxt
            t_max += 1
            while t_min > h_min and x[dq_min[t_min - 1]] >= v:
                t_min -= 1
            dq_min[t_min] = nxt
            t_min += 1
            nxt += 1
        lo = i - w
        while dq_max[h_max] < lo:
            h_max += 1
        while dq_min[h_min] < lo:
            h_min += 1
        upper[i] = x[dq_max[h_max]]
        lower[i] = x[dq_min[h_min]]


@numba.njit(cache=True)
def _lb_keogh_sq(upper, lower, c, abandon_sq):
    s = 0.0
    for k in range(c.shape[0]):
        v = c[k]
        if v > upper[k]:
            d = v - upper[k]
            s += d * d
        elif v < lower[k]:
            d = v - lower[k]
            s += d * d
        if s > abandon_sq:
            return INF
    return s


@numba.njit(cache=True)
def _lb_kim_fl_sq(a0, a1, b0, b1):
    d0 = a0 - b0
    d1 = a1 - b1
    return d0 * d0 + d1 * d1


@numba.njit(cache=True)
def _euclidean_sq(a, b):
    s = 0.0
    for k in range(a.shape[0]):
        d = a[k] - b[k]
        s += d * d
    return s


@numba.njit(cache=True)
def _dtw_sq(a, b, w, abandon_sq, prev, cur):
    """Banded DTW on squared costs with row-minimum early abandoning.

    ``prev``/``cur`` are scratch rows of length >= 2*w + 3 holding the band
    cells of one DP row by diagonal offset: slot k stores column i + k - w,
    slot 2w+1 is a permanent +inf sentinel.
    """
    L = a.shape[0]
    width = 2 * w + 1
    for k in range(width + 2):
        prev[k] = INF
        cur[k] = INF
    for i in range(L):
        ai = a[i]
        left = INF
        row_min = INF
        for k in range(width):
            j = i + k - w
            if j < 0 or j >= L:
                cur[k] = INF
                continue
            d = ai - b[j]
            if i == 0 and j == 0:
                best = 0.0
            else:
                # diagonal (i-1, j-1) sits in prev slot k, above (i-1, j) in slot k+1
                best = prev[k]
                up = prev[k + 1]
                if up < best:
                    best = up
                if left < best:
                    best = left
            v = d * d + best
            cur[k] = v
            left = v
            if v < row_min:
                row_min = v
        if row_min > abandon_sq:
            return INF
        tmp = prev
        prev = cur
        cur = tmp
    return prev[w]


def _as_array(x) -> np.ndarray:
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ConfigError(f"expected a one-dimensional sequence, got shape {arr.shape}")
    return arr


def _check_same_length(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[0] != b.shape[0]:
        raise ConfigError(f"length mismatch: {a.shape[0]} != {b.shape[0]}")


def _abandon_sq(abandon_at: Optional[float]) -> float:
    if abandon_at is None:
        return INF
    if abandon_at < 0:
        raise ConfigError(f"abandon threshold must be >= 0, got {abandon_at}")
    return float(abandon_at) * float(abandon_at)


def euclidean(a, b) -> float:
    a, b = _as_array(a), _as_array(b)
    _check_same_length(a, b)
    return math.sqrt(_euclidean_sq(a, b))


def compute_envelope(q, w: int) -> Envelope:
    """Upper/lower warping envelope of ``q`` with radius ``w``, clamped at the ends."""
    q = _as_array(q)
    if not 0 <= w <= max(q.shape[0] - 1, 0):
        raise ConfigError(f"window must lie in [0, {q.shape[0] - 1}], got {w}")
    upper = np.empty_like(q)
    lower = np.empty_like(q)
    _envelope(q, int(w), upper, lower)
    return Envelope(upper, lower, int(w))


def lb_keogh(env: Envelope, c, abandon_at: Optional[float] = None) -> float:
    """LB_Keogh of candidate ``c`` against the query envelope ``env``.

    With ``abandon_at`` set, the scan stops as soon as the bound provably
    exceeds it and ``inf`` is returned.
    """
    c = _as_array(c)
    if c.shape[0] != len(env):
        raise ConfigError(f"length mismatch: envelope {len(env)} != candidate {c.shape[0]}")
    return math.sqrt(_lb_keogh_sq(env.upper, env.lower, c, _abandon_sq(abandon_at)))


def lb_kim_fl(a, b) -> float:
    """First/last-point lower bound: both endpoints pair up on every warping path."""
    a, b = _as_array(a), _as_array(b)
    _check_same_length(a, b)
    if a.shape[0] < 2:
        raise ConfigError("LB_KimFL needs sequences of length >= 2")
    return math.sqrt(_lb_kim_fl_sq(a[0], a[-1], b[0], b[-1]))


def dtw(a, b, w: int, abandon_at: Optional[float] = None) -> float:
    """Sakoe-Chiba banded DTW distance with radius ``w``.

    If ``abandon_at`` is given and every cell of some DP row exceeds
    ``abandon_at**2``, ``inf`` is returned instead of the distance.
    """
    a, b = _as_array(a), _as_array(b)
    _check_same_length(a, b)
    L = a.shape[0]
    if L == 0:
        raise ConfigError("DTW of empty sequences is undefined")
    if not 0 <= w <= L - 1:
        raise ConfigError(f"window must lie in [0, {L - 1}], got {w}")
    scratch = np.empty((2, 2 * w + 3))
    return math.sqrt(_dtw_sq(a, b, int(w), _abandon_sq(abandon_at), scratch[0], scratch[1]))
