"""Tightness/time spectrum of the lower bounds.

Tightness of a bound on a pair is ``LB / DTW``. Times are measured on the
representation each bound consumes inside the search: endpoints for
LB_KimFL, pre-reduced PAA frames for LB_Keogh D:1, and raw subsequences
for DTW.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numba
import numpy as np

from .core import ConfigError, TimeSeries, check_length
from .distance import _dtw_sq, _envelope
from .paa import _clip_sq_sum


@dataclass
class BoundRow:
    bound: str
    factor: Optional[int]
    mean_tightness: float
    mean_time_ns: float

    def to_dict(self) -> dict:
        return asdict(self)


def default_levels(L: int) -> list[int]:
    out, D = [], 1
    while D <= L:
        out.append(D)
        D *= 2
    return out


def sample_pairs(N: int, L: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` random pairs (i, j) with ``j - i >= L``, drawn uniformly."""
    if N - L <= 0:
        raise ConfigError("no non-trivial pairs to sample")
    out = np.empty((count, 2), dtype=np.int64)
    k = 0
    while k < count:
        i, j = rng.integers(0, N, size=2)
        if abs(int(i) - int(j)) >= L:
            out[k] = (min(i, j), max(i, j))
            k += 1
    return out


@numba.njit(cache=True)
def _time_kim(a0, a1, b0, b1, reps):
    acc = 0.0
    for _ in range(reps):
        for p in range(a0.shape[0]):
            d0 = a0[p] - b0[p]
            d1 = a1[p] - b1[p]
            acc += d0 * d0 + d1 * d1
    return acc


@numba.njit(cache=True)
def _time_keogh(U, Lo, C, reps):
    acc = 0.0
    for _ in range(reps):
        for p in range(C.shape[0]):
            acc += _clip_sq_sum(U[p], Lo[p], C[p])
    return acc


@numba.njit(cache=True)
def _time_dtw(A, B, w, reps):
    prev = np.empty(2 * w + 3)
    cur = np.empty(2 * w + 3)
    acc = 0.0
    for _ in range(reps):
        for p in range(A.shape[0]):
            acc += _dtw_sq(A[p], B[p], w, np.inf, prev, cur)
    return acc


def _best_time(fn, args, reps: int, repeats: int, n_pairs: int) -> float:
    fn(*args, 1)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args, reps)
        best = min(best, time.perf_counter() - t0)
    return best / (reps * n_pairs) * 1e9


def bench_lb(
    ts: TimeSeries,
    L: int,
    w: int,
    pair_count: int = 1000,
    levels: Optional[Sequence[int]] = None,
    seed: int = 0,
    repeats: int = 7,
    min_work: float = 2e7,
) -> list[BoundRow]:
    """Mean tightness and per-call time of every bound over sampled non-trivial pairs.

    Rows come out as LB_KimFL, then LB_Keogh from the coarsest factor to
    ``D = 1``, then DTW.
    """
    check_length(ts.n, L)
    if not 0 <= w <= L - 1:
        raise ConfigError(f"warping window must lie in [0, {L - 1}], got {w}")
    if pair_count < 1:
        raise ConfigError(f"pair count must be >= 1, got {pair_count}")
    levels = sorted(set(levels or default_levels(L)), reverse=True)
    for D in levels:
        if D < 1 or L % D:
            raise ConfigError(f"level factor {D} must divide L={L}")

    N = ts.n - L + 1
    rng = np.random.default_rng(seed)
    pairs = sample_pairs(N, L, pair_count, rng)
    x = ts.values
    A = np.stack([x[i : i + L] for i, _ in pairs])
    B = np.stack([x[j : j + L] for _, j in pairs])
    U = np.empty_like(A)
    Lo = np.empty_like(A)
    for p in range(pair_count):
        _envelope(A[p], w, U[p], Lo[p])

    prev = np.empty(2 * w + 3)
    cur = np.empty(2 * w + 3)
    true = np.sqrt([_dtw_sq(A[p], B[p], w, np.inf, prev, cur) for p in range(pair_count)])
    ok = true > 0
    if not ok.any():
        raise ConfigError("every sampled pair has DTW distance 0; tightness is undefined")

    def reps_for(cost_per_pair: float) -> int:
        return max(1, int(min_work / (pair_count * max(cost_per_pair, 1.0))))

    rows = []
    kim = np.sqrt((A[:, 0] - B[:, 0]) ** 2 + (A[:, -1] - B[:, -1]) ** 2)
    t_kim = _best_time(
        _time_kim, (A[:, 0].copy(), A[:, -1].copy(), B[:, 0].copy(), B[:, -1].copy()),
        reps_for(2), repeats, pair_count,
    )
    rows.append(BoundRow("lb_kim_fl", None, float(np.mean(kim[ok] / true[ok])), t_kim))

    for D in levels:
        k = L // D
        Ud = U.reshape(pair_count, k, D).mean(axis=2)
        Ld = Lo.reshape(pair_count, k, D).mean(axis=2)
        Cd = B.reshape(pair_count, k, D).mean(axis=2)
        lb = np.sqrt(D) * np.sqrt([_clip_sq_sum(Ud[p], Ld[p], Cd[p]) for p in range(pair_count)])
        t = _best_time(_time_keogh, (Ud, Ld, Cd), reps_for(k), repeats, pair_count)
        rows.append(BoundRow("lb_keogh", D, float(np.mean(lb[ok] / true[ok])), t))

    t_dtw = _best_time(_time_dtw, (A, B, w), reps_for(L * (2 * w + 1)), repeats, pair_count)
    rows.append(BoundRow("dtw", None, 1.0, t_dtw))
    return rows
