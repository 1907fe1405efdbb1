"""Brute-force reference implementations.

Nothing here calls into the optimized kernels: the DTW below is a separate
DP written against absolute column indices, with no early abandoning.
"""

from __future__ import annotations

import math
import time

import numba
import numpy as np

from .core import (
    ConfigError,
    MotifResult,
    SearchConfig,
    SearchStats,
    TimeSeries,
    total_nontrivial_pairs,
)
from .mprofile import Profile

MAX_N = 20_000


@numba.njit(cache=True)
def _ref_dtw_sq(x, y, w, r0, r1):
    # r0/r1 hold DP rows over columns 0..L; column 0 is the virtual origin
    L = x.shape[0]
    big = np.inf
    for c in range(L + 1):
        r0[c] = big
        r1[c] = big
    r0[0] = 0.0
    for row in range(1, L + 1):
        c_lo = row - w
        if c_lo < 1:
            c_lo = 1
        c_hi = row + w
        if c_hi > L:
            c_hi = L
        r1[c_lo - 1] = big
        xv = x[row - 1]
        for col in range(c_lo, c_hi + 1):
            diff = xv - y[col - 1]
            m = r0[col - 1]
            if r0[col] < m:
                m = r0[col]
            if r1[col - 1] < m:
                m = r1[col - 1]
            r1[col] = diff * diff + m
        if c_hi < L:
            r1[c_hi + 1] = big
        r0, r1 = r1, r0
    return r0[L]


@numba.njit(cache=True)
def _brute(Z, L, w, eps, mp, nn, best):
    """All-pairs DTW. ``Z`` holds one (already normalized) subsequence per row.

    Pairs are visited in lexicographic order, so the tie-broken answer is the
    first visited pair within ``eps`` of the final minimum. ``keep_*`` tracks
    the visited pairs that could still be that answer.
    """
    N = Z.shape[0]
    r0 = np.empty(L + 1)
    r1 = np.empty(L + 1)
    keep_i = np.empty(64, dtype=np.int64)
    keep_j = np.empty(64, dtype=np.int64)
    keep_d = np.empty(64)
    nk = 0
    dmin = np.inf
    for i in range(N):
        for j in range(i + L, N):
            d = math.sqrt(_ref_dtw_sq(Z[i], Z[j], w, r0, r1))
            if d < mp[i]:
                mp[i] = d
                nn[i] = j
            if d < mp[j]:
                mp[j] = d
                nn[j] = i
            if nk == 0 or d < keep_d[nk - 1]:
                if nk == keep_i.shape[0]:
                    for k in range(1, nk):
                        keep_i[k - 1] = keep_i[k]
                        keep_j[k - 1] = keep_j[k]
                        keep_d[k - 1] = keep_d[k]
                    nk -= 1
                keep_i[nk] = i
                keep_j[nk] = j
                keep_d[nk] = d
                nk += 1
                if d < dmin:
                    dmin = d
                    m = 0
                    for k in range(nk):
                        if keep_d[k] <= dmin + eps:
                            keep_i[m] = keep_i[k]
                            keep_j[m] = keep_j[k]
                            keep_d[m] = keep_d[k]
                            m += 1
                    nk = m
    for k in range(nk):
        if keep_d[k] <= dmin + eps:
            best[0] = keep_i[k]
            best[1] = keep_j[k]
            return keep_d[k]
    return np.inf


def _subsequence_matrix(ts: TimeSeries, cfg: SearchConfig) -> np.ndarray:
    L = cfg.subsequence_length
    N = ts.n - L + 1
    Z = np.lib.stride_tricks.sliding_window_view(ts.values, L)[:N].copy()
    if cfg.normalization == "znorm":
        mu = Z.mean(axis=1, keepdims=True)
        sd = Z.std(axis=1, keepdims=True)
        flat = sd[:, 0] < 1e-12
        sd[flat] = 1.0
        Z = (Z - mu) / sd
        Z[flat] = 0.0
    return np.ascontiguousarray(Z)


def _run(ts: TimeSeries, cfg: SearchConfig, force: bool):
    cfg.check_series(ts)
    if ts.n > MAX_N and not force:
        raise ConfigError(
            f"brute force over n={ts.n} > {MAX_N} points is refused; pass force=True to override"
        )
    L = cfg.subsequence_length
    N = ts.n - L + 1
    Z = _subsequence_matrix(ts, cfg)
    mp = np.full(N, np.inf)
    nn = np.full(N, -1, dtype=np.int64)
    best = np.full(2, -1, dtype=np.int64)
    t0 = time.perf_counter()
    d = _brute(Z, L, cfg.warp_window, cfg.epsilon, mp, nn, best)
    elapsed = time.perf_counter() - t0
    return Profile(mp, nn), (int(best[0]), int(best[1]), float(d)), elapsed


def brute_force_dtw_mp(ts: TimeSeries, cfg: SearchConfig, force: bool = False) -> Profile:
    """Exhaustive DTW matrix profile, O(n^2 L w). Refuses n > 20,000 unless forced."""
    return _run(ts, cfg, force)[0]


def brute_force_motif(ts: TimeSeries, cfg: SearchConfig, force: bool = False) -> MotifResult:
    """Exhaustive top-1 DTW motif with the same tie-break rule as the fast search."""
    _, (i, j, d), elapsed = _run(ts, cfg, force)
    N = ts.n - cfg.subsequence_length + 1
    total = total_nontrivial_pairs(N, cfg.subsequence_length)
    stats = SearchStats(
        n_positions=N,
        total_pairs=total,
        phase2_pairs=total,
        phase2_dtw_calls=total,
        timings={"total": elapsed},
    )
    return MotifResult(i + 1, j + 1, d, stats)
