"""Matrix-profile builders.

``ed_matrix_profile`` is the exact Euclidean profile used to seed the
best-so-far. ``lb_keogh_dsmp`` builds one level of the lower-bound
hierarchy.

At ``D > 1`` the level works on blocks of ``D`` consecutive start
positions. For a query block ``p`` and a candidate block ``q``, the bound
compares candidate frames ``q+1 .. q+L_D-1`` (fully inside the candidate
subsequence for any start in block ``q``) against PAA frames ``p+1 .. p+L_D-1``
of the series envelope with radius ``w + D - 1`` (wide enough to absorb
any phase offset between the two starts). Each frame contributes
``D * clip(mean)^2``, which never exceeds the summed per-point LB_Keogh
terms it replaces. The block minimum therefore lower-bounds the DTW nearest-neighbour
distance of every start in the block, and replicating it across the
block is admissible at every offset, not just block-aligned ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from .core import (
    ConfigError,
    Normalization,
    SlidingStats,
    TimeSeries,
    check_length,
    sliding_stats,
)
from .distance import INF, _envelope, _lb_keogh_sq
from .paa import downsample_mask

# Diagonal running sums are recomputed from scratch this many windows apart
# (in units of L) to keep floating-point drift bounded.
_REANCHOR = 4


@dataclass(frozen=True)
class Profile:
    """Matrix profile with 0-based nearest-neighbour starts."""

    distances: np.ndarray
    nn_index: np.ndarray

    def motif_pair(self) -> tuple[int, int]:
        i = int(np.argmin(self.distances))
        j = int(self.nn_index[i])
        return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class LevelProfile:
    lbmp: np.ndarray
    lb_index: np.ndarray
    factor: int
    block_profile: np.ndarray
    block_index: np.ndarray
    block_pairs: int


@numba.njit(cache=True)
def _ed_mp_raw(T, L, N, d2, idx):
    step = _REANCHOR * L
    for k in range(L, N):
        s = 0.0
        for i in range(N - k):
            j = i + k
            if i % step == 0:
                s = 0.0
                for m in range(L):
                    d = T[i + m] - T[j + m]
                    s += d * d
            else:
                d_out = T[i - 1] - T[j - 1]
                d_in = T[i + L - 1] - T[j + L - 1]
                s += d_in * d_in - d_out * d_out
            v = s if s > 0.0 else 0.0
            if v < d2[i]:
                d2[i] = v
                idx[i] = j
            if v < d2[j]:
                d2[j] = v
                idx[j] = i


@numba.njit(cache=True)
def _ed_mp_znorm(T, L, N, mu, sd, d2, idx):
    step = _REANCHOR * L
    floor = 1e-12
    for k in range(L, N):
        qt = 0.0
        for i in range(N - k):
            j = i + k
            if i % step == 0:
                qt = 0.0
                for m in range(L):
                    qt += T[i + m] * T[j + m]
            else:
                qt += T[i + L - 1] * T[j + L - 1] - T[i - 1] * T[j - 1]
            ci = sd[i] < floor
            cj = sd[j] < floor
            if ci and cj:
                v = 0.0
            elif ci or cj:
                v = float(L)
            else:
                rho = (qt - L * mu[i] * mu[j]) / (L * sd[i] * sd[j])
                v = 2.0 * L * (1.0 - rho)
                if v < 0.0:
                    v = 0.0
            if v < d2[i]:
                d2[i] = v
                idx[i] = j
            if v < d2[j]:
                d2[j] = v
                idx[j] = i


@numba.njit(cache=True)
def _pair_d2(T, L, i, j, mu, inv):
    s = 0.0
    for m in range(L):
        d = (T[i + m] - mu[i]) * inv[i] - (T[j + m] - mu[j]) * inv[j]
        s += d * d
    return s


def _mode_arrays(ts: TimeSeries, L: int, mode: Normalization, stats: Optional[SlidingStats]):
    """Per-start (mean, 1/std) so that (x - mean) * inv gives the configured view."""
    N = ts.n - L + 1
    if mode == "raw":
        return np.zeros(N), np.ones(N)
    if mode != "znorm":
        raise ConfigError(f"unknown normalization {mode!r}")
    if stats is None:
        stats = sliding_stats(ts, L)
    return np.asarray(stats.means), stats.inv_stds()


def ed_matrix_profile(
    ts: TimeSeries, L: int, mode: Normalization = "raw", stats: Optional[SlidingStats] = None
) -> Profile:
    """Exact Euclidean matrix profile, excluding trivial matches ``|i - j| < L``."""
    if L < 1:
        raise ConfigError(f"subsequence length must be >= 1, got {L}")
    check_length(ts.n, L)
    N = ts.n - L + 1
    d2 = np.full(N, np.inf)
    idx = np.full(N, -1, dtype=np.int64)
    if mode == "raw":
        _ed_mp_raw(ts.values, L, N, d2, idx)
    elif mode == "znorm":
        st = stats if stats is not None else sliding_stats(ts, L)
        # centring leaves z-normalized distances unchanged and shrinks the dot products
        centred = ts.values - ts.values.mean()
        mu = np.asarray(st.means) - ts.values.mean()
        _ed_mp_znorm(centred, L, N, mu, np.asarray(st.stds), d2, idx)
    else:
        raise ConfigError(f"unknown normalization {mode!r}")
    # exact recomputation for the neighbour each position ended up with
    mu, inv = _mode_arrays(ts, L, mode, stats)
    dist = np.empty(N)
    for i in range(N):
        j = int(idx[i])
        dist[i] = math.sqrt(_pair_d2(ts.values, L, i, j, mu, inv)) if j >= 0 else np.inf
    return Profile(dist, idx)


@numba.njit(cache=True, parallel=True)
def _lb_mp_full(T, L, w, mu, inv, pruned, cands, out, out_idx, pairs):
    N = pruned.shape[0]
    for i in numba.prange(N):
        out[i] = INF
        out_idx[i] = -1
        pairs[i] = 0
        if pruned[i]:
            continue
        q = np.empty(L)
        for m in range(L):
            q[m] = (T[i + m] - mu[i]) * inv[i]
        upper = np.empty(L)
        lower = np.empty(L)
        _envelope(q, w, upper, lower)
        c = np.empty(L)
        best = INF
        best_j = -1
        cnt = 0
        for t in range(cands.shape[0]):
            j = cands[t]
            if j - i < L and i - j < L:
                continue
            for m in range(L):
                c[m] = (T[j + m] - mu[j]) * inv[j]
            s = _lb_keogh_sq(upper, lower, c, best)
            cnt += 1
            if s < best:
                best = s
                best_j = j
        out[i] = best
        out_idx[i] = best_j
        pairs[i] = cnt


@numba.njit(cache=True, parallel=True)
def _lb_mp_full_raw(T, L, w, pruned, cands, out, out_idx, pairs):
    N = pruned.shape[0]
    for i in numba.prange(N):
        out[i] = INF
        out_idx[i] = -1
        pairs[i] = 0
        if pruned[i]:
            continue
        upper = np.empty(L)
        lower = np.empty(L)
        _envelope(T[i : i + L], w, upper, lower)
        best = INF
        best_j = -1
        cnt = 0
        for t in range(cands.shape[0]):
            j = cands[t]
            if j - i < L and i - j < L:
                continue
            s = _lb_keogh_sq(upper, lower, T[j : j + L], best)
            cnt += 1
            if s < best:
                best = s
                best_j = j
        out[i] = best
        out_idx[i] = best_j
        pairs[i] = cnt


@numba.njit(cache=True, parallel=True)
def _lb_mp_blocks(Td, Ud, Ld, F, LD, active, cand_blocks, out, out_idx, pairs):
    P = active.shape[0]
    for p in numba.prange(P):
        out[p] = INF
        out_idx[p] = -1
        pairs[p] = 0
        if not active[p]:
            continue
        best = INF
        best_q = -1
        cnt = 0
        for t in range(cand_blocks.shape[0]):
            q = cand_blocks[t]
            if q - p < LD and p - q < LD:
                continue
            cnt += 1
            s = 0.0
            for m in range(1, F + 1):
                v = Td[q + m]
                u = Ud[p + m]
                if v > u:
                    d = v - u
                    s += d * d
                else:
                    lo = Ld[p + m]
                    if v < lo:
                        d = v - lo
                        s += d * d
                if s > best:
                    break
            if s < best:
                best = s
                best_q = q
        out[p] = best
        out_idx[p] = best_q
        pairs[p] = cnt


def _frame_means(x: np.ndarray, D: int) -> np.ndarray:
    k = x.shape[0] // D
    return x[: k * D].reshape(k, D).mean(axis=1)


def _expand_index(block_index: np.ndarray, D: int, N: int, L: int) -> np.ndarray:
    """Pick a concrete non-trivial full-resolution start inside each neighbour block."""
    i = np.arange(N)
    p = i // D
    bq = block_index[p]
    q_start = bq * D
    q_end = np.minimum(q_start + D - 1, N - 1)
    j = np.clip(q_start + (i - p * D), q_start, q_end)
    after = bq > p
    j = np.where(after, np.maximum(j, i + L), np.minimum(j, i - L))
    ok = (bq >= 0) & (j >= q_start) & (j <= q_end)
    return np.where(ok, j, -1).astype(np.int64)


def lb_keogh_dsmp(
    ts: TimeSeries,
    L: int,
    D: int,
    w: int,
    pruned: Optional[np.ndarray] = None,
    mode: Normalization = "raw",
    stats: Optional[SlidingStats] = None,
) -> LevelProfile:
    """One level of the lower-bound matrix profile at PAA factor ``D``.

    Pruned positions are neither queried nor used as candidates; they come
    back as ``+inf``. ``lb_index`` holds a 0-based full-resolution start (or
    -1 if the neighbour block holds no start that is non-trivial for that
    position).
    """
    n = ts.n
    check_length(n, L)
    if not 1 <= D <= L:
        raise ConfigError(f"factor must lie in [1, {L}], got {D}")
    if not 0 <= w <= L - 1:
        raise ConfigError(f"warping window must lie in [0, {L - 1}], got {w}")
    N = n - L + 1
    if pruned is None:
        pruned = np.zeros(N, dtype=bool)
    pruned = np.ascontiguousarray(pruned, dtype=bool)
    if pruned.shape[0] != N:
        raise ConfigError(f"pruned mask has length {pruned.shape[0]}, expected {N}")
    T = ts.values

    if D == 1:
        cands = np.flatnonzero(~pruned).astype(np.int64)
        sq = np.empty(N)
        idx = np.empty(N, dtype=np.int64)
        pairs = np.empty(N, dtype=np.int64)
        if mode == "raw":
            _lb_mp_full_raw(T, L, w, pruned, cands, sq, idx, pairs)
        else:
            mu, inv = _mode_arrays(ts, L, mode, stats)
            _lb_mp_full(T, L, w, mu, inv, pruned, cands, sq, idx, pairs)
        prof = np.sqrt(sq)
        return LevelProfile(prof, idx, 1, prof, idx, int(pairs.sum()))

    if mode != "raw":
        raise ConfigError("downsampled levels (D > 1) are only defined for raw mode")
    LD = max(1, L // D)
    F = LD - 1
    W = min(w + D - 1, n - 1)
    upper = np.empty(n)
    lower = np.empty(n)
    _envelope(T, W, upper, lower)
    Td = _frame_means(T, D)
    Ud = _frame_means(upper, D)
    Ld = _frame_means(lower, D)
    blocked = downsample_mask(pruned, D)
    active = ~blocked
    cand_blocks = np.flatnonzero(active).astype(np.int64)
    P = blocked.shape[0]
    sq = np.empty(P)
    bidx = np.empty(P, dtype=np.int64)
    pairs = np.empty(P, dtype=np.int64)
    _lb_mp_blocks(Td, Ud, Ld, F, LD, active, cand_blocks, sq, bidx, pairs)
    block_profile = np.sqrt(sq)
    scaled = math.sqrt(D) * block_profile
    lbmp = np.repeat(scaled, D)[:N].copy()
    lbmp[pruned] = np.inf
    lb_index = _expand_index(bidx, D, N, L)
    lb_index[pruned] = -1
    return LevelProfile(lbmp, lb_index, D, block_profile, bidx, int(pairs.sum()))
