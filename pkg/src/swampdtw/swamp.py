"""Exact top-1 DTW motif search.

Phase I seeds the best-so-far with the true DTW distance of the Euclidean
motif. It then walks the lower-bound hierarchy from ``D = L`` down to
``D = 1``, pruning every start whose bound exceeds the best-so-far. Phase II
scans the surviving starts in ascending order of their ``D = 1`` bound. Each
pair goes through LB_KimFL, early-abandoning LB_Keogh and early-abandoning
DTW.

Ties: the answer is the lexicographically smallest pair whose distance is
within ``epsilon`` of the minimum. To get that exactly, pruning keeps
anything whose bound is ``<= best_so_far + epsilon``. Every evaluated pair
that might still win is kept on a small Pareto front over
(lexicographic order, distance).
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np

from .core import (
    LevelStats,
    MotifResult,
    SearchConfig,
    SearchStats,
    TimeSeries,
    sliding_stats,
    total_nontrivial_pairs,
)
from .distance import INF, _dtw_sq, _envelope, _lb_keogh_sq
from .mprofile import LevelProfile, Profile, _mode_arrays, ed_matrix_profile, lb_keogh_dsmp

log = logging.getLogger(__name__)

_FRONT_CAP = 256
_HISTORY_CAP = 4096

# counter slots filled by the phase-two kernel
_PAIRS, _KIM, _KEOGH, _DTW, _IMPROVED, _PRUNED, _HIST = range(7)


@numba.njit(cache=True)
def _front_insert(fi, fj, fd, size, i, j, d):
    """Insert (i, j, d) into a front sorted lexicographically with strictly decreasing d."""
    for k in range(size):
        if (fi[k] < i or (fi[k] == i and fj[k] <= j)) and fd[k] <= d:
            return size
    m = 0
    for k in range(size):
        after = fi[k] > i or (fi[k] == i and fj[k] > j)
        if after and fd[k] >= d:
            continue
        fi[m] = fi[k]
        fj[m] = fj[k]
        fd[m] = fd[k]
        m += 1
    if m == fi.shape[0]:
        # full: the lexicographically first entry has the largest distance
        for k in range(1, m):
            fi[k - 1] = fi[k]
            fj[k - 1] = fj[k]
            fd[k - 1] = fd[k]
        m -= 1
    pos = m
    for k in range(m):
        if fi[k] > i or (fi[k] == i and fj[k] > j):
            pos = k
            break
    for k in range(m, pos, -1):
        fi[k] = fi[k - 1]
        fj[k] = fj[k - 1]
        fd[k] = fd[k - 1]
    fi[pos] = i
    fj[pos] = j
    fd[pos] = d
    return m + 1


@numba.njit(cache=True)
def _front_trim(fi, fj, fd, size, thr):
    m = 0
    for k in range(size):
        if fd[k] <= thr:
            fi[m] = fi[k]
            fj[m] = fj[k]
            fd[m] = fd[k]
            m += 1
    return m


@numba.njit(cache=True)
def _phase_two(
    T, L, w, mu, inv, znorm, lbmp, lb_index, pruned, order, sorted_order,
    bsf, eps, fi, fj, fd, fsize, counters, audit_bound, audit_bsf, audit_level,
    hist_d, hist_i, hist_j,
):
    N = pruned.shape[0]
    n_c = 0
    for k in range(N):
        if not pruned[k]:
            n_c += 1
    cands = np.empty(n_c, dtype=np.int64)
    n_c = 0
    for k in range(N):
        if not pruned[k]:
            cands[n_c] = k
            n_c += 1

    q = np.empty(L)
    upper = np.empty(L)
    lower = np.empty(L)
    cbuf = np.empty(L)
    prev = np.empty(2 * w + 3)
    cur = np.empty(2 * w + 3)
    thr = bsf + eps
    thr_sq = thr * thr

    for t in range(order.shape[0]):
        i = order[t]
        if lbmp[i] > thr:
            if sorted_order:
                break
            continue
        if pruned[i]:
            continue
        for m in range(L):
            q[m] = (T[i + m] - mu[i]) * inv[i]
        _envelope(q, w, upper, lower)
        a0 = q[0]
        a1 = q[L - 1]
        nn = lb_index[i]
        first = nn if nn >= i + L else -1
        # first candidate index >= i + L
        lo = 0
        hi = n_c
        while lo < hi:
            mid = (lo + hi) // 2
            if cands[mid] < i + L:
                lo = mid + 1
            else:
                hi = mid
        step = -1 if first >= 0 else 0
        pos = lo
        while True:
            if step == -1:
                j = first
                step = 0
            else:
                if pos >= n_c:
                    break
                j = cands[pos]
                pos += 1
                if j == first:
                    continue
            if pruned[j]:
                continue
            if pruned[i]:
                break
            counters[_PAIRS] += 1
            counters[_KIM] += 1
            b0 = (T[j] - mu[j]) * inv[j]
            b1 = (T[j + L - 1] - mu[j]) * inv[j]
            d0 = a0 - b0
            d1 = a1 - b1
            if d0 * d0 + d1 * d1 > thr_sq:
                continue
            if znorm:
                for m in range(L):
                    cbuf[m] = (T[j + m] - mu[j]) * inv[j]
                c = cbuf
            else:
                c = T[j : j + L]
            counters[_KEOGH] += 1
            if _lb_keogh_sq(upper, lower, c, thr_sq) > thr_sq:
                continue
            counters[_DTW] += 1
            dsq = _dtw_sq(q, c, w, thr_sq, prev, cur)
            if dsq > thr_sq:
                continue
            d = math.sqrt(dsq)
            fsize = _front_insert(fi, fj, fd, fsize, i, j, d)
            if d < bsf:
                bsf = d
                thr = bsf + eps
                thr_sq = thr * thr
                counters[_IMPROVED] += 1
                h = counters[_HIST]
                if h < hist_d.shape[0]:
                    hist_d[h] = d
                    hist_i[h] = i
                    hist_j[h] = j
                    counters[_HIST] = h + 1
                fsize = _front_trim(fi, fj, fd, fsize, thr)
                for k in range(n_c):
                    x = cands[k]
                    if not pruned[x] and lbmp[x] > thr:
                        pruned[x] = True
                        audit_bound[x] = lbmp[x]
                        audit_bsf[x] = bsf
                        audit_level[x] = -1
                        counters[_PRUNED] += 1
    return bsf, fsize


@dataclass
class PhaseOneState:
    best_so_far: float
    best_pair: tuple[int, int]
    pruned: np.ndarray
    level: LevelProfile
    ed_profile: Profile
    levels: list[LevelStats]
    # per-position audit: governing bound, best-so-far and level factor at pruning time
    audit_bound: np.ndarray
    audit_bsf: np.ndarray
    audit_level: np.ndarray
    history: list[tuple[float, int, int]] = field(default_factory=list)
    evaluated: list[tuple[int, int, float]] = field(default_factory=list)
    dtw_calls: int = 0
    timings: dict[str, float] = field(default_factory=dict)


@dataclass
class SwampRun:
    result: MotifResult
    phase_one: PhaseOneState
    history: list[tuple[float, int, int]]
    level_profiles: list[LevelProfile]


def level_schedule(L: int, mode: str = "raw") -> list[int]:
    """Halving schedule L, L//2, ..., 1; znorm mode only runs the full-resolution level."""
    if mode == "znorm":
        return [1]
    out = []
    D = L
    while D > 0:
        out.append(D)
        D //= 2
    return out


def _pair_dtw(T, L, w, mu, inv, i, j, scratch) -> float:
    a = (T[i : i + L] - mu[i]) * inv[i]
    b = (T[j : j + L] - mu[j]) * inv[j]
    return math.sqrt(_dtw_sq(a, b, w, INF, scratch[0], scratch[1]))


def compute_dsmp(
    ts: TimeSeries,
    cfg: SearchConfig,
    keep_levels: Optional[list] = None,
) -> PhaseOneState:
    """Phase I: seed with the Euclidean motif, then prune level by level.

    Each level's argmin pair is confirmed with a true DTW distance; only
    true distances ever lower the best-so-far.
    """
    cfg.check_series(ts)
    L, w, eps = cfg.subsequence_length, cfg.warp_window, cfg.epsilon
    T = ts.values
    N = ts.n - L + 1
    stats = sliding_stats(ts, L) if cfg.normalization == "znorm" else None
    mu, inv = _mode_arrays(ts, L, cfg.normalization, stats)
    scratch = np.empty((2, 2 * w + 3))
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    ed = ed_matrix_profile(ts, L, cfg.normalization, stats)
    timings["ed_profile"] = time.perf_counter() - t0
    i0, j0 = ed.motif_pair()
    bsf = _pair_dtw(T, L, w, mu, inv, i0, j0, scratch)
    best = (i0, j0)
    dtw_calls = 1
    history = [(bsf, i0, j0)]
    evaluated = [(i0, j0, bsf)]
    log.debug("seed pair %s ED=%.6g DTW=%.6g", best, ed.distances[i0], bsf)

    pruned = np.zeros(N, dtype=bool)
    # starts with no non-trivial partner (only when n < 3L - 1) take part in no pair;
    # they are left out of the mask so they do not count towards p
    pos = np.arange(N)
    has_partner = (pos >= L) | (pos + L <= N - 1)
    audit_bound = np.full(N, np.nan)
    audit_bsf = np.full(N, np.nan)
    audit_level = np.zeros(N, dtype=np.int64)
    levels: list[LevelStats] = []
    level = None
    t1 = time.perf_counter()
    for D in level_schedule(L, cfg.normalization):
        level = lb_keogh_dsmp(ts, L, D, w, pruned, cfg.normalization, stats)
        if keep_levels is not None:
            keep_levels.append(level)
        lbmp = level.lbmp
        k = int(np.argmin(lbmp))
        min_lb = float(lbmp[k])
        confirm = None
        if math.isfinite(min_lb):
            j = int(level.lb_index[k])
            if j < 0:
                # the argmin start has no legal partner in its neighbour block; try its block-mates
                same = np.flatnonzero((lbmp == min_lb) & (level.lb_index >= 0))
                if same.size:
                    k = int(same[0])
                    j = int(level.lb_index[k])
            if j >= 0:
                a, b = (k, j) if k < j else (j, k)
                confirm = _pair_dtw(T, L, w, mu, inv, a, b, scratch)
                dtw_calls += 1
                evaluated.append((a, b, confirm))
                if confirm < bsf:
                    bsf = confirm
                    best = (a, b)
                    history.append((bsf, a, b))
        newly = ~pruned & has_partner & (lbmp > bsf + eps)
        audit_bound[newly] = lbmp[newly]
        audit_bsf[newly] = bsf
        audit_level[newly] = D
        pruned |= newly
        levels.append(
            LevelStats(
                factor=D,
                block_pairs=level.block_pairs,
                newly_pruned=int(newly.sum()),
                pruned_total=int(pruned.sum()),
                min_bound=min_lb,
                confirmation_distance=confirm,
            )
        )
        log.debug("level D=%d min_lb=%.6g bsf=%.6g pruned=%d/%d", D, min_lb, bsf, pruned.sum(), N)
    timings["levels"] = time.perf_counter() - t1
    timings["phase1"] = time.perf_counter() - t0
    return PhaseOneState(
        best_so_far=bsf,
        best_pair=best,
        pruned=pruned,
        level=level,
        ed_profile=ed,
        levels=levels,
        audit_bound=audit_bound,
        audit_bsf=audit_bsf,
        audit_level=audit_level,
        history=history,
        evaluated=evaluated,
        dtw_calls=dtw_calls,
        timings=timings,
    )


def collect_stats(state: PhaseOneState, counters: np.ndarray, n_positions: int, L: int,
                  timings: dict[str, float]) -> SearchStats:
    pruned_before = state.levels[-1].pruned_total if state.levels else 0
    return SearchStats(
        n_positions=n_positions,
        total_pairs=total_nontrivial_pairs(n_positions, L),
        levels=list(state.levels),
        pruned_before_phase2=pruned_before,
        phase1_dtw_calls=state.dtw_calls,
        phase2_pairs=int(counters[_PAIRS]),
        phase2_kim_fl_calls=int(counters[_KIM]),
        phase2_keogh_calls=int(counters[_KEOGH]),
        phase2_dtw_calls=int(counters[_DTW]),
        phase2_improvements=int(counters[_IMPROVED]),
        pruned_in_phase2=int(counters[_PRUNED]),
        timings=dict(timings),
    )


def run_swamp(
    ts: TimeSeries,
    cfg: SearchConfig,
    shuffle_seed: Optional[int] = None,
    keep_levels: bool = False,
) -> SwampRun:
    """Full two-phase search, returning the result together with its audit trail.

    ``shuffle_seed`` visits Phase II candidates in a random order instead of
    by ascending bound; the result must not change, only the counters.
    """
    t_start = time.perf_counter()
    L, w, eps = cfg.subsequence_length, cfg.warp_window, cfg.epsilon
    levels_kept: list = [] if keep_levels else None
    state = compute_dsmp(ts, cfg, levels_kept)
    N = ts.n - L + 1
    T = ts.values
    stats = sliding_stats(ts, L) if cfg.normalization == "znorm" else None
    mu, inv = _mode_arrays(ts, L, cfg.normalization, stats)

    lbmp = state.level.lbmp
    if shuffle_seed is None:
        order = np.argsort(lbmp, kind="stable").astype(np.int64)
        sorted_order = True
    else:
        order = np.random.default_rng(shuffle_seed).permutation(N).astype(np.int64)
        sorted_order = False

    fi = np.zeros(_FRONT_CAP, dtype=np.int64)
    fj = np.zeros(_FRONT_CAP, dtype=np.int64)
    fd = np.zeros(_FRONT_CAP)
    fsize = 0
    for a, b, d in state.evaluated:
        fsize = _front_insert(fi, fj, fd, fsize, a, b, d)
    fsize = _front_trim(fi, fj, fd, fsize, state.best_so_far + eps)

    pruned = state.pruned.copy()
    audit_bound = state.audit_bound.copy()
    audit_bsf = state.audit_bsf.copy()
    audit_level = state.audit_level.copy()
    counters = np.zeros(7, dtype=np.int64)
    hist_d = np.empty(_HISTORY_CAP)
    hist_i = np.empty(_HISTORY_CAP, dtype=np.int64)
    hist_j = np.empty(_HISTORY_CAP, dtype=np.int64)

    t2 = time.perf_counter()
    bsf, fsize = _phase_two(
        T, L, w, mu, inv, cfg.normalization == "znorm", lbmp, state.level.lb_index,
        pruned, order, sorted_order, state.best_so_far, eps, fi, fj, fd, fsize,
        counters, audit_bound, audit_bsf, audit_level, hist_d, hist_i, hist_j,
    )
    t_end = time.perf_counter()

    d_min = float(fd[:fsize].min())
    pick = int(np.flatnonzero(fd[:fsize] <= d_min + eps)[0])
    i, j, d = int(fi[pick]), int(fj[pick]), float(fd[pick])

    timings = dict(state.timings)
    timings["phase2"] = t_end - t2
    timings["total"] = t_end - t_start
    sstats = collect_stats(state, counters, N, L, timings)
    history = list(state.history)
    history += [
        (float(hist_d[k]), int(hist_i[k]), int(hist_j[k])) for k in range(int(counters[_HIST]))
    ]
    state.pruned = pruned
    state.audit_bound = audit_bound
    state.audit_bsf = audit_bsf
    state.audit_level = audit_level
    result = MotifResult(i + 1, j + 1, d, sstats)
    return SwampRun(result, state, history, levels_kept or [])


def swamp_search(ts: TimeSeries, cfg: SearchConfig) -> MotifResult:
    """Exact top-1 DTW motif of ``ts`` under ``cfg``."""
    return run_swamp(ts, cfg).result
