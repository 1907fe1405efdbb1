"""Domain types, validation and sliding statistics shared by every module.

Internally every index is 0-based. The only 1-based surfaces are
:class:`MotifResult` (``first_index``/``second_index``), the ``start``
argument of :func:`subsequence_view`, and whatever the CLI prints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numba
import numpy as np

Normalization = Literal["raw", "znorm"]

#: Standard deviations below this are treated as zero (constant subsequence).
STD_FLOOR = 1e-12
MIN_LENGTH = 4


class SwampError(ValueError):
    """Base class for every error raised by this package."""


class DataError(SwampError):
    """The input data cannot be searched (non-finite values, too short, ...)."""


class ConfigError(SwampError):
    """A search parameter is out of range."""


@dataclass(frozen=True, eq=False)
class TimeSeries:
    values: np.ndarray
    name: Optional[str] = None

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64, copy=True)
        if arr.ndim != 1:
            raise DataError(f"time series must be one-dimensional, got shape {arr.shape}")
        if arr.size == 0:
            raise DataError("time series is empty")
        bad = ~np.isfinite(arr)
        if bad.any():
            pos = int(np.flatnonzero(bad)[0])
            raise DataError(f"non-finite value {arr[pos]!r} at position {pos + 1}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of one motif search.

    ``warp_window`` is an absolute Sakoe-Chiba radius, not a fraction of
    ``subsequence_length``. Ties between candidate pairs whose distances are
    within ``epsilon`` of the minimum resolve to the lexicographically
    smallest ``(i, j)``.
    """

    subsequence_length: int
    warp_window: int = 0
    normalization: Normalization = "raw"
    epsilon: float = 1e-9

    def __post_init__(self) -> None:
        L, w = self.subsequence_length, self.warp_window
        if not isinstance(L, (int, np.integer)) or isinstance(L, bool):
            raise ConfigError(f"subsequence length must be an integer, got {L!r}")
        if not isinstance(w, (int, np.integer)) or isinstance(w, bool):
            raise ConfigError(f"warping window must be an integer, got {w!r}")
        if L < MIN_LENGTH:
            raise ConfigError(f"subsequence length must be >= {MIN_LENGTH}, got {L}")
        if not 0 <= w <= L - 1:
            raise ConfigError(f"warping window must lie in [0, {L - 1}], got {w}")
        if self.normalization not in ("raw", "znorm"):
            raise ConfigError(f"unknown normalization {self.normalization!r}")
        if not (self.epsilon >= 0 and math.isfinite(self.epsilon)):
            raise ConfigError(f"epsilon must be a finite non-negative number, got {self.epsilon!r}")

    def check_series(self, ts: TimeSeries) -> None:
        """Raise :class:`DataError` unless ``ts`` holds at least one non-trivial pair."""
        L = self.subsequence_length
        check_length(ts.n, L)

    def n_positions(self, ts: TimeSeries) -> int:
        return ts.n - self.subsequence_length + 1


@dataclass(frozen=True)
class SlidingStats:
    means: np.ndarray
    stds: np.ndarray

    def inv_stds(self) -> np.ndarray:
        """1/std with degenerate windows mapped to 0, so (x - mean) * inv is all zeros."""
        out = np.zeros_like(self.stds)
        ok = self.stds >= STD_FLOOR
        out[ok] = 1.0 / self.stds[ok]
        return out


@numba.njit(cache=True)
def _rolling_mean_std(x, L, out_mean, out_std):
    # Welford-style add/remove updates, re-anchored by a direct two-pass
    # computation every L windows so drift stays bounded.
    n_win = x.shape[0] - L + 1
    mean = 0.0
    m2 = 0.0
    for i in range(n_win):
        if i % L == 0:
            s = 0.0
            for k in range(L):
                s += x[i + k]
            mean = s / L
            m2 = 0.0
            for k in range(L):
                d = x[i + k] - mean
                m2 += d * d
        else:
            x_old = x[i - 1]
            x_new = x[i + L - 1]
            new_mean = mean + (x_new - x_old) / L
            m2 += (x_new - x_old) * (x_new - new_mean + x_old - mean)
            mean = new_mean
        out_mean[i] = mean
        out_std[i] = math.sqrt(m2 / L) if m2 > 0.0 else 0.0


def sliding_stats(ts: TimeSeries, L: int) -> SlidingStats:
    """Population mean and standard deviation of every length-``L`` window."""
    if not 1 <= L <= ts.n:
        raise ConfigError(f"window length must lie in [1, {ts.n}], got {L}")
    n_win = ts.n - L + 1
    means = np.empty(n_win)
    stds = np.empty(n_win)
    _rolling_mean_std(ts.values, L, means, stds)
    means.setflags(write=False)
    stds.setflags(write=False)
    return SlidingStats(means, stds)


def subsequence_view(
    ts: TimeSeries,
    start: int,
    L: int,
    mode: Normalization = "raw",
    stats: Optional[SlidingStats] = None,
) -> np.ndarray:
    """Return the length-``L`` subsequence beginning at 1-based ``start``.

    In ``znorm`` mode the slice is z-normalized; a window whose standard
    deviation is below ``STD_FLOOR`` comes back as all zeros.
    """
    if not 1 <= L <= ts.n:
        raise ConfigError(f"subsequence length must lie in [1, {ts.n}], got {L}")
    if not 1 <= start <= ts.n - L + 1:
        raise ConfigError(f"start must lie in [1, {ts.n - L + 1}], got {start}")
    i = start - 1
    seg = ts.values[i : i + L]
    if mode == "raw":
        return seg.copy()
    if mode != "znorm":
        raise ConfigError(f"unknown normalization {mode!r}")
    if stats is None:
        mu = float(seg.mean())
        sd = float(seg.std())
    else:
        mu, sd = float(stats.means[i]), float(stats.stds[i])
    if sd < STD_FLOOR:
        return np.zeros(L)
    return (seg - mu) / sd


def check_length(n: int, L: int) -> None:
    """A non-trivial pair needs starts ``L`` apart, hence at least ``2L`` points."""
    if n < 2 * L:
        raise DataError(
            f"series of length {n} is too short for subsequence length {L} "
            f"(need at least {2 * L} points)"
        )


def total_nontrivial_pairs(n_positions: int, L: int) -> int:
    """Number of unordered pairs (i, j) with ``j - i >= L`` among ``n_positions`` starts."""
    m = n_positions - L
    return m * (m + 1) // 2 if m > 0 else 0


@dataclass
class LevelStats:
    factor: int
    block_pairs: int
    newly_pruned: int
    pruned_total: int
    min_bound: float
    confirmation_distance: Optional[float]


@dataclass
class SearchStats:
    n_positions: int
    total_pairs: int
    levels: list[LevelStats] = field(default_factory=list)
    pruned_before_phase2: int = 0
    phase1_dtw_calls: int = 0
    phase2_pairs: int = 0
    phase2_kim_fl_calls: int = 0
    phase2_keogh_calls: int = 0
    phase2_dtw_calls: int = 0
    phase2_improvements: int = 0
    pruned_in_phase2: int = 0
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def pruned_fraction(self) -> float:
        if self.n_positions == 0:
            return 0.0
        return self.pruned_before_phase2 / self.n_positions

    @property
    def dtw_calls(self) -> int:
        return self.phase1_dtw_calls + self.phase2_dtw_calls

    @property
    def predicted_pair_bound(self) -> float:
        """(1 - p)^2 of all non-trivial pairs, plus one confirmation pair per level."""
        q = 1.0 - self.pruned_fraction
        return q * q * self.total_pairs + len(self.levels)

    @property
    def dtw_call_fraction(self) -> float:
        return self.dtw_calls / self.total_pairs if self.total_pairs else 0.0


@dataclass
class MotifResult:
    """Top-1 motif. ``first_index`` < ``second_index``, both 1-based."""

    first_index: int
    second_index: int
    distance: float
    stats: SearchStats

    @property
    def pair0(self) -> tuple[int, int]:
        return self.first_index - 1, self.second_index - 1
