"""Exact DTW motif discovery with a hierarchy of downsampled lower bounds."""

import os as _os

import numba as _numba

if "NUMBA_THREADING_LAYER" not in _os.environ:
    # the bundled TBB is too old and numba warns on every first launch
    _numba.config.THREADING_LAYER = "omp"

from .core import (
    ConfigError,
    DataError,
    MotifResult,
    SearchConfig,
    SearchStats,
    SlidingStats,
    SwampError,
    TimeSeries,
    sliding_stats,
    subsequence_view,
)
from .distance import Envelope, compute_envelope, dtw, euclidean, lb_keogh, lb_kim_fl
from .mprofile import LevelProfile, Profile, ed_matrix_profile, lb_keogh_dsmp
from .oracle import brute_force_dtw_mp, brute_force_motif
from .paa import PaaSeries, downsample_mask, downsampled_envelope, lb_keogh_paa, paa
from .swamp import compute_dsmp, run_swamp, swamp_search

__version__ = "0.1.0"
