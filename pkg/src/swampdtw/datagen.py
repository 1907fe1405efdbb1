"""Synthetic series: random walks and random walks with one planted motif."""

from __future__ import annotations

from typing import Literal

import numpy as np

from .core import ConfigError, TimeSeries

Kind = Literal["random-walk", "planted-motif"]
KINDS = ("random-walk", "planted-motif")


def random_walk(n: int, seed: int) -> TimeSeries:
    """Cumulative sum of ``n`` unit-normal steps."""
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return TimeSeries(np.cumsum(rng.standard_normal(n)), name=f"random-walk(n={n}, seed={seed})")


def planted_motif(n: int, L: int, seed: int, noise: float = 0.0) -> tuple[TimeSeries, int, int]:
    """Random walk with its length-``L`` block at ``a`` copied to ``b`` plus noise.

    Returns the series and the 0-based starts ``a < b`` (``b >= a + L``).
    """
    if L < 1 or n < 2 * L:
        raise ConfigError(f"planted motif needs n >= 2L, got n={n}, L={L}")
    if noise < 0:
        raise ConfigError(f"noise amplitude must be >= 0, got {noise}")
    rng = np.random.default_rng(seed)
    x = np.cumsum(rng.standard_normal(n))
    a = int(rng.integers(0, n - 2 * L + 1))
    b = int(rng.integers(a + L, n - L + 1))
    x[b : b + L] = x[a : a + L] + noise * rng.standard_normal(L)
    name = f"planted-motif(n={n}, L={L}, seed={seed}, noise={noise})"
    return TimeSeries(x, name=name), a, b


def generate(kind: str, n: int, L: int, seed: int, noise: float = 0.0) -> TimeSeries:
    if kind == "random-walk":
        return random_walk(n, seed)
    if kind == "planted-motif":
        return planted_motif(n, L, seed, noise)[0]
    raise ConfigError(f"unknown generator {kind!r}; expected one of {', '.join(KINDS)}")
