import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from swampdtw import ConfigError, DataError, SearchConfig, TimeSeries, sliding_stats, subsequence_view
from swampdtw.core import total_nontrivial_pairs

from conftest import walk


def test_sliding_stats_constant():
    s = sliding_stats(TimeSeries([1, 1, 1, 1]), 2)
    np.testing.assert_array_equal(s.means, [1, 1, 1])
    np.testing.assert_array_equal(s.stds, [0, 0, 0])


def test_sliding_stats_two_points_population_std():
    s = sliding_stats(TimeSeries([0, 2]), 2)
    assert s.means.tolist() == [1.0]
    assert s.stds.tolist() == [1.0]


def test_sliding_stats_matches_per_window():
    x = walk(128, 3)
    s = sliding_stats(TimeSeries(x), 16)
    win = np.lib.stride_tricks.sliding_window_view(x, 16)
    np.testing.assert_allclose(s.means, win.mean(axis=1), rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(s.stds, win.std(axis=1), rtol=1e-10, atol=1e-12)


@given(
    arrays(np.float64, st.integers(8, 300), elements=st.floats(-1e3, 1e3)),
    st.integers(1, 8),
)
def test_sliding_stats_property(x, L):
    s = sliding_stats(TimeSeries(x), L)
    win = np.lib.stride_tricks.sliding_window_view(x, L)
    scale = max(1.0, float(np.abs(x).max()))
    np.testing.assert_allclose(s.means, win.mean(axis=1), rtol=1e-10, atol=1e-10 * scale)
    np.testing.assert_allclose(s.stds, win.std(axis=1), rtol=1e-10, atol=1e-7 * scale)
    assert (s.stds >= 0).all()


def test_sliding_stats_length_out_of_range():
    with pytest.raises(ConfigError):
        sliding_stats(TimeSeries([1.0, 2.0]), 3)
    with pytest.raises(ConfigError):
        sliding_stats(TimeSeries([1.0, 2.0]), 0)


def test_subsequence_view_examples():
    assert subsequence_view(TimeSeries([5, 5, 5]), 1, 3, "znorm").tolist() == [0, 0, 0]
    assert subsequence_view(TimeSeries([1, 2, 3]), 2, 2, "raw").tolist() == [2, 3]
    assert subsequence_view(TimeSeries([0, 2]), 1, 2, "znorm").tolist() == [-1, 1]


def test_subsequence_view_start_out_of_range():
    with pytest.raises(ConfigError):
        subsequence_view(TimeSeries([1, 2, 3]), 3, 2)
    with pytest.raises(ConfigError):
        subsequence_view(TimeSeries([1, 2, 3]), 0, 2)


@given(arrays(np.float64, st.integers(10, 80), elements=st.floats(-1e3, 1e3)), st.data())
def test_znorm_view_has_zero_mean_unit_std(x, data):
    L = data.draw(st.integers(2, 10))
    start = data.draw(st.integers(1, len(x) - L + 1))
    ts = TimeSeries(x)
    z = subsequence_view(ts, start, L, "znorm", sliding_stats(ts, L))
    assert len(z) == L
    if np.all(z == 0):
        return
    assert abs(z.mean()) < 1e-9
    assert abs(z.std() - 1) < 1e-9


def test_timeseries_rejects_non_finite():
    with pytest.raises(DataError, match="position 2"):
        TimeSeries([1.0, np.nan, 3.0])
    with pytest.raises(DataError):
        TimeSeries([np.inf])


def test_timeseries_is_immutable():
    ts = TimeSeries([1.0, 2.0])
    with pytest.raises(ValueError):
        ts.values[0] = 5.0


@pytest.mark.parametrize(
    "L,w,mode",
    [(3, 0, "raw"), (10, 10, "raw"), (10, -1, "raw"), (10, 2, "minmax")],
)
def test_config_rejects_out_of_range(L, w, mode):
    with pytest.raises(ConfigError):
        SearchConfig(L, w, mode)


def test_config_series_length():
    cfg = SearchConfig(10, 2)
    cfg.check_series(TimeSeries(np.zeros(20)))
    with pytest.raises(DataError):
        cfg.check_series(TimeSeries(np.zeros(19)))


def test_total_nontrivial_pairs_matches_count():
    for N, L in [(10, 4), (25, 7), (8, 4), (5, 5)]:
        brute = sum(1 for i in range(N) for j in range(i + 1, N) if j - i >= L)
        assert total_nontrivial_pairs(N, L) == brute
