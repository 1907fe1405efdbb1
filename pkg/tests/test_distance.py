import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from swampdtw import ConfigError, compute_envelope, dtw, euclidean, lb_keogh, lb_kim_fl

from conftest import full_dp_dtw, naive_envelope, path_enum_dtw, walk

finite = st.floats(-100, 100, allow_nan=False)


def pair(draw_len=st.integers(2, 24)):
    return draw_len.flatmap(
        lambda n: st.tuples(arrays(np.float64, n, elements=finite), arrays(np.float64, n, elements=finite))
    )


def test_euclidean_examples():
    assert euclidean([3, 1, 4], [3, 1, 4]) == 0
    assert euclidean([0, 0], [1, 1]) == pytest.approx(math.sqrt(2))
    with pytest.raises(ConfigError):
        euclidean([1, 2], [1, 2, 3])


def test_euclidean_equals_dtw_window_zero():
    rng = np.random.default_rng(1)
    a, b = rng.standard_normal(64), rng.standard_normal(64)
    assert abs(euclidean(a, b) - dtw(a, b, 0)) < 1e-12


def test_envelope_examples():
    e = compute_envelope([0, 0, 0], 1)
    assert e.upper.tolist() == [0, 0, 0] and e.lower.tolist() == [0, 0, 0]
    e = compute_envelope([1, 5, 2], 1)
    assert e.upper.tolist() == [5, 5, 5]
    assert e.lower.tolist() == [1, 1, 2]


def test_envelope_matches_naive():
    q = walk(256, 2)
    e = compute_envelope(q, 10)
    up, lo = naive_envelope(q, 10)
    np.testing.assert_array_equal(e.upper, up)
    np.testing.assert_array_equal(e.lower, lo)


@given(arrays(np.float64, st.integers(1, 60), elements=finite), st.data())
def test_envelope_property(q, data):
    w = data.draw(st.integers(0, len(q) - 1))
    e = compute_envelope(q, w)
    up, lo = naive_envelope(q, w)
    np.testing.assert_array_equal(e.upper, up)
    np.testing.assert_array_equal(e.lower, lo)
    assert (e.lower <= q).all() and (q <= e.upper).all()


def test_envelope_window_out_of_range():
    with pytest.raises(ConfigError):
        compute_envelope([1, 2, 3], 3)


def test_lb_keogh_examples():
    q = walk(32, 4)
    e = compute_envelope(q, 3)
    assert lb_keogh(e, (e.upper + e.lower) / 2) == 0
    e = compute_envelope([0, 0, 0], 1)
    assert lb_keogh(e, [1, 0, 0]) == 1.0
    with pytest.raises(ConfigError):
        lb_keogh(e, [1, 0])


def test_lb_keogh_abandons_above_threshold():
    e = compute_envelope([0.0] * 8, 1)
    assert lb_keogh(e, [3.0] * 8, abandon_at=1.0) > 1.0
    assert lb_keogh(e, [3.0] * 8, abandon_at=100.0) == pytest.approx(3 * math.sqrt(8))


def test_lb_kim_fl_examples():
    a = walk(10, 5)
    assert lb_kim_fl(a, a) == 0
    assert lb_kim_fl([0, 1, 2], [1, 1, 1]) == pytest.approx(math.sqrt(2))
    with pytest.raises(ConfigError):
        lb_kim_fl([1.0], [1.0])


def test_dtw_identity():
    a = walk(40, 6)
    assert dtw(a, a, 5) == 0


def test_dtw_two_point_example_against_path_enumeration():
    # three admissible paths: diagonal (cost 2), and two with an extra step (cost 3)
    expected = path_enum_dtw([0.0, 0.0], [1.0, 1.0], 1)
    assert expected == pytest.approx(math.sqrt(2))
    assert dtw([0, 0], [1, 1], 1) == pytest.approx(expected, abs=1e-15)


def test_dtw_matches_full_dp_reference():
    rng = np.random.default_rng(7)
    a, b = np.cumsum(rng.standard_normal(64)), np.cumsum(rng.standard_normal(64))
    assert abs(dtw(a, b, 5) - full_dp_dtw(a, b, 5)) < 1e-12


@given(pair(st.integers(2, 9)), st.data())
def test_dtw_matches_path_enumeration(ab, data):
    a, b = ab
    w = data.draw(st.integers(0, len(a) - 1))
    assert dtw(a, b, w) == pytest.approx(path_enum_dtw(tuple(a), tuple(b), w), rel=1e-12, abs=1e-12)


def test_dtw_rejects_bad_window():
    with pytest.raises(ConfigError):
        dtw([1, 2, 3], [1, 2, 3], 3)
    with pytest.raises(ConfigError):
        dtw([1, 2, 3], [1, 2], 1)


@given(pair(), st.data())
def test_bound_chain(ab, data):
    a, b = ab
    w = data.draw(st.integers(0, len(a) - 1))
    d = dtw(a, b, w)
    tol = 1e-9 * (1 + d)
    assert lb_kim_fl(a, b) <= d + tol
    assert lb_keogh(compute_envelope(a, w), b) <= d + tol
    assert d <= euclidean(a, b) + tol


@given(pair(), st.data())
def test_dtw_monotone_in_window(ab, data):
    a, b = ab
    w1 = data.draw(st.integers(0, len(a) - 1))
    w2 = data.draw(st.integers(w1, len(a) - 1))
    assert dtw(a, b, w1) >= dtw(a, b, w2) - 1e-9


@given(pair(), st.data())
def test_dtw_symmetric(ab, data):
    a, b = ab
    w = data.draw(st.integers(0, len(a) - 1))
    assert dtw(a, b, w) == pytest.approx(dtw(b, a, w), rel=1e-12, abs=1e-12)


@given(pair(), st.data(), st.floats(0, 500))
def test_early_abandon_consistency(ab, data, thr):
    a, b = ab
    w = data.draw(st.integers(0, len(a) - 1))
    d = dtw(a, b, w)
    d_ab = dtw(a, b, w, abandon_at=thr)
    if d <= thr:
        assert d_ab == d
    else:
        assert d_ab > thr
    env = compute_envelope(a, w)
    lb = lb_keogh(env, b)
    lb_ab = lb_keogh(env, b, abandon_at=thr)
    if lb <= thr:
        assert lb_ab == lb
    else:
        assert lb_ab > thr


def test_bound_chain_random_walk_pairs():
    rng = np.random.default_rng(11)
    for _ in range(300):
        a, b = np.cumsum(rng.standard_normal(128)), np.cumsum(rng.standard_normal(128))
        d = dtw(a, b, 8)
        assert lb_keogh(compute_envelope(a, 8), b) <= d + 1e-9
        assert lb_kim_fl(a, b) <= d + 1e-9
