import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from swampdtw import (
    ConfigError,
    Envelope,
    compute_envelope,
    downsample_mask,
    downsampled_envelope,
    dtw,
    lb_keogh,
    lb_keogh_paa,
    paa,
)

from conftest import walk


def test_paa_examples():
    assert paa(np.array([1.0, 3, 5, 7]), 2).values.tolist() == [2, 6]
    x = walk(50, 1)
    np.testing.assert_array_equal(paa(x, 1).values, x)


def test_paa_matches_per_frame_mean():
    x = walk(4096, 2)
    p = paa(x, 16)
    assert len(p) == 256
    ref = np.array([sum(x[16 * k : 16 * k + 16]) / 16 for k in range(256)])
    np.testing.assert_allclose(p.values, ref, rtol=0, atol=1e-12)


def test_paa_drops_remainder():
    p = paa(np.arange(7.0), 3)
    assert p.values.tolist() == [1.0, 4.0]
    assert p.source_length == 7


def test_paa_factor_out_of_range():
    with pytest.raises(ConfigError):
        paa(np.arange(4.0), 5)
    with pytest.raises(ConfigError):
        paa(np.arange(4.0), 0)


def test_downsampled_envelope_examples():
    c = np.full(12, 2.5)
    up, lo = downsampled_envelope(Envelope(c, c, 1), 4)
    assert up.values.tolist() == [2.5] * 3 and lo.values.tolist() == [2.5] * 3
    env = compute_envelope(walk(40, 3), 3)
    up, lo = downsampled_envelope(env, 1)
    np.testing.assert_array_equal(up.values, env.upper)
    np.testing.assert_array_equal(lo.values, env.lower)
    up, lo = downsampled_envelope(env, 4)
    np.testing.assert_allclose(up.values, [np.mean(env.upper[4 * k : 4 * k + 4]) for k in range(10)])
    np.testing.assert_allclose(lo.values, [np.mean(env.lower[4 * k : 4 * k + 4]) for k in range(10)])


def test_lb_keogh_paa_containment_and_identity():
    q = walk(64, 4)
    env = compute_envelope(q, 4)
    up, lo = downsampled_envelope(env, 8)
    mid = paa((env.upper + env.lower) / 2, 8)
    assert lb_keogh_paa(up, lo, mid, 8) == 0
    c = walk(64, 5)
    up1, lo1 = downsampled_envelope(env, 1)
    assert lb_keogh_paa(up1, lo1, paa(c, 1), 1) == pytest.approx(lb_keogh(env, c), rel=1e-14)


def test_lb_keogh_paa_rejects_mismatch():
    env = compute_envelope(walk(64, 4), 4)
    up, lo = downsampled_envelope(env, 8)
    with pytest.raises(ConfigError):
        lb_keogh_paa(up, lo, paa(walk(64, 5), 4), 8)
    with pytest.raises(ConfigError):
        lb_keogh_paa(up, lo, paa(walk(72, 5), 8), 8)


def test_lb_keogh_paa_admissible_random_walk_pairs():
    rng = np.random.default_rng(8)
    x = np.cumsum(rng.standard_normal(20000))
    L, w = 128, 8
    for _ in range(2500):
        i, j = sorted(rng.integers(0, len(x) - L, size=2))
        a, b = x[i : i + L], x[j : j + L]
        d = dtw(a, b, w)
        env = compute_envelope(a, w)
        for D in (2, 4, 8, 16):
            up, lo = downsampled_envelope(env, D)
            assert lb_keogh_paa(up, lo, paa(b, D), D) <= d + 1e-9


@given(st.integers(2, 40).flatmap(lambda L: st.tuples(
    arrays(np.float64, L, elements=st.floats(-50, 50)),
    arrays(np.float64, L, elements=st.floats(-50, 50)),
)), st.data())
def test_paa_bound_admissible_and_tightens_with_finer_factor(ab, data):
    a, b = ab
    L = len(a)
    w = data.draw(st.integers(0, L - 1))
    env = compute_envelope(a, w)
    full = lb_keogh(env, b)
    d = dtw(a, b, w)
    D = data.draw(st.integers(1, L))
    up, lo = downsampled_envelope(env, D)
    coarse = lb_keogh_paa(up, lo, paa(b, D), D)
    assert coarse <= full + 1e-9 * (1 + full)
    assert coarse <= d + 1e-9 * (1 + d)
    # refining a frame into equal sub-frames never loosens the bound
    k = data.draw(st.integers(1, 4))
    if D * k <= L and L % (D * k) == 0:
        up2, lo2 = downsampled_envelope(env, D * k)
        coarser = lb_keogh_paa(up2, lo2, paa(b, D * k), D * k)
        assert coarser <= coarse + 1e-9 * (1 + coarse)


def test_downsample_mask_examples():
    assert downsample_mask([True, True, False, True], 2).tolist() == [True, False]
    for D in (1, 2, 3, 5):
        assert not downsample_mask(np.zeros(11, bool), D).any()
        assert downsample_mask(np.ones(11, bool), D).all()


@given(arrays(bool, st.integers(1, 100)), st.integers(1, 12))
def test_downsample_mask_never_hides_a_live_position(m, D):
    blocks = downsample_mask(m, D)
    assert len(blocks) == -(-len(m) // D)
    for i in np.flatnonzero(~m):
        assert not blocks[i // D]
    for b in np.flatnonzero(blocks):
        assert m[b * D : b * D + D].all()
