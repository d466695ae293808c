import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from noisyflood.engine import FloodOutcome, FloodParams, flood
from noisyflood.metrics import aggregate, mean_and_stderr, rch_of, relative_change, ret_of
from noisyflood.model import build_topology

COMPLETE10 = build_topology([(np.cos(a) * 10, np.sin(a) * 10) for a in np.linspace(0, 6, 10)], 100)


def _outcome(n, reached, senders):
    return FloodOutcome(0, frozenset(reached), frozenset(senders), tuple([0] * n))


def test_noiseless_pure_flood_complete_graph():
    out = flood(COMPLETE10, 0, FloodParams(1, 1), np.random.default_rng(0))
    assert rch_of(out, 10) == 0.9
    assert ret_of(out, 10) == 1.0


def test_dead_channel_metrics():
    out = flood(COMPLETE10, 3, FloodParams(1, 0), np.random.default_rng(0))
    assert rch_of(out, 10) == 0
    assert ret_of(out, 10) == 1 / 10


def test_chain3_expected_rch():
    # 0.75 expected reached nodes out of 3
    chain = build_topology([(0, 0), (100, 0), (200, 0)], 100)
    rng = np.random.default_rng(77)
    vals = np.array([rch_of(flood(chain, 0, FloodParams(1, 0.5), rng), 3) for _ in range(50_000)])
    assert abs(vals.mean() - 0.25) <= 3 * vals.std(ddof=1) / math.sqrt(len(vals))


@given(st.integers(2, 500), st.data())
def test_scale_free(n, data):
    k = data.draw(st.integers(0, n - 1))
    m = data.draw(st.integers(1, n))
    small = _outcome(n, range(1, k + 1), range(m))
    big = _outcome(2 * n, range(1, 2 * k + 1), range(2 * m))
    assert rch_of(small, n) == pytest.approx(rch_of(big, 2 * n))
    assert ret_of(small, n) == pytest.approx(ret_of(big, 2 * n))


def test_aggregate_single():
    p = aggregate([(0.5, 0.3)])
    assert (p.rch, p.ret, p.rch_stderr, p.ret_stderr, p.sample_count) == (0.5, 0.3, 0.0, 0.0, 1)


def test_aggregate_pair():
    p = aggregate([(0.4, 0.2), (0.6, 0.4)])
    assert p.rch == pytest.approx(0.5)
    assert p.ret == pytest.approx(0.3)


def test_aggregate_stderr_matches_population_value():
    # uniform(0, 1) has sd 1/sqrt(12); at 1e4 samples the standard error should be ~ sd / 100
    rng = np.random.default_rng(1)
    pts = rng.random((10_000, 2))
    p = aggregate(map(tuple, pts))
    assert p.rch_stderr == pytest.approx(1 / math.sqrt(12) / 100, rel=0.05)
    assert p.ret_stderr == pytest.approx(pts[:, 1].std(ddof=1) / 100, rel=1e-12)


def test_aggregate_empty():
    with pytest.raises(ValueError):
        aggregate([])
    with pytest.raises(ValueError):
        mean_and_stderr([])


def test_aggregate_is_reproducible_and_order_insensitive():
    rng = np.random.default_rng(2)
    pts = [tuple(x) for x in rng.random((1000, 2))]
    a, b = aggregate(pts), aggregate(pts)
    assert a == b
    c = aggregate(reversed(pts))
    assert c.rch == pytest.approx(a.rch, rel=1e-12)


@pytest.mark.parametrize("v1,v,expected", [(0.7, 0.7, 0.0), (0.8, 0.62, 22.5), (1.0, 0.0, 100.0)])
def test_relative_change(v1, v, expected):
    assert relative_change(v1, v) == pytest.approx(expected, abs=1e-9)


def test_relative_change_reproduces_ratio():
    # any pair with V(p_c) / V(1) = 0.775 gives 22.5 %
    for v1 in (0.2, 0.5, 0.97):
        assert relative_change(v1, 0.775 * v1) == pytest.approx(22.5)


def test_relative_change_undefined_baseline():
    with pytest.raises(ValueError):
        relative_change(0.0, 0.0)


@given(st.floats(1e-6, 1.0), st.floats(0, 1), st.floats(0, 1))
def test_relative_change_monotone(v1, a, b):
    assert relative_change(v1, v1) == 0
    if a < b:
        assert relative_change(v1, a) > relative_change(v1, b)
