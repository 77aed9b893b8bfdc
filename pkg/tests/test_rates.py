import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rovib.rates import (
    AccumulationModel,
    RateChain,
    accumulate,
    microwave_transfer_frequencies,
    production_rate,
    scale_rate,
)


def test_production_rates_exact():
    assert production_rate(RateChain(5e-3, 20, 0.40, 0.01, 0.20)) == 125.0
    assert production_rate(RateChain(0.2, 20, 0.40, 0.01, 0.20)) == 5000.0
    assert production_rate(RateChain(0.3, 20, 1, 1, 1)) == 6.0


def test_trace_lists_every_factor():
    trace = dict(RateChain(5e-3, 20, 0.40, 0.01, 0.20).trace())
    assert trace["detected_ions_per_s"] == 0.1
    assert trace["total_efficiency"] == 0.0008
    assert trace["production_rate_per_s"] == 125.0


@pytest.mark.parametrize(
    "args",
    [(-1, 20, 0.4, 0.01, 0.2), (1, 0, 0.4, 0.01, 0.2), (1, 20, 0.0, 0.01, 0.2), (1, 20, 0.4, 1.2, 0.2)],
)
def test_chain_validation(args):
    with pytest.raises(ValueError):
        RateChain(*args)


def test_scale_rate():
    assert scale_rate(5e3, 10, 10) == 5e5
    assert scale_rate(123.4, 1, 1) == 123.4
    assert scale_rate(123.4, 2, 0.5) == 123.4
    with pytest.raises(ValueError):
        scale_rate(1.0, 0, 1)


def test_microwave_ladder():
    f = microwave_transfer_frequencies(5.62, 2, 0)
    assert f == pytest.approx([22.48, 11.24], rel=1e-15)
    assert abs(f[0] - 22.5) <= 0.1 and abs(f[1] - 11.2) <= 0.1
    assert microwave_transfer_frequencies(5.62, 1, 0) == [11.24]
    assert microwave_transfer_frequencies(5.62, 0, 0) == []
    with pytest.raises(ValueError):
        microwave_transfer_frequencies(5.62, 0, 2)


def test_accumulation_examples():
    assert accumulate(AccumulationModel(5e5, 0.0, 2.0)) == 1e6
    assert accumulate(AccumulationModel(125.0, 0.5, 1.0)) == pytest.approx(250 * (1 - math.exp(-0.5)), rel=1e-15)
    assert accumulate(AccumulationModel(125.0, 0.5, 1.0)) == pytest.approx(98.367, abs=1e-3)
    assert accumulate(AccumulationModel(125.0, 0.5, 1e4)) == pytest.approx(250.0, rel=1e-15)
    with pytest.raises(ValueError):
        AccumulationModel(-1.0)


frac = st.floats(min_value=1e-3, max_value=1.0)


@given(st.floats(min_value=1e-4, max_value=1e3), st.floats(min_value=0.1, max_value=10), frac, frac, frac,
       st.floats(min_value=0.1, max_value=1.0))
def test_production_rate_homogeneity(n, rep, ov, pi, pd, s):
    r = production_rate(RateChain(n, rep, ov, pi, pd))
    assert production_rate(RateChain(n * 3, rep, ov, pi, pd)) == pytest.approx(3 * r, rel=1e-12)
    assert production_rate(RateChain(n, rep, ov * s, pi, pd)) == pytest.approx(r / s, rel=1e-12)
    assert production_rate(RateChain(n, rep, ov, pi * s, pd)) == pytest.approx(r / s, rel=1e-12)
    assert production_rate(RateChain(n, rep, ov, pi, pd * s)) == pytest.approx(r / s, rel=1e-12)


@given(st.floats(min_value=0.01, max_value=100), st.integers(min_value=1, max_value=40))
def test_microwave_frequencies_decrease(B, J):
    f = microwave_transfer_frequencies(B, J, 0)
    assert len(f) == J
    assert all(a > b for a, b in zip(f, f[1:]))


@given(st.floats(min_value=0.1, max_value=1e6), st.floats(min_value=1e-3, max_value=10),
       st.floats(min_value=0.0, max_value=50), st.floats(min_value=1e-3, max_value=5))
def test_accumulation_monotone_concave(R, G, t, dt):
    n0 = accumulate(AccumulationModel(R, G, t))
    n1 = accumulate(AccumulationModel(R, G, t + dt))
    n2 = accumulate(AccumulationModel(R, G, t + 2 * dt))
    assert n1 >= n0
    assert n2 - n1 <= (n1 - n0) * (1 + 1e-9) + 1e-9 * R
    assert n2 <= R / G * (1 + 1e-12)
