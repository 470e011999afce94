import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tentconj.analysis import (
    alpha_factors, derivative_classify, flattening_fraction, derivative_scan, graph_length_formula,
    graph_length_polyline, hn_derivative, htilde_extremum, htilde_threshold, length_report,
    omega1_extract, slope_table,
)
from tentconj.conjugacy import ConjSystem, h_n_approx

from oracles import htilde_threshold_mp

SLOPE_VS = [F(1, 4), F(1, 3), F(2, 3), F(3, 4)]


def test_alpha_factors_rule():
    af = alpha_factors(F(3, 4), [0, 1, 1, 0])
    assert af.factors == (F(3, 2), F(1, 2), F(3, 2), F(1, 2))
    assert af.product() == F(9, 16)


@pytest.mark.parametrize("v", SLOPE_VS)
def test_slopes_match_pl_approximation(v):
    sys = ConjSystem(v)
    for n in range(2, 11):
        assert h_n_approx(sys, n).slopes() == slope_table(v, n)


def test_hn_derivative_inputs():
    v = F(3, 4)
    assert hn_derivative(v, F(1, 100), 5) == F(3, 2) ** 4
    assert hn_derivative(v, [0, 0, 0, 0], 5) == F(3, 2) ** 4
    assert hn_derivative(v, F(7, 16), 4) == hn_derivative(v, [0, 1, 1], 4)
    with pytest.raises(ValueError):
        hn_derivative(v, F(1, 4), 4)
    with pytest.raises(ValueError):
        hn_derivative(v, [0, 1], 4)
    with pytest.raises(ValueError):
        hn_derivative(v, F(1, 3), 1)


@pytest.mark.parametrize("v", [F(1, 4), F(2, 7), F(3, 4)])
def test_alternating_digits(v):
    for k in range(1, 11):
        bits = [(i + 1) % 2 for i in range(2 * k)]
        assert hn_derivative(v, bits, 2 * k + 1) == (2 * (1 - v)) ** (2 * k)


def test_identity_at_half():
    for n in range(2, 9):
        assert set(slope_table(F(1, 2), n)) == {1}


@pytest.mark.parametrize("v", [F(3, 4), F(1, 5), F(1, 2)])
def test_derivative_scan(v):
    r = derivative_scan(v, 3)
    assert r.exhaustive_checked
    if v == F(3, 4):
        assert (r.min, r.max) == (F(1, 4), F(9, 4))
    for n in range(2, 13):
        r = derivative_scan(v, n)
        assert r.min * r.max == (4 * v * (1 - v)) ** (n - 1)
        assert r.min * r.max <= 1
    assert not derivative_scan(v, 30).exhaustive_checked


def test_scan_diverges():
    small = [derivative_scan(F(1, 3), n, check_limit=0) for n in (10, 40, 80)]
    assert small[-1].min < F(1, 10**6) and small[-1].max > 10**6
    assert small[0].min > small[1].min > small[2].min


def test_classify_rational_point_is_zero():
    ev = derivative_classify(F(3, 4), F(1, 3))
    assert ev.claimed == "Zero" and ev.observed == "Zero" and not ev.contradiction
    tail = ev.right_quotients[-10:]
    assert all(a >= b for a, b in zip(tail, tail[1:])) and tail[-1] < 1e-3


def test_classify_reports_contradiction_at_zero():
    ev = derivative_classify(F(3, 4), 0)
    assert ev.observed == "Infinite" and ev.contradiction
    for m, q in zip(ev.depths, ev.right_quotients):
        assert q == pytest.approx(1.5**m)
    assert all(q is None for q in ev.left_quotients)


def test_classify_dyadic_half_small_v():
    ev = derivative_classify(F(1, 4), F(1, 2))
    assert ev.claimed == "Infinite"
    # the quotient record at this dyadic point shrinks, so the claim is flagged
    assert ev.observed == "Zero" and ev.contradiction


def test_classify_rejects_half():
    with pytest.raises(ValueError):
        derivative_classify(F(1, 2), F(1, 3))


def test_polyline_small_cases():
    expected = 0.5 * (math.sqrt(1 + 4 * 0.75**2) + math.sqrt(1 + 4 * 0.25**2))
    assert graph_length_polyline(F(3, 4), 2) == pytest.approx(expected, rel=1e-15)
    assert graph_length_polyline(F(3, 4), 2) == pytest.approx(1.460405, abs=1e-6)
    for n in range(1, 12):
        assert graph_length_polyline(F(1, 2), n) == pytest.approx(math.sqrt(2), abs=1e-12)


@pytest.mark.parametrize("v", [F(3, 10), F(13, 25), F(3, 4), F(1, 9)])
def test_polyline_non_decreasing(v):
    lengths = [graph_length_polyline(v, n) for n in range(1, 15)]
    assert all(a <= b + 1e-15 for a, b in zip(lengths, lengths[1:]))


@pytest.mark.parametrize("v", [0.3, 0.52, 0.75])
def test_formula_matches_polyline(v):
    for n in range(0, 13):
        poly = graph_length_polyline(F(v).limit_denominator(100), n + 1)
        form = graph_length_formula(v, n)
        assert form == pytest.approx(poly, rel=1e-10)


def test_formula_errors_and_large_n():
    with pytest.raises(ValueError):
        graph_length_formula(1.0, 3)
    with pytest.raises(ValueError):
        graph_length_formula(0.5, -1)
    assert graph_length_formula(0.52, 20000) == pytest.approx(1.99611, abs=5e-4)
    assert math.isfinite(graph_length_formula(0.9, 10**6))


def test_length_report():
    rep = length_report(F(3, 4), 1)
    assert rep.n == 2 and rep.terms == 2
    assert rep.formula == pytest.approx(rep.polyline, rel=1e-12)
    assert length_report(0.6, 40).polyline is None


def test_omega_at_powers_of_two():
    for v in (F(3, 4), F(1, 3)):
        for m in range(0, 12):
            assert omega1_extract(v, F(1, 1 << m), F(1, 10**9)) == pytest.approx(1.0, abs=1e-9)


def test_omega_period_one():
    v = F(3, 4)
    for x in (F(1, 3), F(5, 7), F(9, 10)):
        assert omega1_extract(v, x, F(1, 10**12)) == pytest.approx(
            omega1_extract(v, x / 2, F(1, 10**12)), abs=1e-8)
    assert omega1_extract(F(1, 2), F(2, 3), F(1, 10**9)) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        omega1_extract(v, 0, F(1, 100))


def test_htilde_examples():
    assert htilde_extremum(0.1, 3, 3).violation
    assert not htilde_extremum(0.4, 3, 3).violation
    with pytest.raises(ValueError):
        htilde_extremum(0.4, 3, 4)
    with pytest.raises(ValueError):
        htilde_extremum(0.4, 3, 0)


def test_htilde_threshold_against_high_precision():
    lo, hi = htilde_threshold(3, 3, 0.1, 0.3)
    assert hi - lo <= 1e-7
    assert lo <= htilde_threshold_mp() <= hi


def test_htilde_threshold_coarse_bracket():
    lo, hi = htilde_threshold(3, 3, 0.1, 0.3)
    assert 0.18868 <= lo and hi <= 0.18869


def test_flattening_sample():
    rng = random.Random(7)
    v = F(3, 4)
    small = sum(
        hn_derivative(v, [rng.getrandbits(1) for _ in range(200)], 201) < F(1, 1000)
        for _ in range(2000)
    )
    assert small >= 0.99 * 2000


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SLOPE_VS), st.integers(min_value=2, max_value=9), st.data())
def test_slope_of_random_point(v, n, data):
    num = data.draw(st.integers(min_value=0, max_value=(1 << (n + 2)) - 1))
    x = F(2 * num + 1, 1 << (n + 3))
    hn = h_n_approx(ConjSystem(v), n)
    assert hn.slope_at(x, "right") == hn_derivative(v, x, n)


def test_digit_patterns_reach_extremes():
    v = F(1, 3)
    n = 6
    slopes = [hn_derivative(v, list(bits), n) for bits in itertools.product((0, 1), repeat=n - 1)]
    assert min(slopes) == derivative_scan(v, n).min
    assert max(slopes) == derivative_scan(v, n).max


def test_flattening_fraction_is_seeded():
    a = flattening_fraction(F(3, 4), 200, 500, seed=11)
    assert a == flattening_fraction(F(3, 4), 200, 500, seed=11)
    assert a >= 0.98
    # at v = 1/2 every slope is 1
    assert flattening_fraction(F(1, 2), 50, 100, seed=1) == 0.0
