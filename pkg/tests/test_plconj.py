from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tentconj.conjugacy import ConjSystem, h_n_approx
from tentconj.plconj import (
    HalfMap, LinearityType, check_conjugacy, construct_type, extend_left, extend_right, halves,
    linearity_type, perturb_non_conjugate, slope_at_zero, validate_left, validate_right,
)
from tentconj.plmap import PLFunction, PLMap, compose, identity, is_unimodal, iterate, skew_tent, tent

TENT_LEFT = HalfMap("left", PLFunction([(0, 0), (F(1, 2), 1)]))
TENT_RIGHT = HalfMap("right", PLFunction([(F(1, 2), 1), (1, 0)]))
TYPES = [(p, q) for p in range(2, 6) for q in range(2, 6)]


def test_halfmap_domain_checks():
    with pytest.raises(ValueError):
        HalfMap("left", PLFunction([(F(1, 4), 0), (F(1, 2), 1)]))
    with pytest.raises(ValueError):
        HalfMap("middle", PLFunction([(0, 0), (F(1, 2), 1)]))
    assert TENT_LEFT.v == F(1, 2) and TENT_RIGHT.v == F(1, 2)


def test_validate_left(nonconvex_left):
    assert validate_left(TENT_LEFT) == []
    assert validate_left(HalfMap("left", nonconvex_left)) == []
    steep = HalfMap("left", PLFunction([(0, 0), (F(1, 6), F(1, 2)), (F(2, 3), 1)]))
    assert any("slope-at-zero" in p for p in validate_left(steep))
    bumpy = HalfMap("left", PLFunction([(0, 0), (F(1, 4), F(1, 2)), (F(3, 8), F(1, 4)), (F(1, 2), 1)]))
    assert any("monotone" in p for p in validate_left(bumpy))
    short = HalfMap("left", PLFunction([(0, 0), (F(1, 4), F(1, 2))]))
    assert any("endpoint" in p for p in validate_left(short))


def test_validate_right():
    assert validate_right(TENT_RIGHT) == []
    # slopes -1 and -4 meeting at the fixed point 4/5
    kinked = HalfMap("right", PLFunction([(F(3, 5), 1), (F(4, 5), F(4, 5)), (1, 0)]))
    assert validate_right(kinked) == []
    single = HalfMap("right", PLFunction([(F(2, 3), 1), (1, 0)]))
    assert any("not 4" in p for p in validate_right(single))


def test_slope_at_zero(nonconvex_left):
    assert slope_at_zero(HalfMap("left", nonconvex_left)) == 2
    assert slope_at_zero(TENT_LEFT) == 1


def test_extend_left_fixture(nonconvex_left, nonconvex_full):
    g, h = extend_left(HalfMap("left", nonconvex_left))
    assert g == nonconvex_full
    assert g.points[4:] == ((F(13, 16), F(5, 8)), (F(29, 32), F(1, 2)), (1, 0))
    assert h.points == ((0, 0), (F(1, 4), F(1, 2)), (F(1, 2), F(5, 8)), (1, 1))
    assert check_conjugacy(g, h)
    assert linearity_type(g) == LinearityType(3, 3)


def test_extend_tent_halves():
    assert extend_left(TENT_LEFT) == (tent(), identity())
    assert extend_right(TENT_RIGHT) == (tent(), identity())


def test_extend_right_round_trip(nonconvex_full):
    left, right = halves(nonconvex_full)
    g, h = extend_right(right)
    assert g == nonconvex_full
    assert g.points[:4] == ((0, 0), (F(1, 4), F(1, 2)), (F(1, 2), F(5, 8)), (F(5, 8), 1))
    assert check_conjugacy(g, h)


def test_extend_right_kinked_example():
    g, h = extend_right(HalfMap("right", PLFunction([(F(3, 5), 1), (F(4, 5), F(4, 5)), (1, 0)])))
    assert check_conjugacy(g, h)
    assert g.slopes()[0] == 2


def test_extend_rejects_invalid():
    steep = HalfMap("left", PLFunction([(0, 0), (F(1, 3), 1)]))
    with pytest.raises(ValueError):
        extend_left(steep)
    with pytest.raises(ValueError):
        extend_right(HalfMap("right", PLFunction([(F(2, 3), 1), (1, 0)])))


def test_uniqueness_sensitivity(nonconvex_left):
    base = extend_left(HalfMap("left", nonconvex_left))
    assert extend_left(HalfMap("left", nonconvex_left)) == base
    moved = PLFunction([(0, 0), (F(1, 4), F(1, 2)), (F(1, 2), F(9, 16)), (F(5, 8), 1)])
    other = extend_left(HalfMap("left", moved))
    assert other[0] != base[0]
    assert check_conjugacy(*other)


def test_linearity_type_simple():
    assert linearity_type(tent()) == LinearityType(1, 1)
    assert linearity_type(skew_tent(F(2, 7))) == LinearityType(1, 1)
    with pytest.raises(ValueError):
        linearity_type(iterate(tent(), 2))


def test_check_conjugacy_examples():
    assert check_conjugacy(tent(), identity())
    h = PLMap([(0, 0), (F(1, 2), F(3, 4)), (1, 1)])
    g = compose(h, compose(tent(), h.inverse()))
    for x, y in [(F(3, 8), F(3, 4)), (F(3, 4), 1), (F(7, 8), F(3, 4))]:
        assert g(x) == y
    assert check_conjugacy(g, h)
    v = F(3, 4)
    for n in range(2, 7):
        assert not check_conjugacy(skew_tent(v), h_n_approx(ConjSystem(v), n))
    with pytest.raises(ValueError):
        check_conjugacy(tent(), tent())


def test_construct_type_trivial():
    assert construct_type(1, 1) == (tent(), identity())
    for bad in [(1, 3), (4, 1)]:
        with pytest.raises(ValueError):
            construct_type(*bad)


@pytest.mark.parametrize("p, q", TYPES)
def test_construct_type(p, q):
    g, h = construct_type(p, q)
    assert linearity_type(g) == LinearityType(p, q)
    assert check_conjugacy(g, h)
    left, right = halves(g)
    assert validate_left(left) == [] and validate_right(right) == []
    assert extend_left(left) == (g, h)
    assert extend_right(right) == (g, h)


def test_construct_type_reproducible():
    assert construct_type(2, 3) == construct_type(2, 3)
    g, _ = construct_type(3, 2)
    assert all(isinstance(x, F) for x in g.xs)


def test_perturb_fixed_point():
    pert = perturb_non_conjugate(F(2, 3), F(1, 10))
    assert pert.kind == "periodic" and pert.period == 1
    assert pert.periodic_point == F(2, 3)
    assert pert.slope == F(-1, 2)
    assert pert.g_fixed_intervals and not pert.f_fixed_intervals
    assert pert.certified
    assert is_unimodal(pert.g)


def test_perturb_peak():
    pert = perturb_non_conjugate(F(1, 2), F(1, 8))
    assert pert.kind == "peak"
    assert (F(1, 2), F(15, 16)) in pert.g.points
    assert pert.g.preimages(1) == []
    assert pert.certified


@settings(max_examples=20, deadline=None)
@given(
    st.fractions(min_value=0, max_value=1, max_denominator=64),
    st.fractions(min_value=F(1, 16), max_value=F(1, 4), max_denominator=64),
)
def test_perturb_agrees_with_tent_outside_window(x0, eps):
    pert = perturb_non_conjugate(x0, eps)
    g, f = pert.g, tent()
    assert is_unimodal(g)
    assert pert.certified
    for bx in set(g.xs) | set(f.xs):
        if abs(bx - x0) >= eps:
            assert g(bx) == f(bx)


def test_perturb_errors():
    with pytest.raises(ValueError):
        perturb_non_conjugate(F(1, 3), 0)
    with pytest.raises(ValueError):
        perturb_non_conjugate(F(3, 2), F(1, 10))
