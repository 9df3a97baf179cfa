from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fibra.bounds import (
    BoundInput,
    curve_volume_bound,
    evaluate_theorem,
    first_pg_at_most,
    max_curve_genus,
    max_curve_genus_small_q,
    max_fiber_K2,
    max_fiber_pg,
    miyaoka_yau_check,
    parity_threshold_pg,
    surface_inequalities,
    surface_volume_bound,
    xi_at_boundary,
    xi_lower_bound,
)
from fibra.errors import MissingInput, RegimeTooSmall, UnknownTheorem


def test_curve_genus_threshold():
    assert max_curve_genus(182) == 92
    assert max_curve_genus(183) == 91
    assert first_pg_at_most(max_curve_genus, 91, lo=84) == 183


def test_curve_genus_regime():
    assert max_curve_genus(84) == 93
    assert max_curve_genus_small_q(84) == 75
    with pytest.raises(RegimeTooSmall):
        max_curve_genus(83)


@given(st.integers(min_value=84, max_value=5000))
def test_curve_genus_never_below_albanese_caps(pg):
    assert max_curve_genus(pg) >= 37


def test_curve_volume_bound():
    assert curve_volume_bound(2, 3)["bound"] == 1
    assert curve_volume_bound(3, 4)["bound"] == 4
    assert curve_volume_bound(91, 183)["refined_bound"] == 16290
    small = curve_volume_bound(3, 3)
    assert small["xi"] == Fraction(4, 3)
    assert small["bound"] == 2
    assert "refined_bound" not in small
    big = curve_volume_bound(10, 84)
    assert big["refined_bound"] == 738
    assert big["bound"] == 738


def test_xi_boundary_case():
    assert xi_lower_bound(4, 1, 1) == 2
    assert xi_at_boundary(4, 1, 1)
    assert xi_lower_bound(166, 1, 82) == 164
    assert xi_at_boundary(166, 1, 82)
    assert not xi_at_boundary(5, 2, 2)
    with pytest.raises(ValueError):
        xi_lower_bound(1, 1, 1)


def test_surface_volume_bound():
    assert surface_volume_bound(1, 84, 1) == 85
    with pytest.raises(RegimeTooSmall):
        surface_volume_bound(1, 55, 0)
    with pytest.raises(ValueError):
        surface_volume_bound(0, 84, 1)


def test_fiber_K2_over_elliptic_base():
    assert max_fiber_K2(100, 1) == 71
    assert max_fiber_pg(71, debarre=False) == 37


def test_fiber_K2_over_rational_base():
    assert max_fiber_K2(3890, 0, "positive") == 72
    assert max_fiber_pg(72, debarre=True) == 36
    assert max_fiber_K2(33616518, 0, "positive") == 71
    assert max_fiber_K2(865, 0, "zero") <= 71
    assert max_fiber_K2(577, 0, "zero") == 72
    assert max_fiber_K2(578, 0, "zero") == 71


@pytest.mark.slow
def test_true_thresholds_by_bisection():
    def positive(pg):
        return max_fiber_K2(pg, 0, "positive")

    def zero(pg):
        return max_fiber_K2(pg, 0, "zero")

    assert first_pg_at_most(positive, 71, lo=56) == 14940866
    assert first_pg_at_most(zero, 71, lo=56) == 578


def test_parity_threshold():
    pg = parity_threshold_pg()
    assert pg == 55
    assert 2 * (pg - 1) ** 2 <= 108 * pg
    assert 2 * pg**2 > 108 * (pg + 1)


def test_surface_inequalities():
    assert surface_inequalities(37, 0) == {"noether_min_K2": 70}
    assert surface_inequalities(36, 1) == {"noether_min_K2": 68, "debarre_min_K2": 72}
    assert surface_inequalities(2, 0) == {"noether_min_K2": 0}


def test_miyaoka_yau():
    assert miyaoka_yau_check(72, 1)
    assert not miyaoka_yau_check(73, 1)
    assert miyaoka_yau_check(Fraction(215, 3), Fraction(1))


def test_theorem_table():
    out = evaluate_theorem("2.1", BoundInput(p=Fraction(1), beta=Fraction(2), xi=Fraction(3)))
    assert out["lower_bound_K3"] == 6
    out = evaluate_theorem("2.2", BoundInput(g=4, p=Fraction(1), beta=Fraction(1)))
    assert out["xi_lower_bound"] == 2
    assert "boundary" in out
    out = evaluate_theorem("3.2", BoundInput(pg=183))
    assert out["max_g_C"] == 91
    assert out["threshold_pg_for_91"] == 183
    out = evaluate_theorem("4.2", BoundInput(pg=100, b=1))
    assert out["max_K2"] == 71
    assert out["strict"] == "K_F0^2 < 72"
    out = evaluate_theorem("parity", BoundInput())
    assert out["KN2_zero_from_pg"] == 56
    assert evaluate_theorem("MY", BoundInput(k3=Fraction(72), chi=Fraction(1)))["holds"]


def test_theorem_errors():
    with pytest.raises(MissingInput) as err:
        evaluate_theorem("3.1", BoundInput(pg=90))
    assert err.value.details["missing"] == ["g"]
    with pytest.raises(UnknownTheorem):
        evaluate_theorem("9.9", BoundInput())
    with pytest.raises(RegimeTooSmall):
        evaluate_theorem("3.2", BoundInput(pg=50))
