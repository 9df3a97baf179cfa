from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fibra.errors import ZeroInput
from fibra.numfield import QQ
from fibra.poly import (
    Poly,
    UPoly,
    common_zero_branches,
    generates_unit_ideal,
    poly_gcd,
    resultant,
    squarefree_and_gcd,
    upoly_gcd,
)

x = Poly.var(QQ, 0)
y = Poly.var(QQ, 1)


def up(*coeffs):
    return UPoly.make(QQ, list(coeffs))


def test_upoly_division_and_gcd():
    a = up(-1, 0, 1)  # x^2 - 1
    b = up(1, 1)  # x + 1
    q, r = divmod(a, b)
    assert q == up(-1, 1)
    assert r.is_zero()
    assert upoly_gcd(a * up(2, 1), up(-4, 0, 1)) == up(2, 1)


def test_squarefree_part_and_order():
    f = up(0, 0, 1) * up(-1, 1) ** 3
    assert f.squarefree_part() == up(0, -1, 1)
    assert f.order() == 2
    assert up().order() == -1


def test_factor_list_over_q_and_over_gaussian(gaussian):
    f = up(-3, 2) * up(1, 1) * up(1, 1) * up(1, 0, 1)
    assert set(f.factor_list()) == {(up(1, 1), 2), (up(Fraction(-3, 2), 1), 1), (up(1, 0, 1), 1)}
    i = gaussian.gen
    g = UPoly.make(gaussian, [1, 0, 1])
    assert set(g.factor_list()) == {(UPoly.linear(gaussian, r), 1) for r in (i, -i)}
    assert up(5).factor_list() == []


def test_resultant_of_lines_vanishes_at_the_intersection():
    res = resultant(y - x, y + x - 2, 1)
    assert res.degree == 1
    assert res(1).is_zero()


def test_resultant_of_circle_and_line():
    circle = x * x + y * y - 1
    res = resultant(circle, y, 1)
    assert res.squarefree_part() == up(-1, 0, 1)


def test_resultant_rejects_zero():
    with pytest.raises(ZeroInput):
        resultant(Poly.zero(QQ), x, 1)


def test_poly_gcd_finds_common_factor():
    common = x - y
    g = poly_gcd(common * (x + 1), common * (y * y + 2))
    assert g.total_degree() == 1
    assert g.evaluate([3, 3]).is_zero()


def test_squarefree_flag_and_gcd():
    res = squarefree_and_gcd((x - y) ** 2, x - y)
    assert not res.is_squarefree
    assert res.gcd.total_degree() == 1
    assert res.gcd.evaluate([2, 2]).is_zero()
    assert squarefree_and_gcd(y * y - x).is_squarefree
    assert squarefree_and_gcd(x, y).gcd.is_constant()
    assert not squarefree_and_gcd(Poly.zero(QQ)).is_squarefree


def test_lowest_part_and_translate():
    f = (x - 1) ** 2 + (y - 2) ** 3
    g = f.translate([1, 2])
    assert g.order() == 2
    assert g.lowest_part() == x * x


def test_to_text():
    assert (x * x * y - 3).to_text() == "x^2*y - 3"


coeff = st.integers(min_value=-6, max_value=6)


@given(st.lists(coeff, min_size=1, max_size=5), st.lists(coeff, min_size=1, max_size=5))
def test_division_identity(a, b):
    pa, pb = up(*a), up(*b)
    if pb.is_zero():
        return
    q, r = divmod(pa, pb)
    assert q * pb + r == pa
    assert r.is_zero() or r.degree < pb.degree


def test_unit_ideal_detects_common_zeros(gaussian):
    assert generates_unit_ideal([x * x + 1, x])
    assert not generates_unit_ideal([x * x + 1, y])
    assert not generates_unit_ideal([x * x + 1, y - x])
    assert not generates_unit_ideal([Poly.zero(QQ)])
    i = Poly.const(gaussian, gaussian.gen)
    assert generates_unit_ideal([Poly.var(gaussian, 0) - i, Poly.var(gaussian, 0) + i])


def test_common_zero_branches_per_factor():
    modulus = up(-1, 1) * up(1, 0, 1)  # (x - 1)(x^2 + 1)
    branches = common_zero_branches([y * y - 4, y * y - 4 + (x - 1) * y], modulus)
    assert branches == [(up(-1, 1), 2), (up(1, 0, 1), 0)]
    assert common_zero_branches([y - 3], up(2, 0, 1)) == [(up(2, 0, 1), 1)]
    assert common_zero_branches([y * y + x], up(-1, 1)) == [(up(-1, 1), 2)]
    assert common_zero_branches([x - 1, (x - 1) * y], up(-1, 1)) == [(up(-1, 1), -2)]


def test_poly_gcd_over_gaussian(gaussian):
    gx, gy = Poly.var(gaussian, 0), Poly.var(gaussian, 1)
    i = gaussian.gen
    g = poly_gcd((gx - gy * i) * (gx + 1), (gx - gy * i) * (gx + gy * i))
    assert g.total_degree() == 1
    assert g.evaluate([i, 1]).is_zero()
    assert not g.evaluate([-i, 1]).is_zero()


def test_resultant_over_gaussian_eliminates_y(gaussian):
    gx, gy = Poly.var(gaussian, 0), Poly.var(gaussian, 1)
    res = resultant(gy * gy + 1, gy - gx, 1)
    assert res.degree == 2
    i = gaussian.gen
    assert res(i).is_zero() and res(-i).is_zero()
