from __future__ import annotations

from dataclasses import replace

import pytest

from fibra.constructions import (
    STANDARD,
    VARIANT,
    SurfacePair,
    ThreefoldReport,
    assemble_surface_pair,
    check_genus_two_pencil,
    standard_construction,
    variant_construction,
)
from fibra.errors import (
    IncompleteReport,
    MissingPencil,
    NotGenusTwoFiber,
    NuTooSmall,
    PencilDimensionMismatch,
)


@pytest.fixture
def pair():
    return SurfacePair(
        K2_S=2, chi_S=1, pg_S=0, q_S=0, H2=0, KH=2, g_C_hat=6, d=2, provenance="test"
    )


def test_genus_two_pencil(pair):
    check = check_genus_two_pencil(pair)
    assert check.h0_K_plus_H == 2
    assert check.g_H == 2
    assert check.is_fibration
    assert check.expect_large_genus
    assert check.notes == ()


def test_pencil_with_base_points_is_noted(pair):
    # H^2 = 2, K.H = 0 keeps g(H) = 2 and h0 = 2
    check = check_genus_two_pencil(replace(pair, H2=2, KH=0))
    assert not check.is_fibration
    assert any("base points" in n for n in check.notes)


def test_fiber_genus_must_be_two(pair):
    with pytest.raises(NotGenusTwoFiber):
        check_genus_two_pencil(replace(pair, KH=4))


def test_pencil_dimension(pair):
    with pytest.raises(PencilDimensionMismatch):
        check_genus_two_pencil(replace(pair, chi_S=2))


def test_standard_construction(pair):
    report = standard_construction(pair)
    assert report.kind == STANDARD
    assert report.pg_F == 19
    assert report.pg_X == 2
    assert report.K3_X == 72
    assert report.chi_omega_X == 3
    assert report.fiber_invariant == 19
    assert "g_F" not in report.to_dict()


def test_fiber_invariant_requires_its_value():
    with pytest.raises(IncompleteReport) as err:
        ThreefoldReport(kind=VARIANT, pg_X=4).fiber_invariant
    assert err.value.details == {"missing": "g_F"}
    with pytest.raises(IncompleteReport):
        ThreefoldReport(kind=STANDARD, pg_X=2, g_F=3).fiber_invariant


def test_standard_construction_needs_pencil_data(pair):
    with pytest.raises(MissingPencil):
        standard_construction(replace(pair, g_C_hat=None))
    with pytest.raises(ValueError):
        standard_construction(replace(pair, pg_S=1))


@pytest.mark.parametrize("nu, pg_X", [(3, 4), (4, 6), (10, 18)])
def test_variant_construction(pair, nu, pg_X):
    report = variant_construction(pair, nu)
    assert report.kind == VARIANT
    assert report.g_F == 13
    assert report.pg_X == pg_X
    assert report.to_dict()["nu"] == nu


def test_variant_needs_nu_at_least_three(pair):
    with pytest.raises(NuTooSmall):
        variant_construction(pair, 2)


def test_assemble_surface_pair():
    values = {"K2_minimal": 2, "chi": 1, "pg": 0, "q": 0, "H2": 0, "KH": 2, "g_C_hat": 6, "d": 2}
    pair = assemble_surface_pair(values, provenance="x")
    assert pair.g_H == 2
    assert pair.K_plus_H_sq == 6
    assert pair.to_dict()["provenance"] == "x"
    values.pop("g_C_hat")
    with pytest.raises(IncompleteReport) as err:
        assemble_surface_pair(values)
    assert err.value.details["missing"] == ["g_C_hat"]
