from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from fibra.arrangement import affine_point, infinitely_near
from fibra.errors import DuplicatePoint, LatticeMismatch, ParseError
from fibra.forms import P1xP1, P2
from fibra.numfield import QQ
from fibra.piclattice import (
    DivClass,
    adjunction_genus,
    base_lattice,
    blow_up,
    h0_interpolation,
    intersect,
    parse_class,
    riemann_roch_chi,
    verify_class_identity,
)


def pt(x, y, label):
    return affine_point(P2, QQ, [QQ.rational(x), QQ.rational(y), QQ.one], label=label)


def plane_blown_up(*points):
    lat = base_lattice(P2)
    for p in points:
        lat = blow_up(lat, p, label=p.label)
    return lat


def test_base_lattices():
    p2, q = base_lattice(P2), base_lattice(P1xP1)
    K = p2.canonical()
    assert intersect(K, K) == 9
    assert intersect(q.canonical(), q.canonical()) == 8
    assert adjunction_genus(p2.base_class(3)) == 1
    assert adjunction_genus(q.base_class(2, 3)) == 2
    assert q.signature() == (1, 1)


def test_blow_up_lowers_canonical_square():
    lat = plane_blown_up(pt(0, 0, "A"), pt(1, 0, "B"))
    K = lat.canonical()
    assert intersect(K, K) == 7
    e = lat.exceptional("A")
    assert intersect(e, e) == -1
    assert intersect(K, e) == -1
    assert lat.signature() == (1, 2)


def test_duplicate_blow_up_rejected():
    lat = plane_blown_up(pt(0, 0, "A"))
    with pytest.raises(DuplicatePoint):
        blow_up(lat, pt(0, 0, "A2"))


def test_parse_class_expressions():
    lat = plane_blown_up(pt(0, 0, "A"), pt(1, 0, "B"))
    d = parse_class("3H - 2E(A) - E(B)", lat)
    assert d.base_coeffs == (3,)
    assert d.exc_coeffs == (-2, -1)
    assert parse_class("sumE", lat) == lat.exceptional("A") + lat.exceptional("B")
    assert parse_class("K", lat) == lat.canonical()
    assert parse_class("-(H - E(A)) + 2*H", lat).to_text() == "1H + e[A]"


def test_parse_bidegree_and_names():
    lat = base_lattice(P1xP1)
    named = {"G": lat.base_class(0, 1)}
    assert parse_class("(2,1) + G", lat, named) == lat.base_class(2, 2)
    with pytest.raises(ParseError):
        parse_class("H", lat)
    with pytest.raises(ParseError):
        parse_class("E(Z)", lat)
    with pytest.raises(ParseError):
        parse_class("(1,2", lat)


def test_primed_exceptional_classes():
    a = pt(0, 0, "Q")
    a1 = infinitely_near(a, (QQ.one, QQ.zero), label="Q'")
    lat = plane_blown_up(a, a1)
    assert parse_class("E'(Q)", lat) == lat.exceptional("Q'")
    assert parse_class("sumE'", lat) == lat.exceptional("Q'")
    assert parse_class("sumE", lat) == lat.exceptional("Q")


def test_identity_check():
    lat = plane_blown_up(pt(0, 0, "A"))
    assert verify_class_identity("K + 3H", "E(A)", lat)
    assert not verify_class_identity("K", "-3H", lat)


def test_classes_from_different_lattices_do_not_mix():
    a = plane_blown_up(pt(0, 0, "A"))
    b = base_lattice(P2)
    with pytest.raises(LatticeMismatch):
        intersect(a.canonical(), b.canonical())


def test_h0_of_lines_and_conics():
    lat = plane_blown_up(pt(0, 0, "A"), pt(1, 0, "B"), pt(0, 1, "C"))
    assert h0_interpolation(parse_class("H", lat)) == 3
    assert h0_interpolation(parse_class("H - E(A)", lat)) == 2
    assert h0_interpolation(parse_class("H - E(A) - E(B)", lat)) == 1
    assert h0_interpolation(parse_class("H - sumE", lat)) == 0
    assert h0_interpolation(parse_class("2H - 2E(A)", lat)) == 3
    assert h0_interpolation(parse_class("-H", lat)) == 0


def test_h0_with_infinitely_near_condition():
    a = pt(0, 0, "A")
    a1 = infinitely_near(a, (QQ.one, QQ.zero), label="A'")
    lat = plane_blown_up(a, a1)
    # conics through A tangent to y = 0
    assert h0_interpolation(parse_class("2H - E(A) - E'(A)", lat)) == 4


def test_h0_over_conjugate_points(gaussian):
    t = gaussian.gen
    p = affine_point(P2, gaussian, [t, gaussian.zero, gaussian.one], label="P")
    pbar = affine_point(P2, gaussian, [-t, gaussian.zero, gaussian.one], label="Pbar")
    lat = base_lattice(P2)
    lat = blow_up(lat, p, label="P")
    lat = blow_up(lat, pbar, label="Pbar")
    assert h0_interpolation(parse_class("H - E(P) - E(Pbar)", lat)) == 1
    orbit = affine_point(P2, gaussian, [t, gaussian.zero, gaussian.one], label="O", conjugates=True)
    lat2 = blow_up(base_lattice(P2), orbit, label="O")
    assert lat2.slot("O").weight == 2
    assert h0_interpolation(parse_class("H - E(O)", lat2)) == 1


def test_riemann_roch():
    lat = base_lattice(P2)
    assert riemann_roch_chi(lat.base_class(2)) == 6
    assert riemann_roch_chi(lat.base_class(0)) == 1


THREE_POINTS = plane_blown_up(pt(0, 0, "A"), pt(1, 0, "B"), pt(0, 1, "C"))
QUADRIC_TWO = blow_up(
    blow_up(base_lattice(P1xP1), affine_point(P1xP1, QQ, [QQ.zero, QQ.zero]), label="P"),
    affine_point(P1xP1, QQ, [QQ.one, QQ.rational(2)]),
    label="Q",
)
small = st.integers(min_value=-4, max_value=4)


def classes(lat):
    return st.builds(
        lambda b, e: DivClass(lat, tuple(b), tuple(e)),
        st.lists(small, min_size=lat.base_rank, max_size=lat.base_rank),
        st.lists(small, min_size=len(lat.slots), max_size=len(lat.slots)),
    )


def _gram_pairing(a, b):
    g = a.lattice.gram_matrix()
    v = a.base_coeffs + a.exc_coeffs
    w = b.base_coeffs + b.exc_coeffs
    return sum(v[i] * g[i][j] * w[j] for i in range(len(v)) for j in range(len(w)))


@pytest.mark.parametrize("lat", [THREE_POINTS, QUADRIC_TWO], ids=["plane", "quadric"])
@given(data=st.data())
def test_intersection_is_bilinear_and_symmetric(lat, data):
    a, b, c = (data.draw(classes(lat)) for _ in range(3))
    k = data.draw(small)
    assert intersect(a, b) == intersect(b, a)
    assert intersect(a + b, c) == intersect(a, c) + intersect(b, c)
    assert intersect(k * a, c) == k * intersect(a, c)
    assert intersect(a - a, c) == 0
    assert intersect(a, b) == _gram_pairing(a, b)


@given(st.integers(min_value=0, max_value=5))
def test_signature_after_blow_ups(n):
    plane = plane_blown_up(*(pt(i, i * i, f"A{i}") for i in range(n)))
    assert plane.signature() == (1, n)
    quadric = base_lattice(P1xP1)
    for i in range(n):
        quadric = blow_up(quadric, affine_point(P1xP1, QQ, [QQ.rational(i), QQ.one]), label=f"B{i}")
    assert quadric.signature() == (1, n + 1)


@settings(max_examples=30, deadline=None)
@given(
    st.integers(min_value=0, max_value=3),
    st.lists(st.integers(min_value=-2, max_value=0), min_size=3, max_size=3),
    st.sampled_from(["A", "B", "C"]),
)
def test_h0_drops_when_a_point_is_imposed(d, exc, label):
    D = DivClass(THREE_POINTS, (d,), tuple(exc))
    smaller = D - THREE_POINTS.exceptional(label)
    assert 0 <= h0_interpolation(smaller) <= h0_interpolation(D)
    assert h0_interpolation(D) <= h0_interpolation(D + THREE_POINTS.base_class(1))
