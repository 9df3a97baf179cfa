from __future__ import annotations

import pytest

from fibra.arrangement import (
    ORDINARY_DOUBLE,
    ORDINARY_QUADRUPLE,
    ORDINARY_TRIPLE,
    THREE_TO_THREE,
    Arrangement,
    Component,
    affine_point,
    arrangement_mult_at,
    certify_complete,
    classify_singularity,
    component_singularities_certify,
    count_directions,
    direction_poly,
    infinitely_near,
    intersection_mult,
    is_proximate,
    local_poly,
    mult_at,
    singular_locus_certify,
    strict_transform_smooth_after_blowup,
    tangent_roots,
)
from fibra.errors import (
    CommonComponent,
    DuplicatePoint,
    IncompleteList,
    OverCount,
    UnsplitTangentCone,
    UnsupportedDepth,
)
from fibra.forms import P1xP1, P2, parse_and_homogenize
from fibra.numfield import QQ


def plane(expr, degree):
    return parse_and_homogenize(expr, P2, (degree,), field=QQ)


def quadric(expr, a, b, field=QQ):
    return parse_and_homogenize(expr, P1xP1, (a, b), field=field)


def origin():
    return affine_point(P2, QQ, [QQ.zero, QQ.zero, QQ.one], label="O")


def arrangement(base, **curves):
    return Arrangement(base, tuple(Component(n, f) for n, f in curves.items()))


def test_points_are_canonically_scaled():
    p = affine_point(P2, QQ, [QQ.rational(2), QQ.rational(4), QQ.rational(2)])
    q = affine_point(P2, QQ, [QQ.one, QQ.rational(2), QQ.one])
    assert p.key() == q.key()
    assert p.text() == "[1:2:1]"
    r = affine_point(P1xP1, QQ, [None, QQ.rational(3)])
    assert r.text() == "(inf, 3)"


def test_multiplicity_of_cusp_and_node():
    assert mult_at(plane("y^2-x^3", 3), origin()) == 2
    assert mult_at(plane("y^2-x^2-x^3", 3), origin()) == 2
    assert mult_at(plane("x+1", 1), origin()) == 0


def test_arrangement_multiplicity_weights_components():
    node = Component("N", plane("y^2-x^2-x^3", 3), coeff=2)
    arr = Arrangement(P2, (Component("A", plane("x", 1)), node))
    assert arrangement_mult_at(arr, origin()) == 5
    off = affine_point(P2, QQ, [QQ.rational(2), QQ.rational(3), QQ.one])
    assert arrangement_mult_at(arr, off) == 0


def test_ordinary_triple_point():
    arr = arrangement(P2, A=plane("x", 1), B=plane("y", 1), C=plane("x-y", 1))
    rec = classify_singularity(arr, origin())
    assert rec.type == ORDINARY_TRIPLE
    assert rec.total_mult == 3
    assert rec.component_mults == {"A": 1, "B": 1, "C": 1}


def test_three_to_three_point():
    arr = arrangement(P2, A=plane("y", 1), B=plane("y-x^2", 2), C=plane("y+x^2", 2))
    rec = classify_singularity(arr, origin())
    assert rec.type == THREE_TO_THREE
    assert rec.tangent_directions == 1
    assert rec.to_dict()["type"] == THREE_TO_THREE


def test_quadruple_point_on_quadric(gaussian):
    t = gaussian.gen
    arr = arrangement(
        P1xP1,
        C1=quadric("x=y", 1, 1, gaussian),
        C4=quadric("xy=-1", 1, 1, gaussian),
        F5=quadric("x-t", 1, 0, gaussian),
    )
    p = affine_point(P1xP1, gaussian, [t, t], label="Pii")
    rec = classify_singularity(arr, p)
    assert rec.total_mult == 3
    assert rec.type == ORDINARY_TRIPLE
    arr4 = Arrangement(P1xP1, arr.components + (Component("F5b", quadric("y-t", 0, 1, gaussian)),))
    assert classify_singularity(arr4, p).type == ORDINARY_QUADRUPLE


def test_node_type():
    arr = arrangement(P2, N=plane("y^2-x^2-x^3", 3))
    assert classify_singularity(arr, origin()).type == ORDINARY_DOUBLE


def test_cone_without_rational_split_is_rejected():
    cubic = arrangement(P2, K=plane("x^3-2y^3", 3))
    with pytest.raises(UnsplitTangentCone) as err:
        classify_singularity(cubic, origin())
    assert err.value.details["degree"] == 3
    with pytest.raises(UnsplitTangentCone):
        strict_transform_smooth_after_blowup(cubic, [origin()])


def test_one_quadratic_factor_counts_twice():
    circle = local_poly(plane("x^2+y^2", 2), origin())
    assert count_directions(circle) == 2
    with pytest.raises(UnsplitTangentCone):
        tangent_roots(direction_poly(circle), 2)
    two = local_poly(plane("(x^2+y^2)(x^2+2y^2)", 4), origin())
    with pytest.raises(UnsplitTangentCone):
        count_directions(two)


def test_cone_split_over_gaussian_only(gaussian):
    def line(expr):
        return parse_and_homogenize(expr, P2, (1,), field=gaussian)

    o = affine_point(P2, gaussian, [gaussian.zero, gaussian.zero, gaussian.one], label="O")
    circle = local_poly(parse_and_homogenize("x^2+y^2", P2, (2,), field=gaussian), o)
    t = gaussian.gen
    assert tangent_roots(direction_poly(circle), 2) == sorted(
        [(gaussian.one, t), (gaussian.one, -t)], key=lambda d: d[1].sort_key()
    )
    arr = arrangement(P2, A=line("x"), B=line("x-t*y"), C=line("x+t*y"))
    rec = classify_singularity(arr, o)
    assert rec.type == ORDINARY_TRIPLE
    assert rec.tangent_directions == 3
    assert strict_transform_smooth_after_blowup(arr, [o])


def test_one_blowup_resolves_only_distinct_tangents():
    lines = arrangement(P2, A=plane("x", 1), B=plane("y", 1), C=plane("x-y", 1))
    assert strict_transform_smooth_after_blowup(lines, [origin()])
    assert strict_transform_smooth_after_blowup(arrangement(P2, N=plane("xy", 2)), [origin()])
    cusp = arrangement(P2, K=plane("y^2-x^3", 3))
    assert not strict_transform_smooth_after_blowup(cusp, [origin()])
    tangent = arrangement(P2, A=plane("y", 1), B=plane("y-x^2", 2), C=plane("y+x^2", 2))
    assert not strict_transform_smooth_after_blowup(tangent, [origin()])


def test_intersection_multiplicity_of_tangent_conic():
    assert intersection_mult(plane("y", 1), plane("y-x^2", 2), origin()) == 2
    assert intersection_mult(plane("y-x^2", 2), plane("y+x^2", 2), origin()) == 2
    assert intersection_mult(plane("y", 1), plane("x", 1), origin()) == 1


def test_certify_complete_accepts_full_list():
    cert = certify_complete(plane("y", 1), plane("y-x^2", 2), [origin()], names=("L", "Q"))
    assert cert.total == cert.bezout == 2


def test_certify_complete_reports_deficit():
    p = affine_point(P2, QQ, [QQ.one, QQ.zero, QQ.one])
    with pytest.raises(IncompleteList) as info:
        certify_complete(plane("y", 1), plane("y-x^2+x", 2), [p], names=("L", "Q"))
    assert info.value.deficit == 1


def test_certify_complete_rejects_common_component():
    with pytest.raises(CommonComponent):
        certify_complete(plane("x^2-y^2", 2), plane("x-y", 1), [origin()])


def test_duplicate_points_rejected():
    with pytest.raises(DuplicatePoint):
        certify_complete(plane("x", 1), plane("y", 1), [origin(), origin()])


def test_component_singularities():
    component_singularities_certify(plane("y^2-x^2-x^3", 3), [origin()], name="N")
    with pytest.raises(IncompleteList):
        component_singularities_certify(plane("y^2-x^2-x^3", 3), [], name="N")


def test_singular_locus_of_line_arrangement():
    arr = arrangement(P2, A=plane("x", 1), B=plane("y", 1), C=plane("x+y-1", 1))
    pts = [
        origin(),
        affine_point(P2, QQ, [QQ.zero, QQ.one, QQ.one], label="P"),
        affine_point(P2, QQ, [QQ.one, QQ.zero, QQ.one], label="Q"),
    ]
    cert = singular_locus_certify(arr, pts)
    assert cert.to_dict()["pairs_checked"] == 3
    with pytest.raises(IncompleteList):
        singular_locus_certify(arr, pts[:2])


def test_singular_locus_rejects_smooth_point():
    arr = arrangement(P2, A=plane("x", 1), B=plane("y", 1))
    smooth = affine_point(P2, QQ, [QQ.zero, QQ.one, QQ.one], label="S")
    with pytest.raises(OverCount):
        singular_locus_certify(arr, [origin(), smooth])


def test_infinitely_near_points_and_proximity():
    o = origin()
    d = (QQ.one, QQ.zero)
    first = infinitely_near(o, d, label="O'")
    assert first.level == 1
    assert is_proximate(first, o)
    second = infinitely_near(first, (QQ.zero, QQ.one), label="O''")
    # the (0:1) direction at O' is where the exceptional curve of O passes
    assert is_proximate(second, o)
    with pytest.raises(UnsupportedDepth):
        infinitely_near(second, d)
