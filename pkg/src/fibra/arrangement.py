from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    CommonComponent,
    ComponentSingularityUnresolved,
    DuplicatePoint,
    IncompleteList,
    OverCount,
    UnsplitTangentCone,
    UnsupportedDepth,
    ZeroCurve,
)
from .forms import (
    CHARTS,
    P1xP1,
    Chart,
    Form,
    bezout_total,
    chart_coords,
    chart_index,
    preferred_chart,
)
from .numfield import FieldElement, NumberField, orbit_size, rational_min_poly
from .poly import Poly, UPoly, common_zero_branches, poly_gcd, resultant, upoly_gcd

log = logging.getLogger(__name__)

MAX_LEVEL = 2

SMOOTH = "Smooth"
ORDINARY_DOUBLE = "OrdinaryDouble"
ORDINARY_TRIPLE = "OrdinaryTriple"
ORDINARY_QUADRUPLE = "OrdinaryQuadruple"
THREE_TO_THREE = "ThreeToThree"

_ORDINARY = {2: ORDINARY_DOUBLE, 3: ORDINARY_TRIPLE, 4: ORDINARY_QUADRUPLE}

Direction = Tuple[FieldElement, FieldElement]


# ---------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class SurfPoint:
    """A point of P2 or P1xP1, or a point infinitely near one.

    ``coords`` are (u0, u1, v0, v1) or (X, Y, Z), canonically scaled. An
    infinitely near point keeps its root's coordinates and records the
    tangent direction (1:mu) or (0:1) in the local chart of its parent.
    ``conjugates`` makes the point stand for its whole Galois orbit.
    """

    base: str
    coords: Tuple[FieldElement, ...]
    label: str = ""
    conjugates: bool = False
    parent: Optional["SurfPoint"] = None
    direction: Optional[Direction] = None

    @property
    def level(self) -> int:
        return 0 if self.parent is None else self.parent.level + 1

    @property
    def root(self) -> "SurfPoint":
        p = self
        while p.parent is not None:
            p = p.parent
        return p

    @property
    def field(self) -> NumberField:
        return self.coords[0].field

    @cached_property
    def weight(self) -> int:
        root = self.root
        return orbit_size(root.coords) if root.conjugates else 1

    def key(self) -> Tuple:
        parent = self.parent.key() if self.parent is not None else None
        direction = tuple(c.sort_key() for c in self.direction) if self.direction else None
        return (self.base, tuple(c.sort_key() for c in self.coords), parent, direction)

    def sort_key(self) -> Tuple:
        return (self.level, self.root.key(), self.key())

    def text(self) -> str:
        if self.parent is not None:
            a, b = self.direction  # type: ignore[misc]
            d = "(0:1)" if a.is_zero() else f"(1:{b})"
            return f"{self.parent.text()}->{d}"
        c = self.coords
        if self.base == P1xP1:
            x = "inf" if c[0].is_zero() else str(c[1])
            y = "inf" if c[2].is_zero() else str(c[3])
            body = f"({x}, {y})"
        else:
            body = "[" + ":".join(str(v) for v in c) + "]"
        return f"orbit{body}" if self.conjugates else body

    def name(self) -> str:
        return self.label or self.text()


def _scale_first(values: Sequence[FieldElement]) -> Tuple[FieldElement, ...]:
    lead = next((v for v in values if not v.is_zero()), None)
    if lead is None:
        raise ValueError("projective coordinates cannot all be zero")
    inv = lead.inverse()
    return tuple(v * inv for v in values)


def make_point(
    base: str,
    coords: Sequence[FieldElement],
    *,
    label: str = "",
    conjugates: bool = False,
) -> SurfPoint:
    if base == P1xP1:
        if len(coords) != 4:
            raise ValueError("P1xP1 points need (u0, u1, v0, v1)")
        canon = _scale_first(coords[:2]) + _scale_first(coords[2:])
    else:
        if len(coords) != 3:
            raise ValueError("P2 points need (X, Y, Z)")
        canon = _scale_first(coords)
    return SurfPoint(base, canon, label=label, conjugates=conjugates)


def affine_point(
    base: str,
    field: NumberField,
    values: Sequence[Optional[FieldElement]],
    *,
    label: str = "",
    conjugates: bool = False,
) -> SurfPoint:
    """P1xP1 from (x, y) with None for infinity; P2 from (X, Y, Z)."""
    if base == P1xP1:
        coords: List[FieldElement] = []
        for v in values:
            coords.extend([field.zero, field.one] if v is None else [field.one, v])
        return make_point(base, coords, label=label, conjugates=conjugates)
    coords = [field(v) for v in values]  # type: ignore[arg-type]
    return make_point(base, coords, label=label, conjugates=conjugates)


def canonical_direction(a: FieldElement, b: FieldElement) -> Direction:
    if a.is_zero():
        if b.is_zero():
            raise ValueError("tangent direction cannot be (0:0)")
        return (a, a.field.one)
    return (a.field.one, b / a)


def infinitely_near(parent: SurfPoint, direction: Direction, *, label: str = "") -> SurfPoint:
    if parent.level + 1 > MAX_LEVEL:
        raise UnsupportedDepth(
            f"infinitely near level {parent.level + 1} over {parent.name()} exceeds {MAX_LEVEL}"
        )
    return SurfPoint(
        parent.base,
        parent.coords,
        label=label,
        conjugates=parent.conjugates,
        parent=parent,
        direction=canonical_direction(*direction),
    )


def exceptional_direction(point: SurfPoint) -> Direction:
    """Direction of the parent's exceptional line in this point's local chart."""
    a, _ = point.direction  # type: ignore[misc]
    field = point.field
    return (field.zero, field.one) if not a.is_zero() else (field.one, field.zero)


def is_proximate(point: SurfPoint, ancestor: SurfPoint) -> bool:
    """True when ``point`` lies on the strict transform of ``ancestor``'s exceptional curve."""
    if point.parent is None:
        return False
    if point.parent.key() == ancestor.key():
        return True
    grand = point.parent
    if grand.parent is None or grand.parent.key() != ancestor.key():
        return False
    return point.direction == exceptional_direction(grand)


# ---------------------------------------------------------------------------
# local equations


def blowup_chart(f: Poly, direction: Direction) -> Poly:
    """Total transform of a local equation in the blow-up chart centred on ``direction``."""
    field = f.field
    s = Poly.var(field, 0)
    t = Poly.var(field, 1)
    a, b = direction
    if a.is_zero():
        return f.compose([s * t, t])
    return f.compose([s, s * (t + b / a)])


def strict_transform(f: Poly, direction: Direction) -> Poly:
    m = f.order()
    g = blowup_chart(f, direction)
    return g.divide_monomial((0, m) if direction[0].is_zero() else (m, 0))


def local_chart_map(point: SurfPoint, chart: Optional[Chart] = None) -> Tuple[Chart, Poly, Poly]:
    """Chart of the root point and the map (s, t) -> (x, y) onto that chart."""
    if point.parent is None:
        chart = preferred_chart(point.base, point.coords) if chart is None else chart
        xy = chart_coords(point.base, point.coords, chart)
        if xy is None:
            raise ValueError(f"{point.name()} is not in chart {chart}")
        field = point.field
        return chart, Poly.var(field, 0) + xy[0], Poly.var(field, 1) + xy[1]
    chart, px, py = local_chart_map(point.parent, chart)
    field = point.field
    s = Poly.var(field, 0)
    t = Poly.var(field, 1)
    a, b = point.direction  # type: ignore[misc]
    subs = [s * t, t] if a.is_zero() else [s, s * (t + b)]
    return chart, px.compose(subs), py.compose(subs)


def local_poly(curve: Form, point: SurfPoint, chart: Optional[Chart] = None) -> Poly:
    """Local equation of ``curve`` (strict transform when infinitely near) at the origin."""
    if point.parent is None:
        chart = preferred_chart(point.base, point.coords) if chart is None else chart
        xy = chart_coords(point.base, point.coords, chart)
        if xy is None:
            raise ValueError(f"{point.name()} is not in chart {chart}")
        return curve.dehomogenize(chart).translate(xy)
    return strict_transform(local_poly(curve, point.parent, chart), point.direction)  # type: ignore[arg-type]


def mult_at(curve: Form, point: SurfPoint, *, chart: Optional[Chart] = None) -> int:
    if curve.is_zero():
        raise ZeroCurve("multiplicity of the zero curve is undefined")
    return local_poly(curve, point, chart).order()


def direction_poly(cone: Poly) -> UPoly:
    """cone(1, mu) as a polynomial in mu."""
    return cone.specialize(0, 1)


def _unsplit(factor: UPoly) -> UnsplitTangentCone:
    field = factor.field
    return UnsplitTangentCone(
        f"tangent cone factor {factor} does not split over Q[t]/({field.min_poly_text()})",
        details={"factor": str(factor), "degree": factor.degree},
    )


def count_directions(cone: Poly) -> int:
    """Distinct tangent directions of a homogeneous cone.

    Linear factors over the coordinate field count once each. One irreducible
    quadratic factor may be split by a quadratic extension and counts twice;
    any other factor raises UnsplitTangentCone.
    """
    m = cone.total_degree()
    if m <= 0:
        return 0
    u = direction_poly(cone)
    n = 1 if u.degree < m else 0
    split = False
    for factor, _ in u.factor_list():
        if factor.degree == 1:
            n += 1
        elif factor.degree == 2 and not split:
            split = True
            n += 2
        else:
            raise _unsplit(factor)
    return n


def tangent_roots(u: UPoly, m: int) -> List[Direction]:
    """Directions (1:mu) with u(mu) = 0, plus (0:1) when u has dropped degree below m."""
    field = u.field
    out: List[Direction] = []
    for factor, _ in u.factor_list():
        if factor.degree != 1:
            raise _unsplit(factor)
        out.append((field.one, -factor.coeff(0)))
    out.sort(key=lambda d: d[1].sort_key())
    if u.degree < m:
        out.append((field.zero, field.one))
    return out


# ---------------------------------------------------------------------------
# arrangements


@dataclass(frozen=True)
class Component:
    name: str
    form: Form
    coeff: int = 1


@dataclass(frozen=True)
class Arrangement:
    base: str
    components: Tuple[Component, ...]

    @property
    def names(self) -> List[str]:
        return [c.name for c in self.components]

    def component(self, name: str) -> Component:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)

    def total_degree(self) -> Tuple[int, ...]:
        size = 2 if self.base == P1xP1 else 1
        out = [0] * size
        for c in self.components:
            for i in range(size):
                out[i] += c.coeff * c.form.degree[i]
        return tuple(out)

    def local_total(self, point: SurfPoint) -> Poly:
        acc: Optional[Poly] = None
        for c in self.components:
            f = local_poly(c.form, point) ** c.coeff
            acc = f if acc is None else acc * f
        if acc is None:
            raise ZeroCurve("empty arrangement")
        return acc


def arrangement_mult_at(arr: Arrangement, point: SurfPoint) -> int:
    return sum(c.coeff * mult_at(c.form, point) for c in arr.components)


@dataclass(frozen=True)
class SingularPointRecord:
    point: SurfPoint
    total_mult: int
    component_mults: Dict[str, int]
    type: str
    tangent_directions: int
    note: str = ""

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {
            "point": self.point.name(),
            "coords": self.point.text(),
            "total_mult": self.total_mult,
            "component_mults": dict(sorted(self.component_mults.items())),
            "type": self.type,
            "tangent_directions": self.tangent_directions,
            "weight": self.point.weight,
        }
        if self.note:
            out["note"] = self.note
        return out


def classify_singularity(arr: Arrangement, point: SurfPoint) -> SingularPointRecord:
    mults = {c.name: mult_at(c.form, point) for c in arr.components}
    m = sum(c.coeff * mults[c.name] for c in arr.components)
    f = arr.local_total(point)
    cone = f.lowest_part()
    n = count_directions(cone)
    note = ""
    if m <= 1:
        kind = SMOOTH
    elif n == m and m in _ORDINARY:
        kind = _ORDINARY[m]
    elif m == 3 and n == 1:
        (direction,) = tangent_roots(direction_poly(cone), m)
        strict = strict_transform(f, direction)
        m2 = strict.order()
        n2 = count_directions(strict.lowest_part())
        if m2 == 3:
            kind = THREE_TO_THREE
            if n2 != 3:
                note = f"infinitely near triple point has {n2} tangent directions"
        else:
            kind = f"Other(multiplicity 3 with one tangent, then multiplicity {m2})"
    else:
        kind = f"Other(multiplicity {m}, {n} tangent directions)"
    log.debug("%s: multiplicity %d, %d directions, %s", point.name(), m, n, kind)
    return SingularPointRecord(point, m, mults, kind, n, note)


def strict_transform_smooth_after_blowup(arr: Arrangement, points: Sequence[SurfPoint]) -> bool:
    """True when one blow-up at each point leaves the total transform with normal crossings there."""
    for p in points:
        f = arr.local_total(p)
        cone = f.lowest_part()
        if count_directions(cone) != cone.total_degree():
            return False
    return True


# ---------------------------------------------------------------------------
# intersections


def _is_power_of_y(u: UPoly) -> bool:
    return not u.is_zero() and all(c.is_zero() for c in u.coeffs[:-1])


def _lead_at_zero(f: Poly) -> FieldElement:
    return f.upoly_coeffs(1)[-1](0)


def intersection_mult(c1: Form, c2: Form, point: SurfPoint, *, max_shear: int = 32) -> int:
    f = local_poly(c1, point)
    g = local_poly(c2, point)
    if f.is_zero() or g.is_zero():
        raise ZeroCurve("intersection with the zero curve")
    if not f.constant_term().is_zero() or not g.constant_term().is_zero():
        return 0
    field = f.field
    x = Poly.var(field, 0)
    y = Poly.var(field, 1)
    for shear in range(1, max_shear + 1):
        subs = [x + y * shear, y]
        fs, gs = f.compose(subs), g.compose(subs)
        f0, g0 = fs.specialize(0, 0), gs.specialize(0, 0)
        if f0.is_zero() and g0.is_zero():
            continue
        if not _is_power_of_y(upoly_gcd(f0, g0)):
            continue
        if _lead_at_zero(fs).is_zero() and _lead_at_zero(gs).is_zero():
            continue
        res = resultant(fs, gs, 1)
        if res.is_zero():
            raise CommonComponent(f"curves share a component through {point.name()}")
        log.debug("intersection at %s: shear %d, order %d", point.name(), shear, res.order())
        return res.order()
    raise RuntimeError(f"no valid shear up to {max_shear} at {point.name()}")


def _divisible_by_chart_line(form: Form, index: int) -> bool:
    return all(m[index] > 0 for m in form.poly.terms)


def common_component(c1: Form, c2: Form) -> bool:
    chart = CHARTS[c1.base][0]
    g = poly_gcd(c1.dehomogenize(chart), c2.dehomogenize(chart))
    if not g.is_constant():
        return True
    return any(
        _divisible_by_chart_line(c1, i) and _divisible_by_chart_line(c2, i)
        for i in chart_index(c1.base, chart)
    )


@dataclass(frozen=True)
class IntersectionCertificate:
    names: Tuple[str, str]
    bezout: int
    contributions: Tuple[Tuple[str, int], ...]

    @property
    def total(self) -> int:
        return sum(v for _, v in self.contributions)

    def to_dict(self) -> Dict[str, object]:
        return {
            "pair": list(self.names),
            "bezout": self.bezout,
            "points": {k: v for k, v in self.contributions},
        }


def _check_distinct(points: Sequence[SurfPoint]) -> None:
    seen: Dict[Tuple, str] = {}
    for p in points:
        k = p.key()
        if k in seen:
            raise DuplicatePoint(f"{p.name()} duplicates {seen[k]}")
        seen[k] = p.name()


def certify_complete(
    c1: Form,
    c2: Form,
    claimed: Sequence[SurfPoint],
    *,
    names: Tuple[str, str] = ("c1", "c2"),
) -> IntersectionCertificate:
    if common_component(c1, c2):
        raise CommonComponent(f"{names[0]} and {names[1]} share a component")
    _check_distinct(claimed)
    total = bezout_total(c1, c2)
    contributions = []
    for p in claimed:
        i = intersection_mult(c1, c2, p)
        contributions.append((p.name(), i * p.weight))
    cert = IntersectionCertificate(names, total, tuple(contributions))
    details = {"pair": list(names), "bezout": total, "found": cert.total}
    if cert.total < total:
        raise IncompleteList(
            f"{names[0]}.{names[1]}: listed points account for {cert.total} of {total}",
            deficit=total - cert.total,
            details=details,
        )
    if cert.total > total:
        raise OverCount(
            f"{names[0]}.{names[1]}: listed points account for {cert.total} > {total}",
            excess=cert.total - total,
            details=details,
        )
    return cert


# ---------------------------------------------------------------------------
# singular locus


def _check_univariate(u: UPoly, name: str) -> None:
    if u.degree > 0 and u.squarefree_part().degree != u.degree:
        raise ComponentSingularityUnresolved(f"{name} has a repeated line component")


def _remove_roots(r: UPoly, point: SurfPoint, xp: FieldElement) -> UPoly:
    if point.conjugates:
        mp = UPoly.make(r.field, rational_min_poly(xp))
        return r // upoly_gcd(r, mp)
    lin = UPoly.linear(r.field, xp)
    return r // lin if lin.divides(r) else r


def component_singularities_certify(curve: Form, claimed: Sequence[SurfPoint], *, name: str) -> None:
    """Prove that every singular point of ``curve`` is among ``claimed``.

    In each chart the x-coordinates of singular points are roots of
    gcd(Res_y(f, f_x), Res_y(f, f_y)). Vertical lines through claimed points are
    checked directly; the remaining roots are shown to carry no common zero of
    f, f_x, f_y by a gcd over K[x]/(r) that splits r on zero divisors.
    """
    for chart in CHARTS[curve.base]:
        f = curve.dehomogenize(chart)
        if f.is_constant():
            continue
        if f.degree_in(1) <= 0:
            _check_univariate(f.to_upoly(0), name)
            continue
        if f.degree_in(0) <= 0:
            _check_univariate(f.to_upoly(1), name)
            continue
        fx, fy = f.derivative(0), f.derivative(1)
        resultants = [r for r in (resultant(f, fx), resultant(f, fy)) if not r.is_zero()]
        if not resultants:
            raise ComponentSingularityUnresolved(f"{name} is not reduced in chart {chart}")
        s = resultants[0]
        for other in resultants[1:]:
            s = upoly_gcd(s, other)
        if s.is_constant():
            continue
        r = s.squarefree_part()
        local = []
        for p in claimed:
            xy = chart_coords(curve.base, p.coords, chart)
            if xy is not None:
                local.append((p, xy))
        for p, (xp, _) in local:
            line = upoly_gcd(
                upoly_gcd(f.specialize(0, xp), fx.specialize(0, xp)), fy.specialize(0, xp)
            )
            if line.is_zero():
                raise ComponentSingularityUnresolved(
                    f"{name} is singular along the line x = {xp} in chart {chart}"
                )
            for q, (xq, yq) in local:
                if xq != xp:
                    continue
                lin = UPoly.linear(line.field, yq)
                while line.degree > 0 and lin.divides(line):
                    line = line // lin
            if line.degree > 0:
                raise IncompleteList(
                    f"{name} has an unlisted singular point on x = {xp} in chart {chart}",
                    deficit=line.degree,
                    details={"component": name, "x": str(xp), "factor": str(line)},
                )
            r = _remove_roots(r, p, xp)
        if r.is_constant():
            continue
        for factor, deg in common_zero_branches([f, fx, fy], r):
            if deg == 0:
                continue
            if factor.degree == 1 and deg > 0:
                raise IncompleteList(
                    f"{name} has an unlisted singular point over x = {-factor.coeff(0)}"
                    f" in chart {chart}",
                    deficit=deg,
                    details={"component": name, "x": str(-factor.coeff(0))},
                )
            raise ComponentSingularityUnresolved(
                f"{name} may be singular over the roots of {factor} in chart {chart}",
                details={"component": name, "factor": str(factor)},
            )
    log.debug("%s: singular locus contained in the listed points", name)


@dataclass(frozen=True)
class SingularLocusCertificate:
    pairs: Tuple[IntersectionCertificate, ...]
    components: Tuple[str, ...]
    points: Tuple[str, ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            "points": list(self.points),
            "components_checked": list(self.components),
            "pairs": [c.to_dict() for c in self.pairs if c.total],
            "pairs_checked": len(self.pairs),
        }


def singular_locus_certify(arr: Arrangement, claimed: Sequence[SurfPoint]) -> SingularLocusCertificate:
    _check_distinct(claimed)
    for p in claimed:
        m = arrangement_mult_at(arr, p)
        if m < 2:
            raise OverCount(
                f"listed point {p.name()} has multiplicity {m} on the arrangement",
                excess=1,
                details={"point": p.name(), "multiplicity": m},
            )
    incidence = {
        c.name: [p for p in claimed if mult_at(c.form, p) > 0] for c in arr.components
    }
    pairs = []
    comps = arr.components
    for i, a in enumerate(comps):
        for b in comps[i + 1 :]:
            keys = {p.key() for p in incidence[b.name]}
            shared = [p for p in incidence[a.name] if p.key() in keys]
            pairs.append(certify_complete(a.form, b.form, shared, names=(a.name, b.name)))
    for c in comps:
        component_singularities_certify(c.form, claimed, name=c.name)
    return SingularLocusCertificate(
        tuple(pairs), tuple(c.name for c in comps), tuple(p.name() for p in claimed)
    )
