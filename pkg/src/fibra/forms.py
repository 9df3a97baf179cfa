from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import DegreeOverflow, ParseError
from .expr import parse_affine
from .numfield import FieldElement, NumberField
from .poly import Monomial, Poly

P1xP1 = "P1xP1"
P2 = "P2"
BASES = (P1xP1, P2)

HOMOGENEOUS_NAMES = {P1xP1: ("u0", "u1", "v0", "v1"), P2: ("X", "Y", "Z")}

# P1xP1 charts are (iu, iv): the coordinate of each factor set to 1.
# P2 charts are the index of the coordinate set to 1, preferred order Z, Y, X.
Chart = Union[Tuple[int, int], int]
CHARTS: Dict[str, Tuple[Chart, ...]] = {
    P1xP1: ((0, 0), (0, 1), (1, 0), (1, 1)),
    P2: (2, 1, 0),
}


@dataclass(frozen=True)
class Form:
    base: str
    degree: Tuple[int, ...]
    poly: Poly

    @property
    def field(self) -> NumberField:
        return self.poly.field

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __mul__(self, other: "Form") -> "Form":
        if self.base != other.base:
            raise ValueError("product of forms on different bases")
        degree = tuple(a + b for a, b in zip(self.degree, other.degree))
        return make_form(self.base, degree, self.poly * other.poly)

    def __add__(self, other: "Form") -> "Form":
        if self.base != other.base or self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        return make_form(self.base, self.degree, self.poly + other.poly)

    def scale(self, c: Union[int, FieldElement]) -> "Form":
        return make_form(self.base, self.degree, self.poly * c)

    def evaluate(self, coords: Sequence[FieldElement]) -> FieldElement:
        return self.poly.evaluate(coords)

    def dehomogenize(self, chart: Chart) -> Poly:
        """Affine polynomial in (x, y) on the given chart."""
        idx = affine_indices(self.base, chart)
        terms: Dict[Monomial, FieldElement] = {}
        for m, c in self.poly.terms.items():
            key = (m[idx[0]], m[idx[1]])
            terms[key] = terms[key] + c if key in terms else c
        return Poly.make(self.field, 2, terms)

    def text(self) -> str:
        return self.poly.to_text(HOMOGENEOUS_NAMES[self.base])


@dataclass(frozen=True)
class BiForm(Form):
    """Bihomogeneous form on P1xP1 in (u0:u1), (v0:v1), bidegree (a, b)."""


@dataclass(frozen=True)
class ProjForm(Form):
    """Homogeneous form on P2 in (X:Y:Z)."""


def make_form(base: str, degree: Sequence[int], poly: Poly) -> Form:
    degree = tuple(degree)
    for m in poly.terms:
        if base == P1xP1 and (m[0] + m[1], m[2] + m[3]) != degree:
            raise ValueError(f"term {m} is not of bidegree {degree}")
        if base == P2 and sum(m) != degree[0]:
            raise ValueError(f"term {m} is not of degree {degree[0]}")
    if base == P1xP1:
        return BiForm(base, degree, poly)
    if base == P2:
        return ProjForm(base, degree, poly)
    raise ParseError(f"unknown base surface {base!r}")


def affine_indices(base: str, chart: Chart) -> Tuple[int, int]:
    """Indices of the homogeneous coordinates that become x and y on a chart."""
    if base == P1xP1:
        iu, iv = chart  # type: ignore[misc]
        return (1 - iu, 2 + (1 - iv))
    others = [i for i in range(3) if i != chart]
    return (others[0], others[1])


def chart_index(base: str, chart: Chart) -> Tuple[int, ...]:
    """Indices of the homogeneous coordinates set to 1 on a chart."""
    if base == P1xP1:
        iu, iv = chart  # type: ignore[misc]
        return (iu, 2 + iv)
    return (chart,)  # type: ignore[return-value]


def homogenize(base: str, degree: Sequence[int], affine: Poly) -> Form:
    """Homogenize an affine polynomial in x, y (x = u1/u0, y = v1/v0 or x = X/Z, y = Y/Z)."""
    degree = tuple(degree)
    terms: Dict[Monomial, FieldElement] = {}
    for (i, j), c in affine.terms.items():
        if base == P1xP1:
            a, b = degree
            if i > a or j > b:
                raise DegreeOverflow(
                    f"monomial x^{i}*y^{j} exceeds declared bidegree ({a},{b})"
                )
            terms[(a - i, i, b - j, j)] = c
        elif base == P2:
            (d,) = degree
            if i + j > d:
                raise DegreeOverflow(f"monomial x^{i}*y^{j} exceeds declared degree {d}")
            terms[(i, j, d - i - j)] = c
        else:
            raise ParseError(f"unknown base surface {base!r}")
    nvars = 4 if base == P1xP1 else 3
    return make_form(base, degree, Poly.make(affine.field, nvars, terms))


def parse_and_homogenize(
    expr: str,
    base: str,
    declared_degree: Sequence[int],
    *,
    field: NumberField,
    constants: Optional[Mapping[str, FieldElement]] = None,
) -> Form:
    if base == P1xP1 and len(declared_degree) != 2:
        raise ParseError(f"P1xP1 curves need a bidegree, got {list(declared_degree)}")
    if base == P2 and len(declared_degree) != 1:
        raise ParseError(f"P2 curves need a single degree, got {list(declared_degree)}")
    return homogenize(base, declared_degree, parse_affine(expr, field, constants))


def bezout_total(f: Form, g: Form) -> int:
    if f.base == P1xP1:
        (a1, b1), (a2, b2) = f.degree, g.degree
        return a1 * b2 + a2 * b1
    return f.degree[0] * g.degree[0]


def chart_coords(
    base: str, coords: Sequence[FieldElement], chart: Chart
) -> Optional[Tuple[FieldElement, FieldElement]]:
    """Affine coordinates of a projective point on a chart, or None if it lies outside."""
    one_idx = chart_index(base, chart)
    if any(coords[i].is_zero() for i in one_idx):
        return None
    ix, iy = affine_indices(base, chart)
    if base == P1xP1:
        return coords[ix] / coords[one_idx[0]], coords[iy] / coords[one_idx[1]]
    return coords[ix] / coords[one_idx[0]], coords[iy] / coords[one_idx[0]]


def preferred_chart(base: str, coords: Sequence[FieldElement]) -> Chart:
    for chart in CHARTS[base]:
        if chart_coords(base, coords, chart) is not None:
            return chart
    raise ValueError("point lies in no chart")