from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, List, Sequence, Tuple, Union

import sympy

from . import linalg
from .errors import DivisionByZero, ParseError, ReduciblePolynomial, UnsupportedDegree

log = logging.getLogger(__name__)

MAX_FIELD_DEGREE = 4

Rational = Union[int, Fraction]

_T = sympy.Symbol("t")


def to_sympy(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def to_qq(value: Rational) -> Any:
    """Element of sympy's QQ domain."""
    v = Fraction(value)
    return sympy.QQ(v.numerator, v.denominator)


def from_qq(value: Any) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _trim(c: List[Fraction]) -> List[Fraction]:
    while c and c[-1] == 0:
        c.pop()
    return c


def qpoly(coeffs: Sequence[Rational]) -> sympy.Poly:
    """Q[t] polynomial from coefficients given lowest degree first."""
    rep = [to_qq(c) for c in reversed(coeffs)] or [sympy.QQ.zero]
    return sympy.Poly.from_list(rep, _T, domain=sympy.QQ)


@dataclass(frozen=True)
class NumberField:
    """Q[t]/(min_poly). Coefficients are stored lowest degree first.

    Arithmetic goes through sympy's algebraic field built on the same
    minimal polynomial, with t mapped to its first complex root.
    """

    min_poly: Tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @cached_property
    def modulus(self) -> sympy.Poly:
        return qpoly(self.min_poly)

    @cached_property
    def domain(self) -> Any:
        """sympy domain QQ or QQ<t> isomorphic to this field."""
        if self.degree == 1:
            return sympy.QQ
        m = self.modulus
        return sympy.QQ.algebraic_field((m, sympy.CRootOf(m, 0)), alias="t")

    @cached_property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (Fraction(0),) * self.degree)

    @cached_property
    def one(self) -> "FieldElement":
        return self.rational(1)

    @cached_property
    def gen(self) -> "FieldElement":
        return self.from_qpoly([Fraction(0), Fraction(1)])

    def rational(self, value: Rational) -> "FieldElement":
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(value)
        return FieldElement(self, tuple(coeffs))

    def from_qpoly(self, coeffs: Sequence[Rational]) -> "FieldElement":
        r = qpoly(coeffs).rem(self.modulus)
        return self._from_high_first([from_qq(c) for c in r.rep.to_list()])

    def _from_high_first(self, coeffs: Sequence[Fraction]) -> "FieldElement":
        low = list(reversed(coeffs))
        low += [Fraction(0)] * (self.degree - len(low))
        return FieldElement(self, tuple(low))

    def to_domain(self, x: "FieldElement") -> Any:
        if self.degree == 1:
            return to_qq(x.coeffs[0])
        return self.domain([to_qq(c) for c in reversed(x.coeffs)])

    def from_domain(self, a: Any) -> "FieldElement":
        if self.degree == 1:
            return self.rational(from_qq(a))
        return self._from_high_first([from_qq(c) for c in a.to_list()])

    def __call__(self, value: Union[Rational, "FieldElement"]) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to a different number field")
            return value
        return self.rational(value)

    def min_poly_text(self) -> str:
        return qpoly_text(self.min_poly, var="t")


def qpoly_text(coeffs: Sequence[Fraction], *, var: str = "t") -> str:
    terms: List[str] = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            body = mono
        elif mono:
            body = f"{abs(c)}*{mono}"
        else:
            body = str(abs(c))
        sign = "-" if c < 0 else "+"
        terms.append(f"{sign} {body}")
    if not terms:
        return "0"
    text = " ".join(terms)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _reducibility_label(factors: Sequence[Tuple[sympy.Poly, int]]) -> str:
    repeated = [f for f, k in factors if k > 1]
    if repeated:
        f = min(repeated, key=lambda p: p.degree())
        return f"repeated factor {f.as_expr()}"
    lowest = min(f.degree() for f, _ in factors)
    if lowest == 1:
        return "rational root"
    return "quadratic factor" if lowest == 2 else f"factor of degree {lowest}"


def field_make(min_poly: Iterable[Rational]) -> NumberField:
    """Build Q[t]/(m) after certifying that m is monic and irreducible over Q."""
    coeffs = _trim([Fraction(c) for c in min_poly])
    if len(coeffs) < 2:
        raise ParseError("min_poly must have degree at least 1")
    if coeffs[-1] != 1:
        raise ParseError(f"min_poly must be monic, leading coefficient is {coeffs[-1]}")
    degree = len(coeffs) - 1
    if degree > MAX_FIELD_DEGREE:
        raise UnsupportedDegree(
            f"number fields of degree {degree} are not supported (max {MAX_FIELD_DEGREE})"
        )
    if degree > 1:
        _, factors = qpoly(coeffs).factor_list()
        if len(factors) > 1 or factors[0][1] > 1:
            raise ReduciblePolynomial(
                f"{qpoly_text(coeffs)} is reducible over Q ({_reducibility_label(factors)})",
                details={
                    "factors": [
                        {"factor": str(f.as_expr()), "multiplicity": k} for f, k in factors
                    ]
                },
            )
    field = NumberField(tuple(coeffs))
    log.debug("number field Q[t]/(%s) of degree %d", field.min_poly_text(), degree)
    return field


QQ = NumberField((Fraction(0), Fraction(1)))


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coeffs: Tuple[Fraction, ...]

    def _coerce(self, other: object) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("arithmetic across different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented  # type: ignore[return-value]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __add__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.field.degree == 1:
            return FieldElement(self.field, (self.coeffs[0] * o.coeffs[0],))
        f = self.field
        return f.from_domain(f.to_domain(self) * f.to_domain(o))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("division by zero in number field")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coeffs[0],))
        f = self.field
        return f.from_domain(f.domain.one / f.to_domain(self))

    def __truediv__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def sort_key(self) -> Tuple[Fraction, ...]:
        return self.coeffs

    def __str__(self) -> str:
        return qpoly_text(self.coeffs, var="t")

    def __repr__(self) -> str:
        return f"FieldElement({self})"


def fe_arith(x: FieldElement, y: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"Unknown op: {op}")


def rational_min_poly(x: FieldElement) -> List[Fraction]:
    """Monic minimal polynomial of x over Q, lowest degree first."""
    powers = [x.field.one]
    while True:
        nxt = powers[-1] * x
        vecs = [list(p.coeffs) for p in powers]
        if linalg.rank(vecs + [list(nxt.coeffs)]) == len(powers):
            break
        powers.append(nxt)
    # solve sum c_i x^i = -x^n for the dependent power
    n = len(powers)
    m = sympy.Matrix(
        [[to_sympy(powers[i].coeffs[r]) for i in range(n)] for r in range(x.field.degree)]
    )
    rhs = sympy.Matrix([-to_sympy(nxt.coeffs[r]) for r in range(x.field.degree)])
    sol, params = m.gauss_jordan_solve(rhs)
    sol = sol.subs({p: 0 for p in params})
    return [Fraction(int(v.p), int(v.q)) for v in sol] + [Fraction(1)]


def orbit_size(coords: Sequence[FieldElement]) -> int:
    """[Q(coords):Q], computed as the Q-dimension spanned by monomials in the coordinates."""
    field = coords[0].field if coords else QQ
    span: List[List[Fraction]] = [list(field.one.coeffs)]
    frontier = [field.one]
    rank = 1
    while frontier:
        nxt_frontier = []
        for f in frontier:
            for c in coords:
                v = f * c
                if linalg.rank(span + [list(v.coeffs)]) > rank:
                    span.append(list(v.coeffs))
                    rank += 1
                    nxt_frontier.append(v)
        frontier = nxt_frontier
    return rank
