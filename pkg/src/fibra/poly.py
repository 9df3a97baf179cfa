from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.polys.groebnertools import groebner
from sympy.polys.orderings import grevlex
from sympy.polys.rings import ring

from .errors import DivisionByZero, ZeroInput
from .numfield import FieldElement, NumberField

log = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction, FieldElement]

VAR_NAMES = ("x", "y", "z", "w")

_U = sympy.Symbol("u")


# ---------------------------------------------------------------------------
# dense univariate polynomials over a number field


@dataclass(frozen=True)
class UPoly:
    """Dense univariate polynomial over K, coefficients lowest degree first, trimmed."""

    field: NumberField
    coeffs: Tuple[FieldElement, ...]

    @classmethod
    def make(cls, field: NumberField, coeffs: Sequence[Scalar]) -> "UPoly":
        c = [field(v) for v in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        return cls(field, tuple(c))

    @classmethod
    def zero(cls, field: NumberField) -> "UPoly":
        return cls(field, ())

    @classmethod
    def const(cls, field: NumberField, value: Scalar) -> "UPoly":
        return cls.make(field, [value])

    @classmethod
    def x(cls, field: NumberField) -> "UPoly":
        return cls.make(field, [0, 1])

    @classmethod
    def linear(cls, field: NumberField, root: Scalar) -> "UPoly":
        """x - root"""
        return cls.make(field, [-field(root), 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> FieldElement:
        if not self.coeffs:
            return self.field.zero
        return self.coeffs[-1]

    def coeff(self, k: int) -> FieldElement:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def _lift(self, other: Union["UPoly", Scalar]) -> "UPoly":
        if isinstance(other, UPoly):
            return other
        return UPoly.const(self.field, other)

    def __add__(self, other: Union["UPoly", Scalar]) -> "UPoly":
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UPoly.make(self.field, [self.coeff(i) + o.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Union["UPoly", Scalar]) -> "UPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other: Union["UPoly", Scalar]) -> "UPoly":
        return self._lift(other) - self

    def __mul__(self, other: Union["UPoly", Scalar]) -> "UPoly":
        if not isinstance(other, UPoly):
            s = self.field(other)
            return UPoly.make(self.field, [c * s for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UPoly.zero(self.field)
        out = [self.field.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UPoly.make(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UPoly":
        result = UPoly.const(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "UPoly") -> Tuple["UPoly", "UPoly"]:
        if other.is_zero():
            raise DivisionByZero("univariate division by zero")
        q, r = self.to_sympy().div(other.to_sympy())
        return UPoly.from_sympy(self.field, q), UPoly.from_sympy(self.field, r)

    def __floordiv__(self, other: "UPoly") -> "UPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UPoly") -> "UPoly":
        return divmod(self, other)[1]

    def divides(self, other: "UPoly") -> bool:
        return (other % self).is_zero()

    def monic(self) -> "UPoly":
        if self.is_zero():
            return self
        return self * self.lc.inverse()

    def derivative(self) -> "UPoly":
        return UPoly.make(self.field, [c * k for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, x: Scalar) -> FieldElement:
        acc = self.field.zero
        xv = self.field(x)
        for c in reversed(self.coeffs):
            acc = acc * xv + c
        return acc

    def compose(self, inner: "UPoly") -> "UPoly":
        acc = UPoly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def order(self) -> int:
        """Order of vanishing at 0; -1 for the zero polynomial."""
        for k, c in enumerate(self.coeffs):
            if not c.is_zero():
                return k
        return -1

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def squarefree_part(self) -> "UPoly":
        if self.is_constant():
            return UPoly.const(self.field, 1)
        return UPoly.from_sympy(self.field, self.to_sympy().sqf_part()).monic()

    def factor_list(self) -> List[Tuple["UPoly", int]]:
        """Monic irreducible factors over K with multiplicities."""
        if self.is_constant():
            return []
        _, factors = self.to_sympy().factor_list()
        return [(UPoly.from_sympy(self.field, g).monic(), k) for g, k in factors]

    def to_sympy(self) -> sympy.Poly:
        f = self.field
        rep = [f.to_domain(c) for c in reversed(self.coeffs)] or [f.domain.zero]
        return sympy.Poly.from_list(rep, _U, domain=f.domain)

    @classmethod
    def from_sympy(cls, field: NumberField, p: sympy.Poly) -> "UPoly":
        return cls.make(field, [field.from_domain(c) for c in reversed(p.rep.to_list())])

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        items = [((k,), c) for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return _format_terms(reversed(items))


def upoly_gcd(a: UPoly, b: UPoly) -> UPoly:
    if a.is_zero() and b.is_zero():
        return a
    return UPoly.from_sympy(a.field, a.to_sympy().gcd(b.to_sympy())).monic()


# ---------------------------------------------------------------------------
# sparse multivariate polynomials over a number field


@dataclass(frozen=True, eq=False)
class Poly:
    """Sparse polynomial in ``nvars`` variables; zero coefficients are never stored."""

    field: NumberField
    nvars: int
    terms: Dict[Monomial, FieldElement]

    @classmethod
    def make(cls, field: NumberField, nvars: int, terms: Dict[Monomial, Scalar]) -> "Poly":
        clean: Dict[Monomial, FieldElement] = {}
        for mono, c in terms.items():
            v = field(c)
            if not v.is_zero():
                clean[tuple(mono)] = v
        return cls(field, nvars, clean)

    @classmethod
    def zero(cls, field: NumberField, nvars: int = 2) -> "Poly":
        return cls(field, nvars, {})

    @classmethod
    def const(cls, field: NumberField, value: Scalar, nvars: int = 2) -> "Poly":
        return cls.make(field, nvars, {(0,) * nvars: value})

    @classmethod
    def var(cls, field: NumberField, index: int, nvars: int = 2) -> "Poly":
        mono = [0] * nvars
        mono[index] = 1
        return cls.make(field, nvars, {tuple(mono): 1})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def constant_term(self) -> FieldElement:
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((m[index] for m in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term; -1 for zero."""
        return min((sum(m) for m in self.terms), default=-1)

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.field, self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    def lowest_part(self) -> "Poly":
        return self.homogeneous_part(self.order())

    def _lift(self, other: Union["Poly", Scalar]) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(self.field, other, self.nvars)

    def __add__(self, other: Union["Poly", Scalar]) -> "Poly":
        o = self._lift(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m)
            v = c if v is None else v + c
            if v.is_zero():
                out.pop(m, None)
            else:
                out[m] = v
        return Poly(self.field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.field, self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Union["Poly", Scalar]) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other: Union["Poly", Scalar]) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other: Union["Poly", Scalar]) -> "Poly":
        if not isinstance(other, Poly):
            s = self.field(other)
            if s.is_zero():
                return Poly.zero(self.field, self.nvars)
            return Poly(self.field, self.nvars, {m: c * s for m, c in self.terms.items()})
        out: Dict[Monomial, FieldElement] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.field, self.nvars, {m: c for m, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        result = Poly.const(self.field, 1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self, index: int) -> "Poly":
        out: Dict[Monomial, FieldElement] = {}
        for m, c in self.terms.items():
            if m[index] == 0:
                continue
            mm = list(m)
            mm[index] -= 1
            out[tuple(mm)] = c * m[index]
        return Poly(self.field, self.nvars, out)

    def evaluate(self, values: Sequence[Scalar]) -> FieldElement:
        vals = [self.field(v) for v in values]
        acc = self.field.zero
        for m, c in self.terms.items():
            term = c
            for v, e in zip(vals, m):
                if e:
                    term = term * (v**e)
            acc = acc + term
        return acc

    def compose(self, subs: Sequence["Poly"]) -> "Poly":
        """Substitute subs[i] for variable i; the result lives in subs' ring."""
        if len(subs) != self.nvars:
            raise ValueError("compose needs one substitution per variable")
        target = subs[0].nvars
        cache: Dict[Tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in cache:
                cache[key] = subs[i] ** e
            return cache[key]

        acc = Poly.zero(self.field, target)
        for m, c in self.terms.items():
            term = Poly.const(self.field, c, target)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            acc = acc + term
        return acc

    def translate(self, shift: Sequence[Scalar]) -> "Poly":
        """p(x1 + s1, ..., xn + sn)."""
        s = [self.field(v) for v in shift]
        out: Dict[Monomial, FieldElement] = {}
        for m, c in self.terms.items():
            partial: Dict[Monomial, FieldElement] = {(): c}
            for i, e in enumerate(m):
                nxt: Dict[Monomial, FieldElement] = {}
                for k in range(e + 1):
                    f = s[i] ** (e - k) * comb(e, k)
                    if f.is_zero():
                        continue
                    for pm, pc in partial.items():
                        key = pm + (k,)
                        v = pc * f
                        nxt[key] = nxt[key] + v if key in nxt else v
                partial = nxt
            for pm, pc in partial.items():
                out[pm] = out[pm] + pc if pm in out else pc
        return Poly(self.field, self.nvars, {m: c for m, c in out.items() if not c.is_zero()})

    def divide_monomial(self, mono: Sequence[int]) -> "Poly":
        out: Dict[Monomial, FieldElement] = {}
        for m, c in self.terms.items():
            q = tuple(a - b for a, b in zip(m, mono))
            if min(q) < 0:
                raise ValueError(f"{self} is not divisible by monomial {tuple(mono)}")
            out[q] = c
        return Poly(self.field, self.nvars, out)

    def to_upoly(self, index: int) -> UPoly:
        """View a polynomial in the single variable ``index``."""
        deg = self.degree_in(index)
        coeffs = [self.field.zero] * (deg + 1)
        for m, c in self.terms.items():
            if any(e for i, e in enumerate(m) if i != index):
                raise ValueError(f"{self} is not univariate in variable {index}")
            coeffs[m[index]] = c
        return UPoly.make(self.field, coeffs)

    @classmethod
    def from_upoly(cls, u: UPoly, index: int, nvars: int = 2) -> "Poly":
        terms: Dict[Monomial, FieldElement] = {}
        for k, c in enumerate(u.coeffs):
            mono = [0] * nvars
            mono[index] = k
            terms[tuple(mono)] = c
        return cls.make(u.field, nvars, terms)

    def upoly_coeffs(self, var: int) -> List[UPoly]:
        """Bivariate only: coefficients in ``var`` as univariate polys in the other variable."""
        other = 1 - var
        deg = self.degree_in(var)
        buckets: List[Dict[int, FieldElement]] = [dict() for _ in range(deg + 1)]
        for m, c in self.terms.items():
            buckets[m[var]][m[other]] = c
        out: List[UPoly] = []
        for b in buckets:
            top = max(b, default=-1)
            out.append(UPoly.make(self.field, [b.get(k, self.field.zero) for k in range(top + 1)]))
        return out

    def specialize(self, index: int, value: Scalar) -> UPoly:
        """Bivariate only: set variable ``index`` to value, return a poly in the other."""
        other = 1 - index
        v = self.field(value)
        out: Dict[int, FieldElement] = {}
        for m, c in self.terms.items():
            term = c * (v ** m[index]) if m[index] else c
            out[m[other]] = out[m[other]] + term if m[other] in out else term
        top = max(out, default=-1)
        return UPoly.make(self.field, [out.get(k, self.field.zero) for k in range(top + 1)])

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=lambda m: (sum(m), m))

    def normalized(self) -> "Poly":
        """Scale so that the leading coefficient (graded lex) is 1."""
        if self.is_zero():
            return self
        return self * self.terms[self.leading_monomial()].inverse()

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.terms.values())

    def to_sympy(self, order: Optional[Sequence[int]] = None) -> sympy.Poly:
        """sympy polynomial over the field's domain, generators permuted by ``order``."""
        idx = tuple(range(self.nvars)) if order is None else tuple(order)
        f = self.field
        rep = {tuple(m[i] for i in idx): f.to_domain(c) for m, c in self.terms.items()}
        if not rep:
            rep = {(0,) * self.nvars: f.domain.zero}
        gens = [sympy.Symbol(VAR_NAMES[i]) for i in idx]
        return sympy.Poly.from_dict(rep, *gens, domain=f.domain)

    @classmethod
    def from_sympy(
        cls, field: NumberField, p: sympy.Poly, order: Optional[Sequence[int]] = None
    ) -> "Poly":
        nvars = len(p.gens)
        idx = tuple(range(nvars)) if order is None else tuple(order)
        terms: Dict[Monomial, FieldElement] = {}
        for m, c in p.as_dict(native=True).items():
            mono = [0] * nvars
            for pos, i in enumerate(idx):
                mono[i] = m[pos]
            terms[tuple(mono)] = field.from_domain(c)
        return cls.make(field, nvars, terms)

    def items_sorted(self) -> Iterator[Tuple[Monomial, FieldElement]]:
        for m in sorted(self.terms, key=lambda m: (-sum(m), tuple(-e for e in m))):
            yield m, self.terms[m]

    def to_text(self, names: Sequence[str] = VAR_NAMES) -> str:
        if not self.terms:
            return "0"
        return _format_terms(self.items_sorted(), names=names)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self})"


def _format_terms(items, *, names: Sequence[str] = ("x",)) -> str:
    parts: List[str] = []
    for mono, c in items:
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono_text = "*".join(factors)
        if c.is_rational():
            v = c.to_fraction()
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if mono_text and mag == 1:
                body = mono_text
            elif mono_text:
                body = f"{mag}*{mono_text}"
            else:
                body = str(mag)
        else:
            sign = "+"
            body = f"({c})*{mono_text}" if mono_text else f"({c})"
        parts.append(f"{sign} {body}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


# ---------------------------------------------------------------------------
# resultants and gcds


def resultant(p: Poly, q: Poly, var: int = 1) -> UPoly:
    """Resultant of two bivariate polynomials eliminating ``var``, as a polynomial in the other."""
    if p.is_zero() or q.is_zero():
        raise ZeroInput("resultant of a zero polynomial")
    field = p.field
    m, n = p.degree_in(var), q.degree_in(var)
    if m == 0 and n == 0:
        return UPoly.const(field, 1)
    if m == 0:
        return p.upoly_coeffs(var)[0] ** n
    if n == 0:
        return q.upoly_coeffs(var)[0] ** m
    order = (var, 1 - var)
    res = p.to_sympy(order).resultant(q.to_sympy(order))
    out = UPoly.from_sympy(field, res)
    log.debug("resultant eliminating %s: degree %d", VAR_NAMES[var], out.degree)
    return out


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """gcd of two polynomials over K, normalized."""
    if p.is_zero():
        return q.normalized()
    if q.is_zero():
        return p.normalized()
    g = p.to_sympy().gcd(q.to_sympy())
    return Poly.from_sympy(p.field, g).normalized()


@dataclass(frozen=True)
class SquarefreeResult:
    gcd: Poly
    is_squarefree: bool


def squarefree_and_gcd(p: Poly, q: Optional[Poly] = None) -> SquarefreeResult:
    """gcd(p, q) when q is given, else gcd(p, p_x, p_y); squarefree flag refers to p."""
    sq = poly_gcd(poly_gcd(p, p.derivative(0)), p.derivative(1)) if not p.is_zero() else p
    flag = (not p.is_zero()) and sq.is_constant()
    if q is None:
        return SquarefreeResult(gcd=sq, is_squarefree=flag)
    return SquarefreeResult(gcd=poly_gcd(p, q), is_squarefree=flag)


# ---------------------------------------------------------------------------
# common zeros over the roots of a univariate factor


def generates_unit_ideal(polys: Sequence[Poly]) -> bool:
    """True when the polynomials have no common zero over the algebraic closure."""
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        return False
    field = nonzero[0].field
    R = ring(",".join(VAR_NAMES[: nonzero[0].nvars]), field.domain, grevlex)[0]
    elems = [R.from_dict({m: field.to_domain(c) for m, c in p.terms.items()}) for p in nonzero]
    return any(g.is_ground for g in groebner(elems, R))


def common_zero_branches(polys: Sequence[Poly], modulus: UPoly) -> List[Tuple[UPoly, int]]:
    """Common zeros of ``polys`` on the vertical lines x = root of each factor r of ``modulus``.

    A linear r gives the y-degree of the gcd of the restricted polynomials, or
    -2 when every polynomial vanishes on that line. An r of higher degree
    gives 1 when r(x) and ``polys`` have a common zero and 0 otherwise.
    """
    field = modulus.field
    done: List[Tuple[UPoly, int]] = []
    for r, _ in modulus.factor_list():
        if r.degree == 1:
            root = -r.coeff(0)
            g = UPoly.zero(field)
            for p in polys:
                g = upoly_gcd(g, p.specialize(0, root))
            done.append((r, -2 if g.is_zero() else g.degree))
        else:
            unit = generates_unit_ideal([Poly.from_upoly(r, 0), *polys])
            done.append((r, 0 if unit else 1))
    done.sort(key=lambda item: (item[0].degree, [c.sort_key() for c in item[0].coeffs]))
    return done
