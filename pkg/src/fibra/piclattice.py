from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .arrangement import MAX_LEVEL, SurfPoint, is_proximate, local_chart_map
from .errors import (
    DuplicatePoint,
    LatticeMismatch,
    ParseError,
    UnsupportedDegree,
    UnsupportedDepth,
)
from .forms import P1xP1, P2, affine_indices
from .poly import Monomial, Poly

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Slot:
    """An exceptional class e; a slot of weight w is w conjugate orthogonal (-1)-curves."""

    label: str
    point: SurfPoint
    weight: int = 1

    @property
    def level(self) -> int:
        return self.point.level


@dataclass(frozen=True)
class SurfaceLattice:
    base: str
    slots: Tuple[Slot, ...] = ()
    chi_structure_sheaf: int = 1

    @property
    def base_rank(self) -> int:
        return 2 if self.base == P1xP1 else 1

    @property
    def rank(self) -> int:
        return self.base_rank + sum(s.weight for s in self.slots)

    @property
    def labels(self) -> List[str]:
        return [s.label for s in self.slots]

    def slot(self, label: str) -> Slot:
        for s in self.slots:
            if s.label == label:
                return s
        raise KeyError(label)

    def index(self, label: str) -> int:
        for i, s in enumerate(self.slots):
            if s.label == label:
                return i
        raise KeyError(label)

    def zero(self) -> "DivClass":
        return DivClass(self, (0,) * self.base_rank, (0,) * len(self.slots))

    def base_class(self, *coeffs: int) -> "DivClass":
        if len(coeffs) != self.base_rank:
            raise ValueError(f"{self.base} classes need {self.base_rank} base coefficients")
        return DivClass(self, tuple(coeffs), (0,) * len(self.slots))

    def exceptional(self, label: str) -> "DivClass":
        exc = [0] * len(self.slots)
        exc[self.index(label)] = 1
        return DivClass(self, (0,) * self.base_rank, tuple(exc))

    def canonical(self) -> "DivClass":
        base = (-2, -2) if self.base == P1xP1 else (-3,)
        return DivClass(self, base, (1,) * len(self.slots))

    def embed(self, cls: "DivClass") -> "DivClass":
        """Total transform of a class from a lattice whose slots are a prefix of ours."""
        if cls.lattice.base != self.base or cls.lattice.labels != self.labels[: len(cls.exc_coeffs)]:
            raise LatticeMismatch("class does not come from a sublattice of this lattice")
        pad = (0,) * (len(self.slots) - len(cls.exc_coeffs))
        return DivClass(self, cls.base_coeffs, cls.exc_coeffs + pad)

    def base_pairing(self, a: Sequence[int], b: Sequence[int]) -> int:
        if self.base == P1xP1:
            return a[0] * b[1] + a[1] * b[0]
        return a[0] * b[0]

    def gram_matrix(self) -> List[List[int]]:
        """Intersection matrix on the full basis, conjugate exceptional curves separated."""
        n = self.rank
        g = [[0] * n for _ in range(n)]
        if self.base == P1xP1:
            g[0][1] = g[1][0] = 1
        else:
            g[0][0] = 1
        for i in range(self.base_rank, n):
            g[i][i] = -1
        return g

    def signature(self) -> Tuple[int, int]:
        pos, neg, _ = linalg.inertia(self.gram_matrix())
        return pos, neg

    def proximity(self) -> Dict[Tuple[str, str], int]:
        """Coefficient of the strict exceptional curve of slot i in the total class e_j."""
        out: Dict[Tuple[str, str], int] = {}
        for j in reversed(self.slots):
            for i in self.slots:
                c = 1 if i.label == j.label else 0
                for k in self.slots:
                    if is_proximate(k.point, j.point):
                        c += out[(i.label, k.label)]
                out[(i.label, j.label)] = c
        return out


def base_lattice(base: str) -> SurfaceLattice:
    if base not in (P1xP1, P2):
        raise ParseError(f"unknown base surface {base!r}")
    return SurfaceLattice(base)


def blow_up(
    lattice: SurfaceLattice,
    point: SurfPoint,
    *,
    label: Optional[str] = None,
    weight: Optional[int] = None,
) -> SurfaceLattice:
    label = label or point.name()
    if point.level > MAX_LEVEL:
        raise UnsupportedDepth(f"{label} is infinitely near at level {point.level}")
    for s in lattice.slots:
        if s.label == label or s.point.key() == point.key():
            raise DuplicatePoint(f"{label} is already blown up as {s.label}")
    if point.parent is not None and not any(
        s.point.key() == point.parent.key() for s in lattice.slots
    ):
        raise UnsupportedDepth(f"{label} lies over a point that has not been blown up")
    slot = Slot(label, point, point.weight if weight is None else weight)
    return SurfaceLattice(lattice.base, lattice.slots + (slot,), lattice.chi_structure_sheaf)


@dataclass(frozen=True)
class DivClass:
    lattice: SurfaceLattice
    base_coeffs: Tuple[int, ...]
    exc_coeffs: Tuple[int, ...]

    def _same(self, other: "DivClass") -> None:
        if self.lattice is not other.lattice and self.lattice != other.lattice:
            raise LatticeMismatch("classes live in different lattices")

    def __add__(self, other: "DivClass") -> "DivClass":
        self._same(other)
        return DivClass(
            self.lattice,
            tuple(a + b for a, b in zip(self.base_coeffs, other.base_coeffs)),
            tuple(a + b for a, b in zip(self.exc_coeffs, other.exc_coeffs)),
        )

    def __neg__(self) -> "DivClass":
        return DivClass(
            self.lattice, tuple(-a for a in self.base_coeffs), tuple(-a for a in self.exc_coeffs)
        )

    def __sub__(self, other: "DivClass") -> "DivClass":
        return self + (-other)

    def __mul__(self, k: int) -> "DivClass":
        return DivClass(
            self.lattice, tuple(k * a for a in self.base_coeffs), tuple(k * a for a in self.exc_coeffs)
        )

    __rmul__ = __mul__

    def coeff(self, label: str) -> int:
        return self.exc_coeffs[self.lattice.index(label)]

    def is_zero(self) -> bool:
        return not any(self.base_coeffs) and not any(self.exc_coeffs)

    def to_text(self) -> str:
        if self.lattice.base == P1xP1:
            text = f"({self.base_coeffs[0]},{self.base_coeffs[1]})"
        else:
            text = f"{self.base_coeffs[0]}H"
        for s, c in zip(self.lattice.slots, self.exc_coeffs):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            text += f" {'+' if c > 0 else '-'} {mag}e[{s.label}]"
        return text

    def __str__(self) -> str:
        return self.to_text()


def intersect(d1: DivClass, d2: DivClass) -> int:
    d1._same(d2)
    lat = d1.lattice
    total = lat.base_pairing(d1.base_coeffs, d2.base_coeffs)
    for s, a, b in zip(lat.slots, d1.exc_coeffs, d2.exc_coeffs):
        total -= s.weight * a * b
    return total


def adjunction_genus(d: DivClass) -> int:
    k = d.lattice.canonical()
    return (intersect(d, d) + intersect(d, k)) // 2 + 1


def riemann_roch_chi(d: DivClass) -> int:
    k = d.lattice.canonical()
    return d.lattice.chi_structure_sheaf + (intersect(d, d) - intersect(d, k)) // 2


# ---------------------------------------------------------------------------
# h0 by interpolation


def _basis(lattice: SurfaceLattice, degree: Tuple[int, ...]) -> List[Monomial]:
    if lattice.base == P1xP1:
        a, b = degree
        return [(a - i, i, b - j, j) for i in range(a + 1) for j in range(b + 1)]
    (d,) = degree
    return [(i, j, d - i - j) for i in range(d + 1) for j in range(d + 1 - i)]


def _conjugate(value, field):
    # nontrivial automorphism of a quadratic field: t -> -c1 - t
    c1 = field.min_poly[1]
    return field.from_qpoly([value.coeffs[0] - c1 * value.coeffs[1], -value.coeffs[1]])


def _check_galois_stable(cls: DivClass, demand: Mapping[str, int]) -> None:
    lat = cls.lattice
    for s in lat.slots:
        if demand.get(s.label, 0) <= 0 or s.point.conjugates:
            continue
        root = s.point.root
        if all(c.is_rational() for c in root.coords):
            continue
        field = root.field
        if field.degree != 2:
            raise UnsupportedDegree(
                f"interpolation at {s.label} needs a Galois orbit point over a degree-{field.degree} field"
            )
        conj = tuple(_conjugate(c, field) for c in root.coords)
        twin = [
            t for t in lat.slots
            if t.point.level == s.point.level and t.point.root.coords == conj
            and demand.get(t.label, 0) == demand[s.label]
        ]
        if not twin:
            raise UnsupportedDegree(
                f"conditions at {s.label} are not matched at its Galois conjugate"
            )


def condition_demands(cls: DivClass) -> Dict[str, int]:
    """Required valuation along each exceptional curve for sections of ``cls``."""
    lat = cls.lattice
    prox = lat.proximity()
    mult = {s.label: -c for s, c in zip(lat.slots, cls.exc_coeffs)}
    return {
        i.label: sum(mult[j.label] * prox[(i.label, j.label)] for j in lat.slots)
        for i in lat.slots
    }


def h0_interpolation(cls: DivClass) -> int:
    """Dimension of the forms of the base degree meeting the exceptional conditions of ``cls``.

    Unknowns are taken over Q; each condition row over K is split into its
    rational components, which imposes the conditions at all Galois conjugates.
    """
    lat = cls.lattice
    degree = cls.base_coeffs
    if any(d < 0 for d in degree):
        return 0
    basis = _basis(lat, degree)
    demand = condition_demands(cls)
    _check_galois_stable(cls, demand)
    rows: List[List[Fraction]] = []
    for s in lat.slots:
        need = demand[s.label]
        if need <= 0:
            continue
        chart, px, py = local_chart_map(s.point)
        ix, iy = affine_indices(lat.base, chart)
        cache: Dict[Tuple[int, int], Poly] = {}

        def power(which: int, e: int) -> Poly:
            if (which, e) not in cache:
                cache[(which, e)] = (px if which == 0 else py) ** e
            return cache[(which, e)]

        columns = [power(0, m[ix]) * power(1, m[iy]) for m in basis]
        for a in range(need):
            for b in range(need - a):
                coeffs = [col.terms.get((a, b)) for col in columns]
                degree_k = s.point.field.degree
                for r in range(degree_k):
                    rows.append([Fraction(0) if c is None else c.coeffs[r] for c in coeffs])
    rank = linalg.rank(rows) if rows else 0
    log.debug("h0 of %s: %d monomials, rank %d", cls.to_text(), len(basis), rank)
    return len(basis) - rank


# ---------------------------------------------------------------------------
# class expressions

_CLASS_TOKEN = re.compile(r"\s*(?:(\d+)|(~?[A-Za-z_][A-Za-z0-9_]*'*)|(\S))")


def _class_tokens(text: str) -> List[Tuple[str, str]]:
    out: List[Tuple[str, str]] = []
    pos = 0
    text = text.replace("−", "-")
    while pos < len(text):
        m = _CLASS_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        elif op is not None:
            if op not in "+-*(),":
                raise ParseError(f"unexpected {op!r} in class expression {text!r}")
            out.append(("op", op))
        pos = m.end()
    out.append(("end", ""))
    return out


class ClassParser:
    """Parser for divisor class expressions.

    Atoms: ``(a,b)``, ``H``, ``K``, ``E(label)``, ``E'(label)``, ``sumE``,
    ``sumE'(l1,l2)``, ``~C`` and any name bound in ``names``.
    """

    def __init__(self, lattice: SurfaceLattice, names: Optional[Mapping[str, DivClass]] = None) -> None:
        self.lattice = lattice
        self.names: Dict[str, DivClass] = dict(names or {})
        self._tokens: List[Tuple[str, str]] = []
        self._i = 0
        self._text = ""

    def parse(self, text: str) -> DivClass:
        self._text = text
        self._tokens = _class_tokens(text)
        self._i = 0
        out = self._expr()
        if self._tokens[self._i][0] != "end":
            raise ParseError(f"trailing input in class expression {text!r}")
        return out

    def _peek(self) -> Tuple[str, str]:
        return self._tokens[self._i]

    def _accept(self, op: str) -> bool:
        if self._tokens[self._i] == ("op", op):
            self._i += 1
            return True
        return False

    def _expect(self, op: str) -> None:
        if not self._accept(op):
            raise ParseError(f"expected {op!r} in class expression {self._text!r}")

    def _expr(self) -> DivClass:
        if self._accept("-"):
            acc = -self._term()
        else:
            self._accept("+")
            acc = self._term()
        while True:
            if self._accept("+"):
                acc = acc + self._term()
            elif self._accept("-"):
                acc = acc - self._term()
            else:
                return acc

    def _term(self) -> DivClass:
        kind, text = self._peek()
        if kind == "num":
            self._i += 1
            self._accept("*")
            return self._atom() * int(text)
        return self._atom()

    def _labels(self) -> Optional[List[str]]:
        if not self._accept("("):
            return None
        labels: List[str] = []
        while True:
            kind, text = self._peek()
            if kind not in ("name", "num"):
                raise ParseError(f"expected a point label in {self._text!r}")
            self._i += 1
            labels.append(text)
            if self._accept(")"):
                return labels
            self._expect(",")

    def _atom(self) -> DivClass:
        kind, text = self._peek()
        lat = self.lattice
        if kind == "op" and text == "(":
            self._i += 1
            if self._peek()[0] == "num" and self._tokens[self._i + 1] == ("op", ","):
                a = int(self._peek()[1])
                self._i += 2
                b_kind, b = self._peek()
                if b_kind != "num":
                    raise ParseError(f"malformed bidegree in {self._text!r}")
                self._i += 1
                self._expect(")")
                return lat.base_class(a, int(b))
            inner = self._expr()
            self._expect(")")
            return inner
        if kind != "name":
            raise ParseError(f"unexpected {text or 'end of input'!r} in {self._text!r}")
        self._i += 1
        if text in self.names:
            return self.names[text]
        if text == "H" and lat.base == P2:
            return lat.base_class(1)
        if text == "K":
            return lat.canonical()
        bare = text.rstrip("'")
        primes = text[len(bare):]
        if bare == "E":
            labels = self._labels()
            if not labels or len(labels) != 1:
                raise ParseError(f"E needs exactly one point label in {self._text!r}")
            return self._slot(labels[0] + primes)
        if bare == "sumE":
            labels = self._labels()
            level = len(primes)
            acc = lat.zero()
            if labels is None:
                for s in lat.slots:
                    if s.level == level:
                        acc = acc + lat.exceptional(s.label)
                return acc
            for label in labels:
                acc = acc + self._slot(label + primes)
            return acc
        raise ParseError(f"unknown class {text!r} in {self._text!r}")

    def _slot(self, label: str) -> DivClass:
        try:
            return self.lattice.exceptional(label)
        except KeyError:
            raise ParseError(f"no exceptional slot {label!r} in {self._text!r}") from None


def parse_class(
    text: str, lattice: SurfaceLattice, names: Optional[Mapping[str, DivClass]] = None
) -> DivClass:
    return ClassParser(lattice, names).parse(text)


def verify_class_identity(
    lhs: str,
    rhs: str,
    lattice: SurfaceLattice,
    substitutions: Optional[Mapping[str, DivClass]] = None,
) -> bool:
    left = parse_class(lhs, lattice, substitutions)
    right = parse_class(rhs, lattice, substitutions)
    left._same(right)
    return left.base_coeffs == right.base_coeffs and left.exc_coeffs == right.exc_coeffs
