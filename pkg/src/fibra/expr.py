from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from .errors import ParseError
from .numfield import FieldElement, NumberField, QQ
from .poly import Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z])|(.))")


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    """Single letters are names, so ``xy`` is ``x*y`` once implicit products apply."""
    out: List[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, op = m.groups()
        start = m.start(m.lastindex) if m.lastindex else pos
        if num is not None:
            out.append(Token("num", num, start))
        elif name is not None:
            out.append(Token("name", name, start))
        elif op is not None:
            if op not in "+-*/^()=":
                raise ParseError(f"unexpected character {op!r} at {start} in {text!r}")
            out.append(Token("op", op, start))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class ExprParser:
    """Recursive-descent parser for polynomial expressions.

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/")? unary)*        implicit product when no operator
    unary := ("+" | "-") unary | power
    power := atom ("^" NUM)?
    atom  := NUM | NAME | "(" expr ")"

    An optional single ``=`` moves the right-hand side to the left.
    """

    def __init__(
        self,
        field: NumberField,
        variables: Sequence[str],
        constants: Optional[Mapping[str, FieldElement]] = None,
    ) -> None:
        self.field = field
        self.variables = {name: i for i, name in enumerate(variables)}
        self.nvars = len(variables)
        self.constants: Dict[str, FieldElement] = dict(constants or {})
        self._tokens: List[Token] = []
        self._i = 0
        self._text = ""

    def parse(self, text: str) -> Poly:
        self._text = text
        self._tokens = tokenize(text)
        self._i = 0
        if self._peek().kind == "end":
            raise ParseError(f"empty expression {text!r}")
        lhs = self._expr()
        if self._accept("="):
            rhs = self._expr()
            lhs = lhs - rhs
        tok = self._peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected {tok.text!r} at {tok.pos} in {text!r}")
        return lhs

    def _peek(self) -> Token:
        return self._tokens[self._i]

    def _next(self) -> Token:
        tok = self._tokens[self._i]
        self._i += 1
        return tok

    def _accept(self, op: str) -> bool:
        tok = self._peek()
        if tok.kind == "op" and tok.text == op:
            self._i += 1
            return True
        return False

    def _expr(self) -> Poly:
        acc = self._term()
        while True:
            if self._accept("+"):
                acc = acc + self._term()
            elif self._accept("-"):
                acc = acc - self._term()
            else:
                return acc

    def _starts_factor(self, tok: Token) -> bool:
        return tok.kind in ("num", "name") or (tok.kind == "op" and tok.text == "(")

    def _term(self) -> Poly:
        acc = self._unary()
        while True:
            tok = self._peek()
            if self._accept("*"):
                acc = acc * self._unary()
            elif self._accept("/"):
                den = self._unary()
                if not den.is_constant() or den.is_zero():
                    raise ParseError(
                        f"division by a non-constant or zero at {tok.pos} in {self._text!r}"
                    )
                acc = acc * den.constant_term().inverse()
            elif self._starts_factor(tok):
                acc = acc * self._unary()
            else:
                return acc

    def _unary(self) -> Poly:
        if self._accept("-"):
            return -self._unary()
        if self._accept("+"):
            return self._unary()
        return self._power()

    def _power(self) -> Poly:
        base = self._atom()
        if self._accept("^"):
            tok = self._next()
            if tok.kind != "num":
                raise ParseError(f"exponent must be a natural number at {tok.pos} in {self._text!r}")
            return base ** int(tok.text)
        return base

    def _atom(self) -> Poly:
        tok = self._next()
        if tok.kind == "num":
            return Poly.const(self.field, int(tok.text), self.nvars)
        if tok.kind == "name":
            if tok.text in self.variables:
                return Poly.var(self.field, self.variables[tok.text], self.nvars)
            if tok.text in self.constants:
                return Poly.const(self.field, self.constants[tok.text], self.nvars)
            raise ParseError(f"unknown symbol {tok.text!r} at {tok.pos} in {self._text!r}")
        if tok.kind == "op" and tok.text == "(":
            inner = self._expr()
            if not self._accept(")"):
                raise ParseError(f"missing ')' for '(' at {tok.pos} in {self._text!r}")
            return inner
        raise ParseError(f"unexpected {tok.text or 'end of input'!r} at {tok.pos} in {self._text!r}")


def parse_rational_poly(text: str, *, var: str = "t") -> List[Fraction]:
    """Parse a univariate rational polynomial, coefficients lowest degree first."""
    p = ExprParser(QQ, [var]).parse(text)
    deg = p.degree_in(0)
    return [p.terms.get((k,), QQ.zero).to_fraction() for k in range(deg + 1)]


def parse_constant(
    text: str, field: NumberField, constants: Optional[Mapping[str, FieldElement]] = None
) -> FieldElement:
    """Parse a closed expression such as ``3/2+1/2*t`` or ``2/t`` to a field element."""
    env = {"t": field.gen, **(constants or {})}
    p = ExprParser(field, [], env).parse(text)
    if not p.is_constant():
        raise ParseError(f"{text!r} is not a constant")
    return p.constant_term()


def parse_affine(
    text: str, field: NumberField, constants: Optional[Mapping[str, FieldElement]] = None
) -> Poly:
    """Parse an affine equation in x, y with generator t and bound parameters."""
    env = {"t": field.gen, **(constants or {})}
    return ExprParser(field, ["x", "y"], env).parse(text)
