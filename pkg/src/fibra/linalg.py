"""Exact rational linear algebra on sympy's DomainMatrix."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple, Union

import sympy
from sympy.polys.matrices import DomainMatrix

Entry = Union[int, Fraction]


def to_matrix(rows: Sequence[Sequence[Entry]]) -> DomainMatrix:
    entries = [[Fraction(v) for v in row] for row in rows]
    ncols = len(entries[0]) if entries else 0
    return DomainMatrix(
        [[sympy.QQ(v.numerator, v.denominator) for v in row] for row in entries],
        (len(entries), ncols),
        sympy.QQ,
    )


def det(matrix: Sequence[Sequence[Entry]]) -> Fraction:
    d = to_matrix(matrix).det()
    return Fraction(int(d.numerator), int(d.denominator))


def rank(rows: Sequence[Sequence[Entry]]) -> int:
    if not rows:
        return 0
    return to_matrix(rows).rank()


def inertia(matrix: Sequence[Sequence[Entry]]) -> Tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric rational matrix.

    The characteristic polynomial of a symmetric matrix is real-rooted, so
    Descartes' sign rule counts its positive roots exactly.
    """
    n = len(matrix)
    if n == 0:
        return 0, 0, 0
    cp = [Fraction(int(c.numerator), int(c.denominator)) for c in to_matrix(matrix).charpoly()]
    zero = 0
    while zero < n and cp[n - zero] == 0:
        zero += 1
    signs = [c > 0 for c in cp if c != 0]
    pos = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    return pos, n - pos - zero, zero
