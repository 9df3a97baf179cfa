from __future__ import annotations

from fractions import Fraction

from hypothesis import given, strategies as st

from fibra import linalg


def test_rank_and_det():
    assert linalg.rank([]) == 0
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    assert linalg.rank([[1, 0, 0], [0, Fraction(1, 3), 0]]) == 2
    assert linalg.det([[0, 1], [1, 0]]) == -1
    assert linalg.det([[Fraction(1, 2), 1], [1, 4]]) == 1
    assert linalg.det([[1, 2], [2, 4]]) == 0


def test_inertia_of_intersection_forms():
    assert linalg.inertia([[0, 1], [1, 0]]) == (1, 1, 0)
    assert linalg.inertia([[1, 0, 0], [0, -1, 0], [0, 0, -1]]) == (1, 2, 0)
    assert linalg.inertia([[1, 1], [1, 1]]) == (1, 0, 1)
    assert linalg.inertia([[0, 0], [0, 0]]) == (0, 0, 2)
    assert linalg.inertia([]) == (0, 0, 0)


entry = st.integers(min_value=-5, max_value=5)
square = st.integers(min_value=1, max_value=4).flatmap(
    lambda n: st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(square)
def test_inertia_is_consistent_with_rank_and_det(rows):
    n = len(rows)
    sym = [[rows[i][j] + rows[j][i] for j in range(n)] for i in range(n)]
    pos, neg, zero = linalg.inertia(sym)
    assert pos + neg + zero == n
    assert n - zero == linalg.rank(sym)
    d = linalg.det(sym)
    assert (d == 0) == (zero > 0)
    if d:
        assert (d > 0) == (neg % 2 == 0)
