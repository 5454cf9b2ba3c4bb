from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bellpoly import affine_rank, integer_rank, matrix_rank_exact

F = Fraction


def test_zero_matrix():
    assert matrix_rank_exact([[F(0)] * 3] * 4) == 0
    assert integer_rank([[0, 0], [0, 0]]) == 0


def test_identity_and_duplicates():
    ident = [[F(int(i == j)) for j in range(4)] for i in range(4)]
    assert matrix_rank_exact(ident) == 4
    assert matrix_rank_exact(ident + ident) == 4


def test_rank_deficient_exact():
    # Third row is the sum of the first two; floats would need a tolerance
    # to see this, exact arithmetic must not.
    rows = [
        [F(1, 3), F(1, 7), F(2, 11)],
        [F(5, 13), F(1, 2), F(3, 17)],
        [F(1, 3) + F(5, 13), F(1, 7) + F(1, 2), F(2, 11) + F(3, 17)],
    ]
    assert matrix_rank_exact(rows) == 2


def test_integer_rank_agrees_with_fraction_path():
    rows = [[2, 4, 6], [1, 2, 3], [0, 1, 1]]
    assert integer_rank(rows) == 2
    assert matrix_rank_exact([[F(v) for v in r] for r in rows]) == 2


def test_affine_rank_simplex():
    # n+1 affinely independent points span affine dimension n.
    pts = [[F(0)] * 3,
           [F(1), F(0), F(0)],
           [F(0), F(1), F(0)],
           [F(0), F(0), F(1)]]
    assert affine_rank(pts) == 3
    assert affine_rank(pts[:1]) == 0
    with pytest.raises(ValueError):
        affine_rank([])


def test_affine_rank_translation_invariant():
    pts = [[F(1, 2), F(3)], [F(5, 7), F(3)], [F(0), F(3)]]
    shifted = [[a + F(9, 4), b - F(1, 3)] for a, b in pts]
    assert affine_rank(pts) == affine_rank(shifted) == 1


small_entries = st.integers(min_value=-6, max_value=6)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(2, 5), st.data())
def test_rank_matches_sympy(nrows, ncols, data):
    rows = [
        [data.draw(small_entries) for _ in range(ncols)]
        for _ in range(nrows)
    ]
    expected = sympy.Matrix(rows).rank()
    assert integer_rank(rows) == expected
    assert matrix_rank_exact([[F(v) for v in r] for r in rows]) == expected


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(4)), st.integers(1, 9))
def test_rank_invariant_under_shuffle_and_scaling(perm, scale):
    rows = [
        [F(1), F(2), F(3)],
        [F(0), F(1), F(1)],
        [F(1), F(3), F(4)],
        [F(2), F(0), F(1)],
    ]
    base = matrix_rank_exact(rows)
    shuffled = [[scale * v for v in rows[i]] for i in perm]
    assert matrix_rank_exact(shuffled) == base
