"""Exact rank of rational matrices by fraction-free integer elimination."""

from fractions import Fraction
from math import gcd


def _scale_rows_to_int(rows):
    out = []
    for row in rows:
        den = 1
        for v in row:
            f = Fraction(v)
            den = den * f.denominator // gcd(den, f.denominator)
        out.append([int(Fraction(v) * den) for v in row])
    return out


def integer_rank(rows):
    """Rank over Q of a matrix with integer entries (Bareiss elimination).

    Division-free pivoting with the Bareiss determinant identity keeps every
    intermediate value an exact integer.
    """
    m = [list(map(int, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, len(m)):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        for r in range(row + 1, len(m)):
            for c in range(col + 1, ncols):
                m[r][c] = (m[row][col] * m[r][c] - m[r][col] * m[row][c]) // prev
            m[r][col] = 0
        prev = m[row][col]
        row += 1
        rank += 1
        if row == len(m):
            break
    return rank


def matrix_rank_exact(rows):
    """Rank over Q; rows may contain Fractions or ints."""
    rows = [r for r in rows if any(Fraction(v) != 0 for v in r)]
    if not rows:
        return 0
    return integer_rank(_scale_rows_to_int(rows))


def affine_rank(points):
    """Affine dimension of a finite point set with rational coordinates.

    Empty input is the caller's problem (polytope code uses -1 by convention
    and filters before calling). A single point has affine dimension 0.
    """
    pts = list(points)
    if not pts:
        raise ValueError("affine rank of an empty point set")
    base = pts[0]
    diffs = [[Fraction(p[i]) - Fraction(base[i]) for i in range(len(base))] for p in pts[1:]]
    return matrix_rank_exact(diffs)
