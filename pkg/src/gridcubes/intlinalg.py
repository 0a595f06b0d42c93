"""Exact integer linear algebra for generator systems.

Two questions come up in the cube search: is a set of integer vectors
linearly independent over the rationals, and does it extend to a basis of
the integer lattice Z^n?  The first is answered by fraction-free Gaussian
elimination, the second by Smith-normal-form reduction (the system is
extendable iff every elementary divisor equals 1).  Everything is plain
Python integers; no floating point is allowed near these decisions.
"""

from __future__ import annotations

from math import gcd
from typing import Optional, Sequence

IntVector = Sequence[int]


def _normalize(v: list[int]) -> tuple[int, ...]:
    """Divide out the content and make the leading nonzero entry positive."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g > 1:
        v = [x // g for x in v]
    for x in v:
        if x > 0:
            break
        if x < 0:
            v = [-x for x in v]
            break
    return tuple(v)


def reduce_against(vec: IntVector, reduced: list[tuple[tuple[int, ...], int]]) -> Optional[tuple[int, ...]]:
    """Fraction-free reduction of vec against an echelon list of rows.

    `reduced` holds (row, pivot_index) pairs where each row is zero at the
    pivots of all earlier rows.  Returns the normalized reduced vector, or
    None when vec is a rational combination of the rows.
    """
    v = list(vec)
    for row, piv in reduced:
        if v[piv]:
            a, b = row[piv], v[piv]
            v = [a * x - b * y for x, y in zip(v, row)]
    if not any(v):
        return None
    return _normalize(v)


def pivot_index(row: Sequence[int]) -> int:
    for i, x in enumerate(row):
        if x:
            return i
    raise ValueError("zero row has no pivot")


def rational_rank(rows: Sequence[IntVector]) -> int:
    """Rank over Q of a list of integer vectors."""
    reduced: list[tuple[tuple[int, ...], int]] = []
    for row in rows:
        red = reduce_against(row, reduced)
        if red is not None:
            reduced.append((red, pivot_index(red)))
    return len(reduced)


def smith_diagonal(rows: Sequence[IntVector]) -> list[int]:
    """Nonzero diagonal of the Smith normal form of an integer matrix.

    Returns the elementary divisors d_1 | d_2 | ... (positive, possibly
    fewer than min(m, n) when the matrix is rank deficient).
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    divisors: list[int] = []
    t = 0
    while t < m and t < n:
        # Locate the entry of smallest nonzero magnitude in the submatrix.
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        a[t], a[bi] = a[bi], a[t]
        for row in a:
            row[t], row[bj] = row[bj], row[t]

        restart = False
        # Clear the pivot column; a nonzero remainder becomes the new,
        # strictly smaller pivot, so this terminates.
        for i in range(t + 1, m):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    a[t], a[i] = a[i], a[t]
                    restart = True
                    break
        if restart:
            continue
        # Clear the pivot row the same way.
        for j in range(t + 1, n):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                    restart = True
                    break
        if restart:
            continue
        # Divisibility fix-up: the pivot must divide the whole submatrix.
        p = a[t][t]
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % p:
                    a[t] = [x + y for x, y in zip(a[t], a[i])]
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        divisors.append(abs(p))
        t += 1
    return divisors


def is_primitive_system(rows: Sequence[IntVector]) -> bool:
    """True iff the vectors extend to a basis of Z^n.

    Equivalent to the Smith normal form having exactly len(rows) divisors,
    all equal to 1 (which also forces full rank).
    """
    rows = list(rows)
    if not rows:
        return True
    divisors = smith_diagonal(rows)
    return len(divisors) == len(rows) and all(d == 1 for d in divisors)
