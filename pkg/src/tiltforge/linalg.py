"""Exact linear algebra over the rationals.

Dense row operations on lists of Fraction. Everything here is deterministic:
pivots are chosen left to right, rows are fully reduced, and bases come out
in a canonical (reduced row echelon) form so that two equal subspaces have
equal representations.
"""

from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

Row = List[Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(n: int) -> Row:
    return [ZERO] * n


def unit(n: int, j: int) -> Row:
    row = [ZERO] * n
    row[j] = ONE
    return row


def rref(rows: Iterable[Sequence[Fraction]]) -> Tuple[List[Row], List[int]]:
    """Reduced row echelon form.

    Returns (rows, pivot_columns); zero rows are dropped and each pivot
    entry is normalised to 1 and cleared from every other row.
    """
    mat = [list(r) for r in rows]
    pivots: List[int] = []
    out: List[Row] = []
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        src = None
        for i, row in enumerate(mat):
            if row[col] != 0:
                src = i
                break
        if src is None:
            continue
        row = mat.pop(src)
        inv = ONE / row[col]
        row = [x * inv for x in row]
        for other in mat:
            f = other[col]
            if f:
                for c in range(col, ncols):
                    other[c] -= f * row[c]
        for other in out:
            f = other[col]
            if f:
                for c in range(col, ncols):
                    other[c] -= f * row[c]
        out.append(row)
        pivots.append(col)
        if not mat:
            break
    return out, pivots


def reduce_row(row: Sequence[Fraction], basis: List[Row], pivots: List[int]) -> Row:
    """Reduce a vector against an rref basis; the result has no support on pivots."""
    vec = list(row)
    for brow, p in zip(basis, pivots):
        f = vec[p]
        if f:
            for c in range(len(vec)):
                vec[c] -= f * brow[c]
    return vec


def rank(rows: Iterable[Sequence[Fraction]]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Iterable[Sequence[Fraction]], ncols: int) -> List[Row]:
    """Canonical basis of {v : M v = 0}, M given by rows.

    Free variables are set to 1 one at a time, in increasing column order.
    """
    basis, pivots = rref(rows)
    pivset = set(pivots)
    out: List[Row] = []
    for free in range(ncols):
        if free in pivset:
            continue
        vec = zeros(ncols)
        vec[free] = ONE
        for brow, p in zip(basis, pivots):
            vec[p] = -brow[free]
        out.append(vec)
    return out


def span_equal(rows_a: Iterable[Sequence[Fraction]], rows_b: Iterable[Sequence[Fraction]]) -> bool:
    return rref(rows_a)[0] == rref(rows_b)[0]


def complement_pivots(sub_rref_pivots: List[int], ncols: int) -> List[int]:
    """Columns not used as pivots; unit vectors there complete the subspace to full space."""
    used = set(sub_rref_pivots)
    return [c for c in range(ncols) if c not in used]
