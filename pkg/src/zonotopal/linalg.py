"""Exact linear algebra over the rationals.

Vectors are tuples of :class:`fractions.Fraction` and matrices are sequences
of such rows.  Every operation is exact; there is no floating point anywhere
in this package.  ``Fraction`` keeps numerator and denominator gcd-reduced
with a positive denominator, so results are canonical by construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NoSolutionError, UnderdeterminedError

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def scalar(value) -> Fraction:
    """Coerce ``value`` to an exact rational, rejecting floats outright."""
    if isinstance(value, float):
        raise TypeError(
            f"floating point value {value!r} is not exact; use int, 'p/q' or Fraction"
        )
    return Fraction(value)


def vector(entries: Iterable) -> Vector:
    return tuple(scalar(e) for e in entries)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(vector(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def zero_vector(width: int) -> Vector:
    return (Fraction(0),) * width


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, tuple[int, ...], int]:
    """Reduced row echelon form.

    Returns ``(R, pivot_columns, rank)``.  ``R`` has the same shape as the
    input, pivots are 1 and are the only nonzero entries in their columns,
    and the row space is preserved.
    """
    work = [list(vector(r)) for r in rows]
    nrows = len(work)
    ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        lead = work[r][c]
        if lead != 1:
            work[r] = [e / lead for e in work[r]]
        for i in range(nrows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in work), tuple(pivots), len(pivots)


def rank(rows: Sequence[Sequence]) -> int:
    reducer = RowReducer(len(rows[0]) if rows else 0)
    for row in rows:
        reducer.add(row)
    return reducer.rank


def solve(rows: Sequence[Sequence], rhs: Iterable) -> Vector:
    """Solve ``A x = b`` exactly, demanding a unique solution.

    ``rows`` are the rows of ``A``.  Raises :class:`NoSolutionError` when the
    system is inconsistent and :class:`UnderdeterminedError` when the solution
    is not unique.
    """
    a = matrix(rows)
    b = vector(rhs)
    if len(a) != len(b):
        raise ValueError("row count does not match right-hand side")
    ncols = len(a[0]) if a else 0
    augmented = [list(row) + [bi] for row, bi in zip(a, b)]
    reduced, pivots, rk = rref(augmented)
    if ncols in pivots:
        raise NoSolutionError("no solution: inconsistent linear system")
    if rk < ncols:
        raise UnderdeterminedError("underdetermined linear system")
    solution = [Fraction(0)] * ncols
    for row, col in zip(reduced, pivots):
        solution[col] = row[-1]
    return tuple(solution)


class RowReducer:
    """Incremental echelon form used for rank and span-membership tests.

    Rows are added one at a time; each kept row is normalized to a leading 1
    and reduced against the earlier pivots, which is enough for exact rank
    and residual computations.
    """

    def __init__(self, width: int):
        self.width = width
        self._rows: dict[int, list[Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self._rows))

    def residual(self, row: Iterable) -> list[Fraction]:
        work = [scalar(e) for e in row]
        if len(work) != self.width:
            raise ValueError(f"expected width {self.width}, got {len(work)}")
        for col in sorted(self._rows):
            coeff = work[col]
            if coeff != 0:
                pivot_row = self._rows[col]
                work = [a - coeff * b for a, b in zip(work, pivot_row)]
        return work

    def contains(self, row: Iterable) -> bool:
        return all(e == 0 for e in self.residual(row))

    def add(self, row: Iterable) -> int | None:
        """Add a row; return its pivot column if it enlarged the span."""
        work = self.residual(row)
        lead = next((i for i, e in enumerate(work) if e != 0), None)
        if lead is None:
            return None
        coeff = work[lead]
        if coeff != 1:
            work = [e / coeff for e in work]
        self._rows[lead] = work
        return lead


def in_span(candidate: Iterable, rows: Sequence[Sequence]) -> bool:
    """Exact test whether ``candidate`` lies in the row span of ``rows``."""
    cand = vector(candidate)
    reducer = RowReducer(len(cand))
    for row in rows:
        reducer.add(row)
    return reducer.contains(cand)
