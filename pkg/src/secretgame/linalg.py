"""Small dense linear systems, solved exactly over Fractions.

Floats go through the same elimination with partial pivoting and a pivot
threshold; this is only used for the inexact mode.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .numeric import FLOAT_MARGIN, all_exact


def solve_unique(A: Sequence[Sequence], b: Sequence):
    """Return the unique solution of ``A x = b`` or ``None``.

    ``A`` may be rectangular. ``None`` means the system is inconsistent or
    has infinitely many solutions.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    exact = all(all_exact(r) for r in A) and all_exact(b)
    zero = Fraction(0) if exact else 0.0
    rows = [[(Fraction(x) if exact else float(x)) for x in r] + [Fraction(y) if exact else float(y)]
            for r, y in zip(A, b)]

    def is_zero(x) -> bool:
        return x == 0 if exact else abs(x) <= FLOAT_MARGIN

    pivot_row = 0
    pivots = []
    for col in range(n):
        if pivot_row >= m:
            break
        if exact:
            sel = next((i for i in range(pivot_row, m) if rows[i][col] != 0), None)
        else:
            sel = max(range(pivot_row, m), key=lambda i: abs(rows[i][col]))
            if is_zero(rows[sel][col]):
                sel = None
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        piv = rows[pivot_row][col]
        rows[pivot_row] = [x / piv for x in rows[pivot_row]]
        for i in range(m):
            if i != pivot_row and not is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1

    # inconsistent: a zero row with non-zero rhs
    for i in range(pivot_row, m):
        if not is_zero(rows[i][n]):
            return None
    if len(pivots) < n:
        return None
    x = [zero] * n
    for i, col in enumerate(pivots):
        x[col] = rows[i][n]
    return x
