"""
Rerouting counts of ``l x l`` three-slope square patches via the
Lindström-Gessel-Viennot lemma.

The reroutings of such a patch correspond to families of ``2l - 1``
vertex-disjoint lattice paths, so their number is the determinant of a
banded binomial matrix.  Everything is exact integer arithmetic; the
determinant uses fraction-free (Bareiss) elimination.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .bipermutation import format_decimal, log2_floor

try:
    from gmpy2 import divexact as _divexact
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int

    def _divexact(a, b):
        return a // b

__all__ = [
    "LgvMatrix",
    "SingularMatrixError",
    "binomial",
    "lgv_entry",
    "lgv_matrix",
    "determinant",
    "lgv_count",
    "LgvRow",
    "lgv_table",
    "format_lgv_table",
]


class SingularMatrixError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LgvMatrix:
    side: int
    rows: tuple

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def binomial(n: int, k: int) -> int:
    """``C(n, k)``, and 0 whenever ``k < 0``, ``k > n`` or ``n < 0``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def lgv_entry(side: int, i: int, j: int) -> int:
    """Path count between start ``i`` and end ``j`` (1-based)."""
    top = 2 * side - abs(side - i) - abs(side - j)
    twice = top + 3 * abs(i - j)
    if twice % 2:
        raise AssertionError(f"odd lower index at side={side}, i={i}, j={j}")
    return binomial(top, twice // 2)


def lgv_matrix(side: int) -> LgvMatrix:
    if side < 1:
        raise ValueError("side length must be >= 1")
    d = 2 * side - 1
    rows = tuple(
        tuple(lgv_entry(side, i, j) for j in range(1, d + 1)) for i in range(1, d + 1)
    )
    return LgvMatrix(side, rows)


def determinant(matrix, allow_singular: bool = False) -> int:
    """Exact determinant of a square integer matrix by Bareiss elimination.

    Every intermediate entry is an integer; divisions are exact.  A zero
    pivot is replaced by swapping in a lower row.  Singular input raises
    :class:`SingularMatrixError` unless ``allow_singular`` is set, in which
    case 0 is returned.

    Rows are only touched where they are nonzero, and the Bareiss rescaling
    of rows not involved in a pivot step is applied lazily, so banded input
    costs roughly ``n * bandwidth**2`` big-integer operations.
    """
    rows = matrix.rows if isinstance(matrix, LgvMatrix) else matrix
    a = [[_mpz(x) for x in r] for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    if all(a[i][j] == a[j][i] for i in range(n) for j in range(i)):
        det = _symmetric_bareiss(a)
        if det is not None:
            if det == 0 and not allow_singular:
                raise SingularMatrixError("matrix is singular")
            return det
        a = [[_mpz(x) for x in r] for r in rows]
    # end[i]: last possibly-nonzero column of row i
    end = []
    for r in a:
        e = n - 1
        while e > 0 and not r[e]:
            e -= 1
        end.append(e)
    # row i holds values current as of the step whose pivot was pivots[mark[i]]
    pivots = [_mpz(1)]
    mark = [0] * n

    def refresh(i):
        last = len(pivots) - 1
        if mark[i] != last:
            num, den = pivots[last], pivots[mark[i]]
            r = a[i]
            for j in range(last, end[i] + 1):
                if r[j]:
                    r[j] = _divexact(r[j] * num, den)
            mark[i] = last

    sign = 1
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    refresh(i)
                    refresh(k)
                    a[k], a[i] = a[i], a[k]
                    end[k], end[i] = end[i], end[k]
                    sign = -sign
                    break
            else:
                if allow_singular:
                    return 0
                raise SingularMatrixError(f"matrix is singular (column {k})")
        refresh(k)
        prev = pivots[-1]
        row_k = a[k]
        pivot = row_k[k]
        for i in range(k + 1, n):
            row_i = a[i]
            if not row_i[k]:
                continue
            refresh(i)
            f = row_i[k]
            stop = max(end[i], end[k]) + 1
            for j in range(k + 1, stop):
                row_i[j] = _divexact(pivot * row_i[j] - f * row_k[j], prev)
            row_i[k] = 0
            end[i] = stop - 1
            mark[i] = len(pivots)
        pivots.append(pivot)
    refresh(n - 1)
    det = int(sign * a[n - 1][n - 1])
    if det == 0 and not allow_singular:
        raise SingularMatrixError("matrix is singular")
    return det


def _symmetric_bareiss(a: list) -> int | None:
    """Bareiss on the upper triangle of a symmetric matrix.

    Intermediate Bareiss entries are bordered minors, which stay symmetric,
    so only ``j >= i`` is updated.  Returns None on a zero pivot; the caller
    then falls back to the pivoting routine.
    """
    n = len(a)
    end = []
    for i, r in enumerate(a):
        e = n - 1
        while e > i and not r[e]:
            e -= 1
        end.append(e)
    pivots = [_mpz(1)]
    mark = [0] * n

    def refresh(i, last):
        if mark[i] != last:
            num, den = pivots[last], pivots[mark[i]]
            r = a[i]
            for j in range(i, end[i] + 1):
                if r[j]:
                    r[j] = _divexact(r[j] * num, den)
            mark[i] = last

    for k in range(n - 1):
        refresh(k, k)
        row_k = a[k]
        pivot = row_k[k]
        if not pivot:
            return None
        prev = pivots[-1]
        for i in range(k + 1, end[k] + 1):
            f = row_k[i]
            if not f:
                continue
            refresh(i, k)
            row_i = a[i]
            stop = max(end[i], end[k]) + 1
            for j in range(i, stop):
                row_i[j] = _divexact(pivot * row_i[j] - f * row_k[j], prev)
            end[i] = stop - 1
            mark[i] = k + 1
        pivots.append(pivot)
    refresh(n - 1, n - 1)
    return int(a[n - 1][n - 1])


def lgv_count(side: int) -> int:
    """Number of reroutings of the ``side x side`` three-slope square patch."""
    det = determinant(lgv_matrix(side))
    if det <= 0:
        raise ArithmeticError(f"non-positive LGV determinant for side {side}")
    return det


@dataclass(frozen=True)
class LgvRow:
    side: int
    count: int
    log2: Fraction
    ratio: Fraction
    seconds: float


def lgv_table(sides, log2_places: int = 3, ratio_places: int = 4) -> list[LgvRow]:
    """Rows shaped like the summary of LGV computations: log2 and log2/l^2, rounded down."""
    out = []
    for side in sides:
        t0 = time.perf_counter()
        count = lgv_count(side)
        elapsed = time.perf_counter() - t0
        lg = log2_floor(count, log2_places)
        ratio = log2_floor(count, ratio_places + 4) / (side * side)
        ratio = Fraction(math.floor(ratio * 10**ratio_places), 10**ratio_places)
        out.append(LgvRow(side, count, lg, ratio, elapsed))
    return out


def format_lgv_table(rows: list[LgvRow], log2_places: int = 3, ratio_places: int = 4) -> str:
    lines = [f"{'l':>5}  {'log2(# reroutings)':>20}  {'ratio':>8}  {'time':>10}"]
    for r in rows:
        lines.append(
            f"{r.side:>5}  {format_decimal(r.log2, log2_places):>20}  "
            f"{format_decimal(r.ratio, ratio_places):>8}  {r.seconds:>9.2f}s"
        )
    return "\n".join(lines)
