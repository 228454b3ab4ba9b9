"""Fraction-free exact linear algebra over Q(i).

Rows are lists of GaussianRational.  Elimination clears denominators per
row and then runs Bareiss two-term updates, so all intermediates stay
Gaussian integers and every division is exact.  Pivoting is
deterministic: columns are scanned left to right and the first row with
a nonzero entry wins, which keeps kernel bases and solved witnesses
reproducible.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .polyalg import GaussianRational, QI_ONE, QI_ZERO

Row = List[GaussianRational]


def _clear_denominators(row: Sequence[GaussianRational]) -> Row:
    lcm = 1
    for c in row:
        lcm = lcm * c.re.denominator // _gcd(lcm, c.re.denominator)
        lcm = lcm * c.im.denominator // _gcd(lcm, c.im.denominator)
    if lcm == 1:
        return list(row)
    return [c * lcm for c in row]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a if a else 1


def echelon(rows: Sequence[Sequence[GaussianRational]]) -> Tuple[List[Row], List[int]]:
    """Fraction-free row echelon form; returns (rows, pivot column indices)."""
    m = [_clear_denominators(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    prev = QI_ONE
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        if pivot_row != r:
            m[r], m[pivot_row] = m[pivot_row], m[r]
        pivot = m[r][c]
        for i in range(r + 1, len(m)):
            factor = m[i][c]
            for j in range(c, ncols):
                m[i][j] = (pivot * m[i][j] - factor * m[r][j]) / prev
        prev = pivot
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Sequence[Sequence[GaussianRational]]) -> int:
    _, pivots = echelon(rows)
    return len(pivots)


def rref(rows: Sequence[Sequence[GaussianRational]]) -> Tuple[List[Row], List[int]]:
    """Reduced row echelon form (unit pivots, zeros above and below)."""
    m, pivots = echelon(rows)
    m = [row for row in m[: len(pivots)]]
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        pivot = m[r][c]
        m[r] = [x / pivot for x in m[r]]
        for i in range(r):
            factor = m[i][c]
            if factor:
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
    return m, pivots


def kernel(rows: Sequence[Sequence[GaussianRational]], ncols: int) -> List[Row]:
    """Basis of {x : rows @ x = 0}; one vector per free column, with a
    unit entry in that column."""
    if not rows:
        return [[QI_ONE if j == k else QI_ZERO for j in range(ncols)] for k in range(ncols)]
    m, pivots = rref(rows)
    pivot_set = set(pivots)
    basis: List[Row] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [QI_ZERO] * ncols
        vec[free] = QI_ONE
        for r, c in enumerate(pivots):
            vec[c] = -m[r][free]
        basis.append(vec)
    return basis


def solve(rows: Sequence[Sequence[GaussianRational]], rhs: Sequence[GaussianRational]) -> Optional[Row]:
    """One exact solution of rows @ x = rhs, or None if inconsistent.

    Free variables are set to zero, so the solution is deterministic.
    """
    if not rows:
        return None if any(rhs) else []
    ncols = len(rows[0])
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, pivots = rref(augmented)
    for r in range(len(pivots)):
        if pivots[r] == ncols:  # pivot in the rhs column
            return None
    x = [QI_ZERO] * ncols
    for r, c in enumerate(pivots):
        x[c] = m[r][ncols]
    return x


def in_span(rows: Sequence[Sequence[GaussianRational]], vec: Sequence[GaussianRational]) -> bool:
    if not any(vec):
        return True
    if not rows:
        return False
    base = rank(rows)
    return rank(list(rows) + [list(vec)]) == base


class Span:
    """A subspace given by spanning vectors, echeloned once so that many
    membership queries stay cheap."""

    def __init__(self, vectors: Sequence[Sequence[GaussianRational]]):
        if vectors:
            self.rows, self.pivots = rref(vectors)
        else:
            self.rows, self.pivots = [], []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def contains(self, vec: Sequence[GaussianRational]) -> bool:
        residual = list(vec)
        for row, c in zip(self.rows, self.pivots):
            factor = residual[c]
            if factor:
                residual = [a - factor * b for a, b in zip(residual, row)]
        return not any(residual)
