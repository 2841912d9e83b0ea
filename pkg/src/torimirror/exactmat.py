"""Exact integer linear algebra: Smith normal form with unimodular certificates.

Everything here works on plain Python ints, so results are exact for any
entry size.  Matrices are represented as tuples of row tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

IntMatrix = tuple[tuple[int, ...], ...]


def as_int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Coerce a nested sequence into an immutable square integer matrix."""
    out = []
    for row in rows:
        conv = []
        for x in row:
            ix = int(x)
            if ix != x:
                raise ValueError(f"non-integer entry {x!r}")
            conv.append(ix)
        out.append(tuple(conv))
    n = len(out)
    if n == 0 or any(len(row) != n for row in out):
        raise ValueError("expected a non-empty square matrix")
    return tuple(out)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def transpose(a: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(col) for col in zip(*a))


def diag_matrix(d: Sequence[int]) -> IntMatrix:
    n = len(d)
    return tuple(tuple(d[i] if i == j else 0 for j in range(n)) for i in range(n))


def det(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    m = [list(row) for row in a]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SnfCertificate:
    """``left @ A @ right == diag(diag)`` with ``left``, ``right`` unimodular.

    The inverses of both unimodular factors are carried along so callers can
    move between lattice coordinates without a rational solve.
    """

    left: IntMatrix
    diag: tuple[int, ...]
    right: IntMatrix
    left_inv: IntMatrix
    right_inv: IntMatrix

    @property
    def s(self) -> int:
        """Number of nonzero elementary divisors."""
        return sum(1 for d in self.diag if d != 0)

    @property
    def divisors(self) -> tuple[int, ...]:
        return self.diag[: self.s]

    def diagonal(self) -> IntMatrix:
        return diag_matrix(self.diag)


def snf(a: Sequence[Sequence[int]]) -> SnfCertificate:
    """Smith normal form of a square integer matrix.

    The diagonal is nonnegative, forms a divisibility chain and has its zeros
    at the end.  Inputs that are already in this form come back with identity
    certificates.
    """
    a = as_int_matrix(a)
    n = len(a)
    w = [list(row) for row in a]
    left = [list(row) for row in identity(n)]
    left_inv = [list(row) for row in identity(n)]
    right = [list(row) for row in identity(n)]
    right_inv = [list(row) for row in identity(n)]

    # Row operations act on w and left; the matching column operation acts on
    # left_inv.  Column operations act on w and right, rows of right_inv.
    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        w[i], w[j] = w[j], w[i]
        left[i], left[j] = left[j], left[i]
        for row in left_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for row in w:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]
        right_inv[i], right_inv[j] = right_inv[j], right_inv[i]

    def add_row(dst: int, src: int, c: int) -> None:
        # row_dst += c * row_src
        if c == 0:
            return
        for k in range(n):
            w[dst][k] += c * w[src][k]
            left[dst][k] += c * left[src][k]
        for row in left_inv:
            row[src] -= c * row[dst]

    def add_col(dst: int, src: int, c: int) -> None:
        # col_dst += c * col_src
        if c == 0:
            return
        for row in w:
            row[dst] += c * row[src]
        for row in right:
            row[dst] += c * row[src]
        for k in range(n):
            right_inv[src][k] -= c * right_inv[dst][k]

    def negate_row(i: int) -> None:
        w[i] = [-x for x in w[i]]
        left[i] = [-x for x in left[i]]
        for row in left_inv:
            row[i] = -row[i]

    for t in range(n):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, n):
                    if w[i][j] != 0 and (best is None or abs(w[i][j]) < abs(w[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = w[t][t]
            for i in range(t + 1, n):
                add_row(i, t, -(w[i][t] // piv))
            for j in range(t + 1, n):
                add_col(j, t, -(w[t][j] // piv))
            if any(w[i][t] for i in range(t + 1, n)) or any(w[t][j] for j in range(t + 1, n)):
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, n) if w[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if w[t][t] < 0:
            negate_row(t)
        if all(w[i][j] == 0 for i in range(t, n) for j in range(t, n)):
            break

    return SnfCertificate(
        left=tuple(map(tuple, left)),
        diag=tuple(w[i][i] for i in range(n)),
        right=tuple(map(tuple, right)),
        left_inv=tuple(map(tuple, left_inv)),
        right_inv=tuple(map(tuple, right_inv)),
    )


@dataclass(frozen=True)
class ReducedFraction:
    numerator: int
    denominator: int

    def __post_init__(self) -> None:
        if self.denominator < 1:
            raise ValueError("denominator must be positive")
        if gcd(self.numerator, self.denominator) != 1:
            raise ValueError(f"{self.numerator}/{self.denominator} is not reduced")

    def __str__(self) -> str:
        return f"{self.numerator}/{self.denominator}"


def reduce_fraction(num: int, den: int) -> ReducedFraction:
    """Lowest-terms form of ``num/den`` with a positive denominator."""
    num, den = int(num), int(den)
    if den == 0:
        raise ZeroDivisionError("zero denominator")
    if den < 0:
        num, den = -num, -den
    g = gcd(num, den)
    return ReducedFraction(num // g, den // g)
