"""Exact rational arithmetic and fraction-free linear algebra.

``fractions.Fraction`` is the scalar type: it is immutable, hashable and kept
in lowest terms with a positive denominator after every operation, so
structural equality is value equality.  Vectors are plain tuples of
Fractions; matrices are :class:`RationalMatrix`.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
RationalVector = tuple  # tuple[Fraction, ...]

_TOKEN = re.compile(r"-?\d+(?:/\d+)?")

_OPS = {
    "+": operator.add,
    "-": operator.sub,
    "−": operator.sub,
    "*": operator.mul,
    "×": operator.mul,
    "/": operator.truediv,
    "÷": operator.truediv,
}


class SingularMatrixError(ArithmeticError):
    """Raised when a linear system has no unique solution."""


def parse_rational(token: str) -> Fraction:
    """Parse ``p/q`` or ``p`` (optional leading ``-``, no inner whitespace)."""
    if not _TOKEN.fullmatch(token):
        raise ValueError(f"invalid rational token: {token!r}")
    num, _, den = token.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator in token: {token!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rat_arith(a: Fraction, b: Fraction, op: str) -> Fraction:
    """Apply one of ``+ - * /`` exactly.  Division by zero raises ZeroDivisionError."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}") from None
    return fn(Fraction(a), Fraction(b))


def as_vector(values: Iterable) -> tuple:
    return tuple(Fraction(v) for v in values)


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class RationalMatrix:
    """Dense matrix of Fractions with fixed shape."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in r) for r in self.rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must be non-empty")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.rows)))

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(tuple(tuple(-v for v in r) for r in self.rows))

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.shape[1] != other.shape[0]:
                raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
            cols = [other.column(j) for j in range(other.shape[1])]
            return RationalMatrix(tuple(tuple(dot(r, c) for c in cols) for r in self.rows))
        vec = tuple(other)
        if len(vec) != self.shape[1]:
            raise ValueError(f"shape mismatch: {self.shape} @ vector of length {len(vec)}")
        return tuple(dot(r, vec) for r in self.rows)


def _integer_rows(M: RationalMatrix, extra: Sequence[Fraction] | None = None):
    """Scale each row (optionally augmented) to integers; return rows and scale factors."""
    rows, scales = [], []
    for i, r in enumerate(M.rows):
        full = list(r) + ([extra[i]] if extra is not None else [])
        d = lcm_of_denominators(full)
        rows.append([int(v * d) for v in full])
        scales.append(d)
    return rows, scales


def _bareiss(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], int, bool]:
    """In-place fraction-free elimination on the first ``ncols`` columns.

    Returns (rows, sign, full_rank).  Every division is exact.
    """
    n = len(rows)
    sign, prev = 1, 1
    for k in range(n):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return rows, sign, False
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            ri, rk = rows[i], rows[k]
            for j in range(k + 1, len(ri)):
                ri[j] = (ri[j] * pivot - rik * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return rows, sign, True


def determinant(M: RationalMatrix) -> Fraction:
    n, m = M.shape
    if n != m:
        raise ValueError(f"determinant of non-square {n}x{m} matrix")
    rows, scales = _integer_rows(M)
    rows, sign, full = _bareiss(rows, n)
    if not full:
        return Fraction(0)
    return Fraction(sign * rows[-1][-1], math.prod(scales))


def solve_linear_system(M: RationalMatrix, b: Sequence) -> tuple:
    """Exact solution of ``M x = b``; raises :class:`SingularMatrixError`."""
    n, m = M.shape
    if n != m:
        raise ValueError(f"solve needs a square matrix, got {n}x{m}")
    b = as_vector(b)
    if len(b) != n:
        raise ValueError(f"rhs length {len(b)} != {n}")
    rows, _ = _integer_rows(M, b)
    rows, _, full = _bareiss(rows, n)
    if not full:
        raise SingularMatrixError("matrix is singular")
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(rows[i][n]) - sum(rows[i][j] * x[j] for j in range(i + 1, n))
        x[i] = acc / rows[i][i]
    x = tuple(x)
    if M @ x != b:  # pragma: no cover - exact arithmetic cannot miss
        raise ArithmeticError("back-substitution check failed")
    return x


def inverse(M: RationalMatrix) -> RationalMatrix:
    n = M.shape[0]
    cols = [solve_linear_system(M, [int(i == k) for i in range(n)]) for k in range(n)]
    return RationalMatrix(tuple(zip(*cols)))
