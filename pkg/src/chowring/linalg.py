"""Exact dense linear algebra over the rationals.

Everything here works with :class:`fractions.Fraction` entries; there is no
floating point anywhere. Elimination is done fraction-free over the integers
(rows are scaled by the lcm of their denominators first) and only the final
reduced echelon form is divided out, which keeps intermediate growth in check
for the sparse 0/1 matrices that multiplication operators usually produce.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

__all__ = [
    "Matrix",
    "as_fraction",
    "rank_and_kernel",
    "rref",
    "rank",
    "determinant",
    "solve",
]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction or int")
    return Fraction(value)


class Matrix:
    """Dense row-major matrix of Fractions.

    >>> Matrix.from_rows([[1, 2], [3, 4]]).shape
    (2, 2)
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable = ()):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        entries = tuple(as_fraction(e) for e in entries)
        if not entries and rows * cols:
            entries = (Fraction(0),) * (rows * cols)
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
            )
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, (e for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("ragged columns")
        return cls(rows, len(columns), (columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix(len(row_idx), len(col_idx), (self[i, j] for i in row_idx for j in col_idx))

    def apply(self, vector: Sequence) -> tuple[Fraction, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length does not match column count")
        vec = [as_fraction(v) for v in vector]
        return tuple(
            sum((a * b for a, b in zip(self.row(i), vec) if a and b), Fraction(0))
            for i in range(self.rows)
        )

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            cols = [other.column(j) for j in range(other.cols)]
            return Matrix(
                self.rows,
                other.cols,
                (
                    sum((a * b for a, b in zip(self.row(i), col) if a and b), Fraction(0))
                    for i in range(self.rows)
                    for col in cols
                ),
            )
        return self.apply(other)

    def __mul__(self, scalar) -> "Matrix":
        s = as_fraction(scalar)
        return Matrix(self.rows, self.cols, (s * e for e in self.entries))

    __rmul__ = __mul__

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other * -1

    def __eq__(self, other) -> bool:
        if isinstance(other, Matrix):
            return self.shape == other.shape and self.entries == other.entries
        if isinstance(other, (list, tuple)):
            try:
                return self == Matrix.from_rows(other)
            except (ValueError, TypeError):
                return False
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(e) for e in self.row(i)) + "]" for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def _integer_rows(m: Matrix) -> list[dict[int, int]]:
    """Scale each row to coprime integers, stored sparsely as {col: value}."""
    out = []
    for i in range(m.rows):
        row = m.row(i)
        den = 1
        for e in row:
            if e:
                den = lcm(den, e.denominator)
        out.append({j: int(e * den) for j, e in enumerate(row) if e})
    return out


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def _gauss_jordan(rows: list[dict[int, int]], ncols: int) -> tuple[list[dict[int, int]], list[int]]:
    """Integer Gauss-Jordan elimination; returns pivot rows and pivot columns."""
    rows = [r for r in rows if r]
    pivots: list[int] = []
    done: list[dict[int, int]] = []
    for c in range(ncols):
        pick = None
        for idx, r in enumerate(rows):
            if c in r:
                # fewest nonzeros keeps fill-in low; ties broken by position
                if pick is None or len(r) < len(rows[pick]):
                    pick = idx
        if pick is None:
            continue
        prow = rows.pop(pick)
        a = prow[c]
        new_rows = []
        for r in rows:
            b = r.get(c)
            if b is None:
                new_rows.append(r)
                continue
            nr = {k: a * v for k, v in r.items()}
            for k, v in prow.items():
                nv = nr.get(k, 0) - b * v
                if nv:
                    nr[k] = nv
                else:
                    nr.pop(k, None)
            if nr:
                new_rows.append(_primitive(nr))
        rows = new_rows
        for i, r in enumerate(done):
            b = r.get(c)
            if b is None:
                continue
            nr = {k: a * v for k, v in r.items()}
            for k, v in prow.items():
                nv = nr.get(k, 0) - b * v
                if nv:
                    nr[k] = nv
                else:
                    nr.pop(k, None)
            done[i] = _primitive(nr)
        done.append(prow)
        pivots.append(c)
        if not rows:
            break
    return done, pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns. Zero rows are dropped."""
    rows, pivots = _gauss_jordan(_integer_rows(m), m.cols)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    out = []
    for i in order:
        r, c = rows[i], pivots[i]
        a = r[c]
        out.append([Fraction(r.get(j, 0), a) for j in range(m.cols)])
    return Matrix(len(out), m.cols, (e for r in out for e in r)), sorted(pivots)


def rank_and_kernel(m: Matrix) -> tuple[int, list[tuple[Fraction, ...]]]:
    """Rank and a kernel basis of ``m``.

    Each kernel vector has a 1 in one free column, 0 in the other free
    columns, and pivot coordinates read off the reduced echelon form, so the
    basis is canonical.

    >>> rank_and_kernel(Matrix.from_rows([[1, 2], [2, 4]]))
    (1, [(Fraction(-2, 1), Fraction(1, 1))])
    """
    if m.rows == 0 or m.cols == 0:
        return 0, [tuple(Fraction(int(i == j)) for i in range(m.cols)) for j in range(m.cols)]
    red, pivots = rref(m)
    pivot_set = set(pivots)
    kernel = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i, f]
        kernel.append(tuple(v))
    return len(pivots), kernel


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_gauss_jordan(_integer_rows(m), m.cols)[1])


def determinant(m: Matrix) -> Fraction:
    """Exact determinant via Bareiss fraction-free elimination."""
    if m.rows != m.cols:
        raise ValueError(f"not square: {m.rows}x{m.cols}")
    n = m.rows
    if n == 0:
        return Fraction(1)
    scale = 1
    a = []
    for i in range(n):
        row = m.row(i)
        den = 1
        for e in row:
            if e:
                den = lcm(den, e.denominator)
        scale *= den
        a.append([int(e * den) for e in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1], scale)


def solve(m: Matrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of ``m x = b`` (free variables set to 0), or None."""
    if len(b) != m.rows:
        raise ValueError("right-hand side length does not match row count")
    aug = Matrix(m.rows, m.cols + 1, (e for i in range(m.rows) for e in (*m.row(i), b[i])))
    red, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for i, c in enumerate(pivots):
        x[c] = red[i, m.cols]
    return tuple(x)
