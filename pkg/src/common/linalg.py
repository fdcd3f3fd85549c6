from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, List, Sequence, Tuple

from src.common.errors import NonUnimodularError, ShapeError

Row = Tuple[int, ...]

# Below this size Laplace expansion is cheaper than elimination.
COFACTOR_LIMIT = 4


@dataclass(frozen=True)
class IntMatrix:
    """
    Dense matrix of Python ints, stored row-major as nested tuples.
    Immutable; every operation returns a new matrix.
    """
    rows: Tuple[Row, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if not rows or not rows[0]:
            raise ShapeError("matrix needs at least one row and one column")
        width = len(rows[0])
        for idx, r in enumerate(rows):
            if len(r) != width:
                raise ShapeError(f"row {idx} has {len(r)} entries, expected {width}")
        object.__setattr__(self, "rows", rows)

    # ---- constructors ----
    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return identity(n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "IntMatrix":
        return from_columns(columns)

    # ---- shape ----
    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, pos: Tuple[int, int]) -> int:
        r, c = pos
        return self.rows[r][c]

    def column(self, c: int) -> Row:
        return tuple(r[c] for r in self.rows)

    def columns(self) -> List[Row]:
        return [self.column(c) for c in range(self.ncols)]

    # ---- algebra ----
    @property
    def T(self) -> "IntMatrix":
        return transpose(self)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return mul(self, other)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-x for x in r) for r in self.rows))

    def scaled(self, s: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(s * x for x in r) for r in self.rows))

    def apply(self, v: Sequence[int]) -> Row:
        if len(v) != self.ncols:
            raise ShapeError(f"vector of length {len(v)} against {self.nrows}x{self.ncols} matrix")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def det(self) -> int:
        return det(self)

    def inverse(self) -> "IntMatrix":
        return unimodular_inverse(self)

    def to_lists(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        width = max(len(str(x)) for r in self.rows for x in r)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self.rows)


def identity(n: int) -> IntMatrix:
    if n < 1:
        raise ShapeError(f"identity of size {n}")
    return IntMatrix(tuple(tuple(1 if r == c else 0 for c in range(n)) for r in range(n)))


def from_columns(columns: Sequence[Sequence[int]]) -> IntMatrix:
    if not columns:
        raise ShapeError("no columns given")
    height = len(columns[0])
    if any(len(c) != height for c in columns):
        raise ShapeError("columns of unequal length")
    return IntMatrix(tuple(tuple(col[r] for col in columns) for r in range(height)))


def transpose(m: IntMatrix) -> IntMatrix:
    return IntMatrix(tuple(zip(*m.rows)))


def mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    if a.ncols != b.nrows:
        raise ShapeError(f"cannot multiply {a.nrows}x{a.ncols} by {b.nrows}x{b.ncols}")
    cols = list(zip(*b.rows))
    return IntMatrix(tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in a.rows))


def product(mats: Iterable[IntMatrix], n: int) -> IntMatrix:
    """Left-to-right product; the empty product is the n x n identity."""
    return reduce(mul, mats, identity(n))


def submatrix(m: IntMatrix, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
    """Rows and columns are 0-based index sequences (ranges included); order is kept."""
    rows, cols = list(rows), list(cols)
    if not rows or not cols:
        raise ShapeError("empty submatrix")
    for r in rows:
        if not 0 <= r < m.nrows:
            raise ShapeError(f"row index {r} outside 0..{m.nrows - 1}")
    for c in cols:
        if not 0 <= c < m.ncols:
            raise ShapeError(f"column index {c} outside 0..{m.ncols - 1}")
    return IntMatrix(tuple(tuple(m.rows[r][c] for c in cols) for r in rows))


def cofactor_det(m: IntMatrix) -> int:
    if not m.is_square:
        raise ShapeError(f"determinant of non-square {m.nrows}x{m.ncols} matrix")
    return _laplace([list(r) for r in m.rows])


def _laplace(a: List[List[int]]) -> int:
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = 0
    for c, pivot in enumerate(a[0]):
        if pivot == 0:
            continue
        minor = [row[:c] + row[c + 1:] for row in a[1:]]
        total += (-1) ** c * pivot * _laplace(minor)
    return total


def bareiss_det(m: IntMatrix) -> int:
    """Fraction-free elimination; every division is exact."""
    if not m.is_square:
        raise ShapeError(f"determinant of non-square {m.nrows}x{m.ncols} matrix")
    a = [list(r) for r in m.rows]
    n = len(a)
    sign, prev = 1, 1
    for i in range(n - 1):
        if a[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if a[r][i] != 0), None)
            if swap is None:
                return 0
            a[i], a[swap] = a[swap], a[i]
            sign = -sign
        piv = a[i][i]
        for r in range(i + 1, n):
            lead = a[r][i]
            for c in range(i + 1, n):
                a[r][c] = (a[r][c] * piv - lead * a[i][c]) // prev
            a[r][i] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def det(m: IntMatrix) -> int:
    if not m.is_square:
        raise ShapeError(f"determinant of non-square {m.nrows}x{m.ncols} matrix")
    if m.nrows <= COFACTOR_LIMIT:
        return cofactor_det(m)
    return bareiss_det(m)


def adjugate(m: IntMatrix) -> IntMatrix:
    if not m.is_square:
        raise ShapeError(f"adjugate of non-square {m.nrows}x{m.ncols} matrix")
    n = m.nrows
    if n == 1:
        return IntMatrix(((1,),))
    idx = range(n)
    cof = [[(-1) ** (r + c) * det(submatrix(m, [x for x in idx if x != r], [y for y in idx if y != c]))
            for c in idx] for r in idx]
    return transpose(IntMatrix.of(cof))


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    d = det(m)
    if d not in (1, -1):
        raise NonUnimodularError(f"determinant {d} is not a unit")
    return adjugate(m).scaled(d)


def require_sl(m: IntMatrix, what: str = "matrix") -> None:
    """Raises unless m is square with determinant exactly 1."""
    if not m.is_square:
        raise ShapeError(f"{what} is {m.nrows}x{m.ncols}, expected square")
    d = det(m)
    if d != 1:
        raise NonUnimodularError(f"{what} has determinant {d}, expected 1")


def shear(k: int, i: int, j: int, lam: int) -> IntMatrix:
    """Identity plus lam at 1-based position (i, j)."""
    if i == j or not (1 <= i <= k and 1 <= j <= k):
        raise ShapeError(f"shear position ({i},{j}) invalid for k={k}")
    rows = [[1 if r == c else 0 for c in range(k)] for r in range(k)]
    rows[i - 1][j - 1] = lam
    return IntMatrix.of(rows)
