from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from src.common.errors import (
    FriezeError, NonUnimodularError, PathError, PreconditionError, RangeError, ShapeError, TilingError,
    TransitionShapeError,
)
from src.common.linalg import IntMatrix, from_columns, identity, mul, unimodular_inverse
from src.common.paths import (
    Closure, JMatrix, Path, TransitionSequence, corner, path_from_sequence,
)
from src.common.pluecker import check_consecutive, cyclic_pluecker, interval
from src.common.tilings import Tiling, phi, tiling_from_grid, validate_window, window
from src.utils.log import get_logger

log = get_logger("friezes")

Quiddity = Tuple[int, ...]


@dataclass(frozen=True)
class Frieze:
    """
    SL_k-frieze given by its nontrivial rows; frieze row k+rho is rows[rho-1].
    Type (k, n): n-periodic rows of length n, bordered by k-1 zero rows and
    a row of ones on each side.  Without n the frieze is infinite downwards
    and rows hold positions base, base+1, ... (periodic when period is set).
    Without a period, base must be at most 2-k and at least k rows are
    needed for frieze_to_tiling to reach the central block.
    """
    k: int
    rows: Tuple[Tuple[int, ...], ...]
    n: Optional[int] = None
    base: int = 1
    period: Optional[int] = None

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.k < 2:
            raise FriezeError(f"friezes need k >= 2, got {self.k}")
        if self.n is not None:
            if self.n < self.k + 2:
                raise FriezeError(f"type ({self.k},{self.n}) has no nontrivial rows")
            if len(rows) != self.n - self.k - 1:
                raise FriezeError(f"type ({self.k},{self.n}) needs {self.n - self.k - 1} rows, got {len(rows)}")
            for idx, r in enumerate(rows, start=1):
                if len(r) != self.n:
                    raise FriezeError(f"row {idx} has {len(r)} entries, expected one period of {self.n}")
            if self.base != 1 or self.period is not None:
                raise FriezeError("friezes of type (k,n) are stored from position 1 without a separate period")
            return
        if not rows:
            raise FriezeError("infinite frieze without rows")
        length = len(rows[0])
        if any(len(r) != length for r in rows):
            raise FriezeError("rows of an infinite frieze must cover the same positions")
        if self.period is not None and length != self.period:
            raise FriezeError(f"periodic rows store {length} positions for period {self.period}")

    @property
    def width(self) -> Union[int, str]:
        return self.n - self.k - 1 if self.n is not None else "infinite"

    @property
    def is_finite(self) -> bool:
        return self.n is not None

    def positions(self) -> range:
        if self.n is not None:
            return range(1, self.n + 1)
        return range(self.base, self.base + len(self.rows[0]))

    def entry(self, r: int, m: int) -> int:
        """Entry at position r in frieze row m, borders included."""
        k = self.k
        if m < 1:
            raise RangeError(f"frieze row {m}")
        if m < k:
            return 0
        if m == k:
            return 1
        if self.n is not None:
            if m == self.n:
                return 1
            if m > self.n:
                return 0
            return self.rows[m - k - 1][(r - 1) % self.n]
        if m - k > len(self.rows):
            raise RangeError(f"frieze row {m} below the {len(self.rows)} stored rows")
        if self.period is not None:
            return self.rows[m - k - 1][(r - self.base) % self.period]
        offset = r - self.base
        if not 0 <= offset < len(self.rows[0]):
            raise RangeError(f"position {r} outside {self.base}..{self.base + len(self.rows[0]) - 1}")
        return self.rows[m - k - 1][offset]

    def tiling_entry(self, i: int, j: int) -> int:
        """m_{i,j} of the associated tiling; skew extension for type (k,n)."""
        if self.n is None:
            if j < i:
                raise RangeError("an infinite frieze only fixes the right half of its tiling")
            return self.entry(i, j - i + 1)
        q, d0 = divmod(j - i, self.n)
        return corner(self.k) ** (q % 2) * self.entry(i, d0 + 1)

    def rotated(self, shift: int) -> "Frieze":
        """Type (k,n) frieze whose entry at position r is this one's at r + shift."""
        if self.n is None:
            raise FriezeError("only friezes of type (k,n) rotate")
        s = shift % self.n
        return Frieze(self.k, tuple(r[s:] + r[:s] for r in self.rows), self.n)

    @classmethod
    def from_tiling(cls, t: Tiling, n: int) -> "Frieze":
        """Reads one period of the falling diagonals of t."""
        k = t.k
        grid = window(t, 1, 1, n, 2 * n)
        rows = tuple(tuple(grid[r - 1, r + m - 2] for r in range(1, n + 1)) for m in range(k + 1, n))
        return cls(k, rows, n)


# ---- frieze -> tiling ----
def _grid(f: Frieze, lo: int, size: int) -> IntMatrix:
    return IntMatrix.of([[f.tiling_entry(i, j) for j in range(lo, lo + size)] for i in range(lo, lo + size)])


def _infinite_transitions(f: Frieze) -> TransitionSequence:
    """Horizontal transitions from right-half blocks M_{j-k+1,j} and M_{j-k+1,j+1}."""
    k = f.k
    if len(f.rows) < k:
        raise FriezeError(f"an infinite frieze needs at least {k} nontrivial rows, got {len(f.rows)}")

    def block(i: int, j: int) -> IntMatrix:
        return IntMatrix.of([[f.tiling_entry(a, b) for b in range(j, j + k)] for a in range(i, i + k)])

    if f.period is not None:
        js = range(1, f.period + 1)
    else:
        js = range(f.base + k - 1, f.base + len(f.rows[0]))
    coeffs = []
    try:
        for j in js:
            h = mul(unimodular_inverse(block(j - k + 1, j)), block(j - k + 1, j + 1))
            coeffs.append(JMatrix.from_matrix(h).coeffs)
    except (NonUnimodularError, TransitionShapeError) as exc:
        raise FriezeError(f"frieze blocks do not define transitions: {exc}") from exc
    return TransitionSequence(k, js[0], tuple(coeffs), f.period)


def frieze_to_tiling(f: Frieze) -> Tiling:
    k = f.k
    if f.n is not None:
        n = f.n
        grid = _grid(f, 1, n + k)
        report = validate_window(k, grid)
        if not report.ok:
            raise FriezeError(f"not an SL_{k}-frieze: {report.violations[0]}")
        try:
            return tiling_from_grid(k, grid, 1, 1, row_period=n, col_period=n)
        except TilingError as exc:
            raise FriezeError(str(exc)) from exc
    seq = _infinite_transitions(f)
    anchor = seq.base_index
    gamma = path_from_sequence(identity(k), seq, anchor=anchor)
    if gamma.is_finite and anchor > 1:
        raise RangeError(f"frieze positions must start at or before {2 - k} to reach the central block")
    return phi_iota(gamma)


def is_valid_frieze(f: Frieze) -> bool:
    try:
        frieze_to_tiling(f)
    except (FriezeError, RangeError):
        return False
    return True


# ---- Pluecker friezes ----
def plucker_frieze_eval(a: IntMatrix) -> Frieze:
    k, n = a.shape
    if n < k + 2:
        raise ShapeError(f"{k}x{n} matrix gives no nontrivial frieze rows")
    check_consecutive(a)
    rows = tuple(
        tuple(cyclic_pluecker(a, interval(r, k - 1) + (m + r - 1,)) for r in range(1, n + 1))
        for m in range(k + 1, n)
    )
    return Frieze(k, rows, n)


def phi_a(a: IntMatrix) -> Path:
    """Skew-periodic extension of the columns of a, starting at index 1."""
    check_consecutive(a)
    try:
        return Path(a.nrows, 1, tuple(a.columns()), Closure.skew_periodic(a.ncols))
    except PathError as exc:
        raise PreconditionError(str(exc)) from exc


def phi_iota(gamma: Path) -> Tiling:
    return phi(gamma, gamma)


def tiling_is_from_frieze(t: Tiling, size: Optional[int] = None) -> bool:
    """Zero diagonals m_{i,j}=0 for j in [i]^(k-1) and ones at j=i+k-1, on rows 1..size."""
    k = t.k
    size = size or 3 * k
    grid = window(t, 1, 1, size, size + k)
    for r in range(size):
        if any(grid[r, r + d] != 0 for d in range(k - 1)) or grid[r, r + k - 1] != 1:
            return False
    return True


def frieze_from_path(gamma: Path) -> Frieze:
    if gamma.closure.period is None:
        raise PreconditionError("a frieze of type (k,n) needs a closed path")
    n = gamma.closure.period
    return plucker_frieze_eval(from_columns([gamma.column(i) for i in range(1, n + 1)]))


def matrix_of_frieze(f: Frieze) -> IntMatrix:
    """k x n matrix A with first k columns the identity and plucker_frieze_eval(A) = f."""
    if f.n is None:
        raise FriezeError("only friezes of type (k,n) come from a matrix")
    t = frieze_to_tiling(f)
    gamma = path_from_sequence(identity(f.k), t.col_transitions, anchor=1)
    return from_columns([gamma.column(i) for i in range(1, f.n + 1)])


# ---- quiddity ----
def quiddity_vector(j: JMatrix) -> Quiddity:
    k = j.k
    return tuple((-1) ** (k - q) * j.coeff(q) for q in range(2, k + 1))


def coeffs_of_quiddity(k: int, q: Sequence[int]) -> Tuple[int, ...]:
    """Inverse of quiddity_vector."""
    return tuple((-1) ** (k - x) * q[x - 2] for x in range(2, k + 1))


def quiddity_sequence(f: Frieze) -> List[Quiddity]:
    seq = frieze_to_tiling(f).col_transitions
    if f.n is not None or f.period is not None:
        idx = range(1, (f.n or f.period) + 1)
    else:
        lo, hi = seq.index_range()
        idx = range(lo, hi + 1)
    return [quiddity_vector(seq.at(i)) for i in idx]


def is_positive_frieze(f: Frieze) -> bool:
    return all(x > 0 for row in f.rows for x in row)


def is_positive_quiddity(q: Sequence[Sequence[int]]) -> bool:
    return all(x > 0 for v in q for x in v)

