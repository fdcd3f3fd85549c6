from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from env_utils import get_env_int
from src.common.errors import NonUnimodularError, RangeError, ShapeError, TilingError, TransitionShapeError
from src.common.linalg import IntMatrix, det, from_columns, identity, mul, submatrix, transpose, unimodular_inverse
from src.common.paths import (
    JMatrix, Path, TransitionSequence, act, corner, path_from_sequence, step_left, step_right,
    tilde_sequence, untilde_sequence,
)
from src.utils.log import get_logger

log = get_logger("tilings")

Vector = Tuple[int, ...]


@dataclass(frozen=True)
class Tiling:
    """
    Tame SL_k-tiling presented by its block at rows 1..k, columns 1..k and
    its linearization data: col_transitions H_j with M_{i,j} H_j = M_{i,j+1}
    and row_transitions V_i with M_{i+1,j} = V_i^T M_{i,j}.
    """
    k: int
    central: IntMatrix
    row_transitions: TransitionSequence
    col_transitions: TransitionSequence

    def __post_init__(self) -> None:
        if self.central.shape != (self.k, self.k):
            raise ShapeError(f"central block is {self.central.nrows}x{self.central.ncols}, expected {self.k}x{self.k}")
        d = det(self.central)
        if d != 1:
            raise TilingError(f"central block has determinant {d}")
        for name, seq in (("row", self.row_transitions), ("column", self.col_transitions)):
            if seq.k != self.k:
                raise ShapeError(f"{name} transitions are for k={seq.k}, tiling has k={self.k}")

    def entry(self, i: int, j: int) -> int:
        return entry(self, i, j)

    def window(self, i: int, j: int, rows: int, cols: int) -> IntMatrix:
        return window(self, i, j, rows, cols)

    def block(self, i: int, j: int) -> IntMatrix:
        return window(self, i, j, self.k, self.k)


# ---- propagation ----
def sweep(first: Sequence[Vector], base: int, seq: TransitionSequence, lo: int, hi: int) -> List[Vector]:
    """
    Extend the k items at base..base+k-1 along the recurrence seq and
    return the items lo..hi.  Items are vectors combined linearly.
    """
    k = seq.k
    items: Dict[int, Vector] = {base + t: tuple(first[t]) for t in range(k)}
    i = base
    while i + k <= hi:
        items[i + k] = step_right([items[i + t] for t in range(k)], seq.at(i))
        i += 1
    i = base - 1
    while i >= lo:
        items[i] = step_left([items[i + 1 + t] for t in range(k)], seq.at(i))
        i -= 1
    return [items[x] for x in range(lo, hi + 1)]


@lru_cache(maxsize=512)
def strip_columns(t: Tiling, lo: int, hi: int) -> Tuple[Vector, ...]:
    """Columns (m_{1,j}, ..., m_{k,j}) for j in lo..hi."""
    return tuple(sweep(t.central.columns(), 1, t.col_transitions, lo, hi))


def window(t: Tiling, i: int, j: int, rows: int, cols: int, order: str = "rows") -> IntMatrix:
    """
    rows x cols block with top-left entry m_{i,j}.  order="rows" extends the
    horizontal strip first, order="columns" the vertical strip first.
    """
    if rows < 1 or cols < 1:
        raise ShapeError(f"window of size {rows}x{cols}")
    if order == "rows":
        strip = strip_columns(t, j, j + cols - 1)
        top = [tuple(col[r] for col in strip) for r in range(t.k)]
        return IntMatrix.of(sweep(top, 1, t.row_transitions, i, i + rows - 1))
    if order == "columns":
        left = sweep(t.central.rows, 1, t.row_transitions, i, i + rows - 1)
        first = [tuple(row[c] for row in left) for c in range(t.k)]
        return transpose(IntMatrix.of(sweep(first, 1, t.col_transitions, j, j + cols - 1)))
    raise ValueError(f"unknown propagation order {order!r}")


def entry(t: Tiling, i: int, j: int) -> int:
    return window(t, i, j, 1, 1)[0, 0]


# ---- phi ----
def row_functional(gamma: Path, i: int) -> Vector:
    """Coefficients of v -> det(gamma_i, ..., gamma_{i+k-2}, v)."""
    k = gamma.k
    cols = [gamma.column(i + t) for t in range(k - 1)]
    out = []
    for c in range(k):
        unit = tuple(1 if r == c else 0 for r in range(k))
        out.append(det(from_columns(cols + [unit])))
    return tuple(out)


def phi_entry(gamma: Path, delta: Path, i: int, j: int) -> int:
    return sum(a * b for a, b in zip(row_functional(gamma, i), delta.column(j)))


def phi_window(gamma: Path, delta: Path, rows: Iterable[int], cols: Iterable[int]) -> IntMatrix:
    """Entries det(gamma_i..gamma_{i+k-2}, delta_j), straight from the determinant formula."""
    if gamma.k != delta.k:
        raise ShapeError(f"paths in dimensions {gamma.k} and {delta.k}")
    cols = list(cols)
    dcols = [delta.column(j) for j in cols]
    out = []
    for i in rows:
        f = row_functional(gamma, i)
        out.append([sum(a * b for a, b in zip(f, d)) for d in dcols])
    return IntMatrix.of(out)


def phi(gamma: Path, delta: Path) -> Tiling:
    k = gamma.k
    if delta.k != k:
        raise ShapeError(f"paths in dimensions {k} and {delta.k}")
    try:
        central = phi_window(gamma, delta, range(1, k + 1), range(1, k + 1))
    except RangeError as exc:
        raise RangeError(f"paths do not define the central block: {exc}") from exc
    t = Tiling(k, central, tilde_sequence(gamma.transition_sequence()), delta.transition_sequence())
    if gamma.has_column(2 * k) and delta.has_column(k + 1):
        direct = phi_window(gamma, delta, range(1, k + 2), range(1, k + 2))
        if window(t, 1, 1, k + 1, k + 1) != direct:
            raise TilingError("propagated block disagrees with the determinant formula")
    return t


# ---- psi ----
def strip_path(t: Tiling) -> Path:
    """The rows 1..k of t read as a path, carrying the horizontal transitions."""
    seq = t.col_transitions
    rng = seq.index_range()
    anchor = 1 if rng is None or rng[0] <= 1 <= rng[1] + 1 else rng[0]
    seed = from_columns(list(strip_columns(t, anchor, anchor + t.k - 1)))
    return path_from_sequence(seed, seq, anchor=anchor)


def functional_matrix(gamma: Path, lo: int = 1) -> IntMatrix:
    """Rows are the functionals of gamma at lo..lo+k-1."""
    return IntMatrix.of([row_functional(gamma, lo + r) for r in range(gamma.k)])


def psi(t: Tiling) -> Tuple[Path, Path]:
    """
    Canonical pair (gamma, delta) with phi(gamma, delta) = t: gamma has the
    identity window at 1 and the transitions whose tilde are the vertical
    transitions; delta is the strip corrected by the functional matrix of
    gamma.  For a finite tiling, gamma is unique only where the vertical
    transitions see every coefficient; the rest are taken as 0.
    """
    gamma = path_from_sequence(identity(t.k), untilde_sequence(t.row_transitions), anchor=1)
    c = functional_matrix(gamma)
    strip = strip_path(t)
    try:
        delta = act(unimodular_inverse(c), strip)
    except NonUnimodularError as exc:
        raise TilingError(f"functional matrix is not in SL_k: {exc}") from exc
    return gamma, delta


def c_matrix(gamma: Path) -> IntMatrix:
    """Functional matrix of gamma after moving its window at 1 to the identity."""
    normalized = act(unimodular_inverse(gamma.window(1)), gamma)
    return functional_matrix(normalized)


# ---- transitions from data ----
def row_functional_transitions(gamma: Path, lo: int, hi: int) -> List[JMatrix]:
    """Vertical transitions of phi(gamma, .) for i in lo..hi, from consecutive functional matrices."""
    out = []
    for i in range(lo, hi + 1):
        v = transpose(mul(functional_matrix(gamma, i + 1), unimodular_inverse(functional_matrix(gamma, i))))
        out.append(JMatrix.from_matrix(v))
    return out


def transitions_from_grid(k: int, grid: IntMatrix, i0: int = 1, j0: int = 1
                          ) -> Tuple[TransitionSequence, TransitionSequence]:
    """
    (row, column) transitions read off a dense window whose top-left entry
    is m_{i0,j0}.  Raises TilingError when a block is singular or a
    transition is not of J shape.
    """
    rows, cols = grid.shape
    if rows < k + 1 or cols < k + 1:
        raise ShapeError(f"{rows}x{cols} grid is too small to read transitions for k={k}")

    def block(r: int, c: int) -> IntMatrix:
        return submatrix(grid, range(r, r + k), range(c, c + k))

    try:
        hs = [JMatrix.from_matrix(mul(unimodular_inverse(block(0, c)), block(0, c + 1))).coeffs
              for c in range(cols - k)]
        vs = [JMatrix.from_matrix(transpose(mul(block(r + 1, 0), unimodular_inverse(block(r, 0))))).coeffs
              for r in range(rows - k)]
    except (NonUnimodularError, TransitionShapeError) as exc:
        raise TilingError(f"window is not part of a tame SL_{k}-tiling: {exc}") from exc
    return TransitionSequence(k, i0, tuple(vs)), TransitionSequence(k, j0, tuple(hs))


def _periodic_part(seq: TransitionSequence, start: int, period: Optional[int]) -> TransitionSequence:
    if period is None:
        return seq
    lo, hi = seq.index_range()
    if start < lo or start + period - 1 > hi:
        raise RangeError(f"period {period} from {start} not covered by transitions {lo}..{hi}")
    coeffs = tuple(seq.at(x).coeffs for x in range(start, start + period))
    return TransitionSequence(seq.k, start, coeffs, period)


def tiling_from_grid(k: int, grid: IntMatrix, i0: int = 1, j0: int = 1,
                     row_period: Optional[int] = None, col_period: Optional[int] = None) -> Tiling:
    """
    Tiling presented by a dense window with top-left m_{i0,j0}; the window
    must contain rows and columns 1..k.  With periods given, one period of
    transitions starting at 1 is kept and the closure becomes periodic.
    """
    rows, cols = grid.shape
    if not (i0 <= 1 and i0 + rows >= k + 1 and j0 <= 1 and j0 + cols >= k + 1):
        raise RangeError(f"window at ({i0},{j0}) of size {rows}x{cols} misses the central block")
    vs, hs = transitions_from_grid(k, grid, i0, j0)
    central = submatrix(grid, range(1 - i0, 1 - i0 + k), range(1 - j0, 1 - j0 + k))
    return Tiling(k, central, _periodic_part(vs, 1, row_period), _periodic_part(hs, 1, col_period))


# ---- validation ----
@dataclass
class ValidationReport:
    k: int
    i0: int
    j0: int
    rows: int
    cols: int
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "k": self.k, "window": [self.i0, self.j0, self.rows, self.cols],
            "ok": self.ok, "violations": list(self.violations),
        }


def validate_window(k: int, grid: IntMatrix, i0: int = 1, j0: int = 1) -> ValidationReport:
    """Adjacent k-minors must be 1, adjacent (k+1)-minors 0, everywhere inside grid."""
    rows, cols = grid.shape
    report = ValidationReport(k, i0, j0, rows, cols)
    for size, want in ((k, 1), (k + 1, 0)):
        for r in range(rows - size + 1):
            for c in range(cols - size + 1):
                d = det(submatrix(grid, range(r, r + size), range(c, c + size)))
                if d != want:
                    report.violations.append(f"{size}x{size} minor at ({i0 + r},{j0 + c}) is {d}, expected {want}")
    return report


def default_window(k: int) -> int:
    return get_env_int("SLK_WINDOW_FACTOR", 3) * k


def validate(t: Tiling, size: Optional[int] = None, i0: Optional[int] = None,
             j0: Optional[int] = None) -> ValidationReport:
    size = size or default_window(t.k)
    i0 = 1 - t.k if i0 is None else i0
    j0 = 1 - t.k if j0 is None else j0
    try:
        grid = window(t, i0, j0, size, size)
    except RangeError as exc:
        report = ValidationReport(t.k, i0, j0, size, size)
        report.violations.append(f"window unreachable: {exc}")
        return report
    return validate_window(t.k, grid, i0, j0)


# ---- periodicity ----
def _window_args(t: Tiling, size: Optional[int]) -> Tuple[int, int]:
    return 1 - t.k, size or default_window(t.k)


def _product(seq: TransitionSequence, start: int, p: int) -> IntMatrix:
    out = identity(seq.k)
    for x in range(start, start + p):
        out = mul(out, seq.at(x).expand())
    return out


def _shift_check(t: Tiling, p: int, size: Optional[int], axis: str, sign: int) -> bool:
    lo, n = _window_args(t, size)
    seq = t.row_transitions if axis == "row" else t.col_transitions
    try:
        here = window(t, lo, lo, n, n)
        there = window(t, lo + p, lo, n, n) if axis == "row" else window(t, lo, lo + p, n, n)
        products_ok = all(_product(seq, x, p) == identity(t.k).scaled(sign) for x in range(lo, lo + n - t.k + 1))
    except RangeError:
        return False
    return products_ok and here == there.scaled(sign)


def is_row_periodic(t: Tiling, p: int, size: Optional[int] = None) -> bool:
    return _shift_check(t, p, size, "row", 1)


def is_col_periodic(t: Tiling, p: int, size: Optional[int] = None) -> bool:
    return _shift_check(t, p, size, "col", 1)


def is_skew_row_periodic(t: Tiling, p: int, size: Optional[int] = None) -> bool:
    return _shift_check(t, p, size, "row", corner(t.k))


def is_skew_col_periodic(t: Tiling, p: int, size: Optional[int] = None) -> bool:
    return _shift_check(t, p, size, "col", corner(t.k))
