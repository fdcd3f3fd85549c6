from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from src.common.errors import PreconditionError, ShapeError
from src.common.linalg import IntMatrix, det, submatrix
from src.utils.log import get_logger

log = get_logger("pluecker")

Index = Tuple[int, ...]


def reduce_index(x: int, n: int) -> int:
    """Representative of x mod n in 1..n."""
    return (x - 1) % n + 1


def interval(r: int, length: int) -> Index:
    """[r]^length = (r, r+1, ..., r+length-1), not reduced."""
    return tuple(range(r, r + length))


def _inversions(xs: Sequence[int]) -> int:
    return sum(1 for a in range(len(xs)) for b in range(a + 1, len(xs)) if xs[a] > xs[b])


@dataclass(frozen=True)
class PlueckerIndex:
    n: int
    raw: Index

    def normalize(self) -> Tuple[int, Index]:
        return normalize(self.raw, self.n)


def normalize(idx: Sequence[int], n: int) -> Tuple[int, Index]:
    """
    Reduce mod n into 1..n and sort.  Returns the sign of the sorting
    permutation with the sorted tuple; the sign is 0 on a repeated index.
    """
    reduced = [reduce_index(x, n) for x in idx]
    ordered = tuple(sorted(reduced))
    if len(set(reduced)) != len(reduced):
        return 0, ordered
    return (-1 if _inversions(reduced) % 2 else 1), ordered


def o(idx: Sequence[int], n: int) -> Optional[Index]:
    """The index read as a set: sorted residues, None on a repeat."""
    sign, ordered = normalize(idx, n)
    return ordered if sign else None


def _minor(a: IntMatrix, cols: Sequence[int]) -> int:
    return det(submatrix(a, range(a.nrows), [c - 1 for c in cols]))


def _check_shape(a: IntMatrix, idx: Sequence[int]) -> None:
    if len(idx) != a.nrows:
        raise ShapeError(f"{len(idx)} indices for a matrix with {a.nrows} rows")
    if a.ncols < a.nrows:
        raise ShapeError(f"{a.nrows}x{a.ncols} matrix has fewer columns than rows")


def pluecker(a: IntMatrix, idx: Sequence[int]) -> int:
    """Alternating coordinate: sign of the sort times the sorted minor."""
    _check_shape(a, idx)
    sign, ordered = normalize(idx, a.ncols)
    if sign == 0:
        return 0
    return sign * _minor(a, ordered)


def cyclic_pluecker(a: IntMatrix, idx: Sequence[int]) -> int:
    """p_{o(I)}: the minor on the set of residues of idx, 0 on a repeat."""
    _check_shape(a, idx)
    ordered = o(idx, a.ncols)
    return 0 if ordered is None else _minor(a, ordered)


def check_pluecker_relation(a: IntMatrix, i: Sequence[int], j: Sequence[int]) -> int:
    """Residual of sum_l (-1)^l p_{I j_l} p_{J - j_l}; zero for every matrix."""
    k = a.nrows
    if len(i) != k - 1 or len(j) != k + 1:
        raise ShapeError(f"relation needs |I|={k - 1} and |J|={k + 1}, got {len(i)} and {len(j)}")
    total = 0
    for pos, x in enumerate(j):
        rest = tuple(j[:pos]) + tuple(j[pos + 1:])
        total += (-1) ** pos * pluecker(a, tuple(i) + (x,)) * pluecker(a, rest)
    return total


# ---- consecutive minors ----
def consecutive_minors(a: IntMatrix) -> List[int]:
    k, n = a.shape
    return [cyclic_pluecker(a, interval(r, k)) for r in range(1, n + 1)]


def check_consecutive(a: IntMatrix) -> None:
    """Raises PreconditionError naming the first consecutive minor that is not 1."""
    for r, v in enumerate(consecutive_minors(a), start=1):
        if v != 1:
            raise PreconditionError(f"consecutive minor at columns {o(interval(r, a.nrows), a.ncols)} is {v}")


# ---- A_{m;r} ----
def a_matrix(a: IntMatrix, m: Sequence[int], r: int) -> IntMatrix:
    k = a.nrows
    s = len(m)
    if not 1 <= s <= k:
        raise ShapeError(f"A_(m;r) needs 1 <= |m| <= {k}, got {s}")
    return IntMatrix.of([[cyclic_pluecker(a, interval(r + row, k - 1) + (mj,)) for mj in m] for row in range(s)])


def det_formula_hypotheses(m: Sequence[int], r: int, k: int, n: int) -> Tuple[bool, bool]:
    """
    (cyclic order of m, r+k-2 outside the cyclic interval [m_1, m_s)).
    Offsets are taken from m_1 in 0..n-1.
    """
    offsets = [(x - m[0]) % n for x in m]
    ordered = all(a < b for a, b in zip(offsets, offsets[1:]))
    outside = (r + k - 2 - m[0]) % n >= offsets[-1]
    return ordered, outside


def pluecker_det_formula(a: IntMatrix, m: Sequence[int], r: int) -> Tuple[int, int]:
    """(det A_(m;r), product of consecutive coordinates times one mixed coordinate)."""
    k = a.nrows
    s = len(m)
    lhs = det(a_matrix(a, m, r))
    rhs = 1
    for ell in range(s - 1):
        rhs *= cyclic_pluecker(a, interval(r + ell, k))
    rhs *= cyclic_pluecker(a, interval(r + s - 1, k - s) + tuple(m))
    return lhs, rhs


# ---- classification ----
class Kind(str, Enum):
    CONSECUTIVE = "consecutive"
    ALMOST_CONSECUTIVE = "almost_consecutive"
    SEMI_CONSECUTIVE = "semi_consecutive"
    OTHER = "other"


def _runs(members: Sequence[int], n: int) -> List[int]:
    """Lengths of the maximal cyclic runs of a set of residues."""
    s = set(members)
    if len(s) == n:
        return [n]
    lengths = []
    for x in s:
        if reduce_index(x - 1, n) in s:
            continue
        length = 1
        while reduce_index(x + length, n) in s:
            length += 1
        lengths.append(length)
    return lengths


def is_consecutive(idx: Sequence[int], n: int) -> bool:
    ordered = o(idx, n)
    return ordered is not None and len(_runs(ordered, n)) == 1


def is_almost_consecutive(idx: Sequence[int], n: int) -> bool:
    """Some k-1 cyclic interval is contained in the index set."""
    ordered = o(idx, n)
    if ordered is None:
        return False
    return max(_runs(ordered, n)) >= len(ordered) - 1


def is_semi_consecutive(idx: Sequence[int], n: int) -> bool:
    """A (k+1)-interval with one interior element removed."""
    ordered = o(idx, n)
    if ordered is None or len(ordered) + 1 > n:
        return False
    s = set(ordered)
    k = len(ordered)
    for start in range(1, n + 1):
        window = [reduce_index(start + t, n) for t in range(k + 1)]
        for gap in window[1:-1]:
            if s == set(window) - {gap}:
                return True
    return False


def classify(idx: Sequence[int], n: int, k: Optional[int] = None) -> Kind:
    """Most specific class first: consecutive, almost, semi, other."""
    if k is not None and len(idx) != k:
        raise ShapeError(f"index of length {len(idx)} classified in Gr({k},{n})")
    if is_consecutive(idx, n):
        return Kind.CONSECUTIVE
    if is_almost_consecutive(idx, n):
        return Kind.ALMOST_CONSECUTIVE
    if is_semi_consecutive(idx, n):
        return Kind.SEMI_CONSECUTIVE
    return Kind.OTHER


def semi_consecutive_coordinates(k: int, n: int) -> List[Index]:
    out = set()
    for i in range(1, n + 1):
        for gap in range(i + 1, i + k):
            idx = o([x for x in interval(i, k + 1) if x != gap], n)
            if idx is not None:
                out.add(idx)
    return sorted(out)


# ---- transition entries ----
def j_entry_formula(a: IntMatrix, p: int, q: int, direction: str = "horizontal") -> int:
    """
    Entry j_{p,q+1} of the horizontal (H_p) or vertical (V_p) transition of
    the tiling of the frieze of a; q = 0 gives the corner.
    """
    k = a.nrows
    if not 0 <= q <= k - 1:
        raise ShapeError(f"q={q} outside 0..{k - 1}")
    sign = -1 if (k - q - 1) % 2 else 1
    if direction == "horizontal":
        idx = interval(p, q) + interval(p + q + 1, k - q)
    elif direction == "vertical":
        idx = interval(p + q - 1, k - q) + interval(p + k, q)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return sign * cyclic_pluecker(a, idx)


def frieze_layout(k: int, n: int) -> Dict[Tuple[int, int], Index]:
    """Index set of entry (position r, row m) of the Pluecker frieze, nontrivial rows only."""
    return {(r, m): interval(r, k - 1) + (m + r - 1,) for m in range(k + 1, n) for r in range(1, n + 1)}
