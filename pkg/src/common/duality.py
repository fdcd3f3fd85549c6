from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from src.common.errors import FriezeError, PreconditionError, RangeError, ShapeError, TilingError
from src.common.friezes import Frieze, frieze_to_tiling
from src.common.linalg import IntMatrix, det
from src.common.paths import Path, tilde_sequence
from src.common.tilings import Tiling, default_window, phi, psi, tiling_from_grid, validate_window, window
from src.utils.log import get_logger

log = get_logger("duality")


def _row_span(seq, k: int, p: int) -> Tuple[int, int, Optional[int]]:
    """(first, last, period) of the indices whose p x p minors are reachable."""
    if seq.period is not None:
        return 1, seq.period + k, seq.period
    lo, hi = seq.index_range()
    return lo, hi + k - p + 1, None


def _minors(base: IntMatrix, p: int, rows: int, cols: int) -> IntMatrix:
    return IntMatrix.of([
        [det(IntMatrix.of([base.rows[r + a][c:c + p] for a in range(p)])) for c in range(cols)]
        for r in range(rows)
    ])


def _check_order(k: int, p: int) -> None:
    if not 1 <= p <= k:
        raise ShapeError(f"derived tiling needs 1 <= p <= {k}, got {p}")


def derived_window(t: Tiling, p: int, i0: int, j0: int, rows: int, cols: int) -> IntMatrix:
    """rows x cols window of adjacent p x p minors of t, top-left minor at (i0, j0)."""
    _check_order(t.k, p)
    return _minors(window(t, i0, j0, rows + p - 1, cols + p - 1), p, rows, cols)


def derived_tiling(t: Tiling, p: int) -> Tiling:
    """
    Tiling of adjacent p x p minors of t, re-presented by block and
    transitions.  Only p = 1 and the dual p = k-1 give SL_k-tilings; other
    orders are read through derived_window.
    """
    k = t.k
    _check_order(k, p)
    if p not in (1, k - 1):
        raise PreconditionError(f"minors of order {p} do not form an SL_{k}-tiling; only orders 1 and {k - 1} do")
    r_lo, r_hi, r_period = _row_span(t.row_transitions, k, p)
    c_lo, c_hi, c_period = _row_span(t.col_transitions, k, p)
    if r_lo > 1 or c_lo > 1 or r_hi < k or c_hi < k:
        raise RangeError(f"minors over rows {r_lo}..{r_hi}, columns {c_lo}..{c_hi} miss the central block")
    rows, cols = r_hi - r_lo + 1, c_hi - c_lo + 1
    grid = _minors(window(t, r_lo, c_lo, rows + p - 1, cols + p - 1), p, rows, cols)
    log.debug("derived tiling of order %d from a %dx%d minor window", p, rows, cols)
    report = validate_window(k, grid, r_lo, c_lo)
    if not report.ok:
        raise TilingError(f"minors of order {p} do not form a tame SL_{k}-tiling: {report.violations[0]}")
    return tiling_from_grid(k, grid, r_lo, c_lo, r_period, c_period)


def dual(t: Tiling) -> Tiling:
    return derived_tiling(t, t.k - 1)


@dataclass
class DualReport:
    k: int
    checked: int
    horizontal_ok: bool = True
    vertical_ok: bool = True
    roundtrip_ok: bool = True
    double_dual_ok: bool = True
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.horizontal_ok and self.vertical_ok and self.roundtrip_ok and self.double_dual_ok

    def as_dict(self) -> dict:
        return {
            "k": self.k, "checked": self.checked, "ok": self.ok,
            "horizontal_ok": self.horizontal_ok, "vertical_ok": self.vertical_ok,
            "roundtrip_ok": self.roundtrip_ok, "double_dual_ok": self.double_dual_ok,
            "notes": list(self.notes),
        }


def dual_transition_check(gamma: Path, delta: Path, count: Optional[int] = None) -> DualReport:
    """
    Horizontal transitions of the dual of phi(gamma, delta) against the tilde
    of delta, vertical ones against gamma shifted by k-2, then the
    phi-psi round trip of the dual and the corner block of the double dual.
    """
    k = gamma.k
    m = phi(gamma, delta)
    md = dual(m)
    count = count or max(gamma.period or 0, delta.period or 0, 2 * k)
    report = DualReport(k, count)
    h_tilde = tilde_sequence(delta.transition_sequence())
    g_seq = gamma.transition_sequence()
    try:
        for j in range(1, count + 1):
            if md.col_transitions.at(j) != h_tilde.at(j):
                report.horizontal_ok = False
                report.notes.append(f"horizontal transition {j} differs from the tilde of delta")
        for i in range(1, count + 1):
            if md.row_transitions.at(i) != g_seq.at(i + k - 2):
                report.vertical_ok = False
                report.notes.append(f"vertical transition {i} differs from gamma's transition {i + k - 2}")
    except RangeError as exc:
        report.notes.append(f"stopped early: {exc}")
    size = 3 * k
    try:
        g, d = psi(md)
        if window(phi(g, d), 1, 1, size, size) != window(md, 1, 1, size, size):
            report.roundtrip_ok = False
            report.notes.append("phi(psi(dual)) differs from the dual")
        if dual(md).central != window(m, k - 1, k - 1, k, k):
            report.double_dual_ok = False
            report.notes.append("central block of the double dual differs from the block at (k-1, k-1)")
    except (RangeError, TilingError) as exc:
        report.roundtrip_ok = False
        report.notes.append(f"round trip failed: {exc}")
    return report


# ---- Gale duality ----
def gale_entry(t: Tiling, n: int, r_dual: int, m_dual: int) -> int:
    """Entry at position r_dual, row m_dual of the Gale dual: an adjacent s x s minor, s = n - m_dual."""
    k = t.k
    s = n - m_dual
    if s <= 0:
        return 0 if m_dual > n else 1
    if s > k:
        return 0
    r = r_dual - k - s
    return derived_window(t, s, r, r + k, 1, 1)[0, 0]


def gale_dual(f: Frieze) -> Frieze:
    if f.n is None:
        raise FriezeError("Gale duality is defined for friezes of type (k,n)")
    k, n = f.k, f.n
    kd = n - k
    if kd < 2:
        raise FriezeError(f"type ({k},{n}) has no Gale dual with k >= 2")
    t = frieze_to_tiling(f)
    rows = tuple(
        tuple(gale_entry(t, n, r, m) for r in range(1, n + 1))
        for m in range(kd + 1, n)
    )
    out = Frieze(kd, rows, n)
    frieze_to_tiling(out)
    return out


def align(f: Frieze, g: Frieze) -> Optional[int]:
    """Shift sigma with g(r) = f(r + sigma) on every row, or None."""
    if (f.k, f.n) != (g.k, g.n):
        return None
    for sigma in range(f.n):
        if all(g.rows[x][r] == f.rows[x][(r + sigma) % f.n] for x in range(len(f.rows)) for r in range(f.n)):
            return sigma
    return None


def double_dual_shift_check(t: Tiling, size: Optional[int] = None) -> bool:
    """The double dual agrees with t shifted by k-2 in both indices on a size x size window."""
    k = t.k
    size = size or default_window(k)
    try:
        dd = dual(dual(t))
        return window(dd, 1, 1, size, size) == window(t, k - 1, k - 1, size, size)
    except (RangeError, TilingError):
        return False
