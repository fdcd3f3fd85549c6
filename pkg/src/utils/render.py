from __future__ import annotations

from typing import List, Optional

from src.common.friezes import Frieze
from src.common.linalg import IntMatrix
from src.common.tilings import Tiling, window


def render_grid(grid: IntMatrix, i0: int = 1, j0: int = 1) -> str:
    """Right-aligned grid with absolute row and column labels."""
    labels = [str(j0 + c) for c in range(grid.ncols)]
    width = max(len(s) for s in labels + [str(x) for row in grid.rows for x in row])
    lw = max(len(str(i0 + r)) for r in range(grid.nrows))
    lines = [" " * (lw + 3) + " ".join(s.rjust(width) for s in labels)]
    lines.append(" " * (lw + 1) + "+" + "-" * (1 + (width + 1) * grid.ncols))
    for r, row in enumerate(grid.rows):
        lines.append(f"{str(i0 + r).rjust(lw)} | " + " ".join(str(x).rjust(width) for x in row))
    return "\n".join(lines)


def render_tiling(t: Tiling, i0: int, j0: int, rows: int, cols: int) -> str:
    return render_grid(window(t, i0, j0, rows, cols), i0, j0)


def render_frieze(f: Frieze, periods: int = 2, rows: Optional[int] = None) -> str:
    """
    Offset layout: frieze row m is shifted half a cell right of row m-1,
    borders included.  Finite friezes show `periods` periods.
    """
    positions = list(f.positions())
    if f.n is not None:
        positions = list(range(1, periods * f.n + 1))
        last = f.n + f.k - 1
    else:
        last = f.k + len(f.rows)
    if rows is not None:
        last = min(last, rows)
    table: List[List[str]] = [[str(f.entry(r, m)) for r in positions] for m in range(1, last + 1)]
    width = max(len(s) for line in table for s in line) + 1
    width += width % 2
    out = []
    for m, line in enumerate(table):
        out.append((" " * (m * width // 2) + "".join(s.rjust(width) for s in line)).rstrip())
    return "\n".join(out)
