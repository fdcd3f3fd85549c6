"""
Worked examples with known answers, run by `main.py selftest`.  The
seeded samplers below are shared with the test suite.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from src.common.duality import double_dual_shift_check, dual, gale_dual
from src.common.errors import SlkError
from src.common.friezes import (
    Frieze, frieze_to_tiling, phi_a, phi_iota, plucker_frieze_eval, quiddity_sequence, tiling_is_from_frieze,
)
from src.common.linalg import IntMatrix, identity, mul, shear
from src.common.paths import Closure, JMatrix, Path, join_paths, path_from_word
from src.common.pluecker import check_pluecker_relation, pluecker_det_formula
from src.common.positivity import (
    alternates_in_sign, alternating_converse_counterexample, enumerate_positive_friezes, sample_consecutive_matrix,
)
from src.common.tilings import is_col_periodic, is_row_periodic, phi, psi, validate, window
from src.utils.log import get_logger

log = get_logger("selftest")

Check = Callable[[], Tuple[bool, str]]


@dataclass
class CaseResult:
    name: str
    ok: bool
    detail: str

    def as_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


CASES: List[Tuple[str, Check]] = []


def case(name: str) -> Callable[[Check], Check]:
    def register(fn: Check) -> Check:
        CASES.append((name, fn))
        return fn
    return register


# ---- seeded samplers ----
def random_sl(k: int, rng: random.Random, shears: int = 6, lam: int = 2) -> IntMatrix:
    out = identity(k)
    for _ in range(shears):
        i, j = rng.sample(range(1, k + 1), 2)
        out = mul(out, shear(k, i, j, rng.randint(-lam, lam)))
    return out


def random_word(k: int, length: int, rng: random.Random, lo: int = -3, hi: int = 3) -> List[JMatrix]:
    return [JMatrix(k, tuple(rng.randint(lo, hi) for _ in range(k - 1))) for _ in range(length)]


def random_finite_path(k: int, length: int, rng: random.Random, base_index: int = 1) -> Path:
    """Path on base_index..base_index+length-1 from a random seed and J word."""
    return path_from_word(k, random_sl(k, rng), base_index, random_word(k, max(length - k, 0), rng))


def random_closed_path(k: int, rng: random.Random, m: Optional[int] = None, n: Optional[int] = None) -> Path:
    """Skew-periodic path joining two random finite paths."""
    m = m or k
    n = n or k
    return join_paths(random_finite_path(k, m, rng), random_finite_path(k, n, rng), m, n)


def random_consecutive_matrix(k: int, n: int, rng: random.Random) -> IntMatrix:
    """k x n matrix whose cyclically consecutive minors are 1, moved by a random element of SL_k."""
    a, _ = sample_consecutive_matrix(k, n, rng)
    return mul(random_sl(k, rng), a)


# ---- cases ----
def block_example_paths() -> Tuple[Path, Path]:
    gamma = Path(3, 1, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 5, 2)), Closure.finite())
    delta = Path(3, 1, ((1, 1, 1), (1, 2, 3), (1, 3, 6)), Closure.finite())
    return gamma, delta


@case("tiling central block")
def _tiling_block() -> Tuple[bool, str]:
    gamma, delta = block_example_paths()
    t = phi(gamma, delta)
    want = IntMatrix.of([[1, 3, 6], [1, 1, 1], [-4, -3, -2]])
    return t.central == want and t.entry(1, 2) == 3, f"central {t.central.to_lists()}, m_12 = {t.entry(1, 2)}"


@case("joining two paths")
def _joining() -> Tuple[bool, str]:
    gamma = Path(2, 1, ((0, 1), (-1, 1), (-2, 1), (-1, 0)), Closure.finite())
    delta = Path(2, 1, ((-4, 3), (1, -1), (2, -1)), Closure.finite())
    bridge = [JMatrix(2, (c,)) for c in (-1, -2, -1)]
    wrap = [JMatrix(2, (c,)) for c in (-5, -1, -1)]
    joined = join_paths(gamma, delta, 3, 2, bridge=bridge, wrap=wrap)
    want = ((0, 1), (-1, 1), (-2, 1), (3, -2), (-4, 3), (1, -1), (-1, 2))
    return joined.columns == want and joined.column(8) == (0, -1), f"period {list(joined.columns)}"


@case("path from a J word")
def _path_from_word() -> Tuple[bool, str]:
    seed = IntMatrix.from_columns([(0, 1), (-1, 1)])
    word = [JMatrix(2, (c,)) for c in (2, -1, -2, -1, -5, -1, -1)]
    gamma = path_from_word(2, seed, 1, word, closure=Closure.skew_periodic(7))
    want = ((0, 1), (-1, 1), (-2, 1), (3, -2), (-4, 3), (1, -1), (-1, 2))
    return gamma.columns == want, f"columns {list(gamma.columns)}"


@case("Gr(3,8) determinant formula")
def _det_formula() -> Tuple[bool, str]:
    rng = random.Random(38)
    for trial in range(20):
        a = IntMatrix.from_columns(
            [path_from_word(3, random_sl(3, rng), 1, random_word(3, 5, rng)).column(i) for i in range(1, 9)]
        )
        lhs, rhs = pluecker_det_formula(a, (3, 4, 5), 1)
        if lhs != rhs:
            return False, f"trial {trial}: det {lhs} != product {rhs}"
    return True, "20 matrices"


@case("Pluecker relations")
def _relations() -> Tuple[bool, str]:
    rng = random.Random(7)
    for k, n in ((2, 5), (3, 6), (3, 8)):
        a = IntMatrix.of([[rng.randint(-4, 4) for _ in range(n)] for _ in range(k)])
        for _ in range(20):
            i = rng.sample(range(1, n + 1), k - 1)
            j = rng.sample(range(1, n + 1), k + 1)
            r = check_pluecker_relation(a, i, j)
            if r:
                return False, f"Gr({k},{n}) I={i} J={j} residual {r}"
    return True, "60 relations"


@case("alternating path with a negative entry")
def _counterexample() -> Tuple[bool, str]:
    cx = alternating_converse_counterexample()
    alt = alternates_in_sign(cx.path)
    ok = cx.value == -1 and cx.matrix.det() == -1 and alt.alternates
    return ok, f"m_{cx.position} = {cx.value}, alternates = {alt.alternates}"


@case("all-ones (5,8) quiddity")
def _all_ones() -> Tuple[bool, str]:
    f = Frieze(5, ((1,) * 8, (1,) * 8), 8)
    q = quiddity_sequence(f)
    return all(v == (1, 0, 0, 0, 1) for v in q), f"quiddity {q[0]} x {len(q)}"


@case("positive (2,5) friezes")
def _count_25() -> Tuple[bool, str]:
    result = enumerate_positive_friezes(2, 5)
    return result.count == 5 and result.complete, f"{result.count} friezes"


@case("Gale dual of a (2,5) frieze")
def _gale() -> Tuple[bool, str]:
    f = enumerate_positive_friezes(2, 5).friezes[0]
    g = gale_dual(f)
    frieze_to_tiling(g)
    return g.k == 3 and g.n == 5, f"rows {g.rows}"


@case("phi and psi are inverse")
def _round_trip() -> Tuple[bool, str]:
    rng = random.Random(3)
    for k in (2, 3, 4):
        gamma, delta = random_closed_path(k, rng), random_closed_path(k, rng)
        t = phi(gamma, delta)
        g, d = psi(t)
        size = 3 * k
        if window(phi(g, d), 1, 1, size, size) != window(t, 1, 1, size, size):
            return False, f"k={k}: phi(psi(t)) differs"
        if not validate(t).ok:
            return False, f"k={k}: {validate(t).violations[0]}"
    return True, "k = 2, 3, 4"


@case("double dual shift")
def _double_dual() -> Tuple[bool, str]:
    rng = random.Random(5)
    t = phi(random_closed_path(3, rng), random_closed_path(3, rng))
    return double_dual_shift_check(t), "k = 3"


@case("psi of the block example")
def _block_round_trip() -> Tuple[bool, str]:
    t = phi(*block_example_paths())
    g, d = psi(t)
    ok = g.window(1) == identity(3) and phi(g, d).central == t.central
    return ok, f"delta window {d.window(1).to_lists()}"


@case("double dual corner block")
def _double_dual_corner() -> Tuple[bool, str]:
    rng = random.Random(17)
    for k in (3, 4):
        t = phi(random_closed_path(k, rng), random_closed_path(k, rng))
        got = dual(dual(t)).central
        if got != window(t, k - 1, k - 1, k, k):
            return False, f"k={k}: corner {got.to_lists()}"
    return True, "k = 3, 4"


@case("block periodicity")
def _block_periodic() -> Tuple[bool, str]:
    gamma = join_paths(
        Path(2, 1, ((0, 1), (-1, 1), (-2, 1), (-1, 0)), Closure.finite()),
        Path(2, 1, ((-4, 3), (1, -1), (2, -1)), Closure.finite()),
        3, 2,
        bridge=[JMatrix(2, (c,)) for c in (-1, -2, -1)],
        wrap=[JMatrix(2, (c,)) for c in (-5, -1, -1)],
    ).as_periodic()
    delta = random_closed_path(2, random.Random(9)).as_periodic()
    m, n = gamma.period, delta.period
    t = phi(gamma, delta)
    ok = (is_row_periodic(t, m) and is_col_periodic(t, n)
          and window(t, 1 + m, 1 + n, 2, 2) == t.central)
    return ok, f"m = {m}, n = {n}"


@case("tiling of a Pluecker frieze")
def _frieze_tiling() -> Tuple[bool, str]:
    a = random_consecutive_matrix(3, 7, random.Random(13))
    t = phi_iota(phi_a(a))
    ft = frieze_to_tiling(plucker_frieze_eval(a))
    ok = window(t, 1, 1, 7, 14) == window(ft, 1, 1, 7, 14) and tiling_is_from_frieze(t)
    return ok, "type (3,7)"


@case("Pluecker frieze of a closed path")
def _pluecker_frieze() -> Tuple[bool, str]:
    rng = random.Random(11)
    gamma = random_closed_path(3, rng)
    a = IntMatrix.from_columns([gamma.column(i) for i in range(1, gamma.period + 1)])
    f = plucker_frieze_eval(a)
    frieze_to_tiling(f)
    return True, f"type ({f.k},{f.n})"


def run_all(names: Optional[Sequence[str]] = None) -> List[CaseResult]:
    results = []
    for name, fn in CASES:
        if names and name not in names:
            continue
        try:
            ok, detail = fn()
        except SlkError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        log.info("%s: %s", "pass" if ok else "FAIL", name)
        results.append(CaseResult(name, ok, detail))
    return results
