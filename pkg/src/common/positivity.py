from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Iterator, List, Optional, Sequence, Tuple

from env_utils import get_env_int
from src.common.duality import gale_dual
from src.common.errors import FriezeError, PathError, PreconditionError, ShapeError
from src.common.friezes import (
    Frieze, coeffs_of_quiddity, frieze_to_tiling, is_positive_frieze, is_positive_quiddity, phi_iota,
    plucker_frieze_eval, quiddity_sequence,
)
from src.common.linalg import IntMatrix, adjugate, det, from_columns, identity, unimodular_inverse
from src.common.paths import Closure, JMatrix, Path, act, corner, step_right
from src.common.tilings import Tiling
from src.utils.log import get_logger

log = get_logger("positivity")

Column = Tuple[int, ...]


# ---- alternating paths (k = 3) ----
@dataclass
class AlternationReport:
    alternates: bool
    excluded: Tuple[int, ...]
    checked: Tuple[int, ...]
    failures: List[int] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.alternates


def alternates_in_sign(gamma: Path, indices: Optional[Sequence[int]] = None) -> AlternationReport:
    """
    After moving the window at 1 to the identity, every column outside
    indices 1, 2, 3 (mod the period for closed paths) must read (+, -, +).
    """
    if gamma.k != 3:
        raise PreconditionError(f"sign alternation is defined for k=3, got k={gamma.k}")
    g = act(unimodular_inverse(gamma.window(1)), gamma)
    period = g.closure.period
    if indices is None:
        if period is not None:
            indices = range(1, period + 1)
        else:
            lo, hi = g.index_range()
            indices = range(lo, hi + 1)
    if period is not None:
        excluded = {x for x in indices if (x - 1) % period < 3}
    else:
        excluded = {x for x in indices if 1 <= x <= 3}
    checked = tuple(x for x in indices if x not in excluded)
    failures = []
    for i in checked:
        x, y, z = g.column(i)
        if not (x > 0 and y < 0 and z > 0):
            failures.append(i)
    return AlternationReport(not failures, tuple(sorted(excluded)), checked, failures)


@dataclass(frozen=True)
class Counterexample:
    path: Path
    tiling: Tiling
    position: Tuple[int, int]
    value: int
    matrix: IntMatrix


def alternating_converse_counterexample() -> Counterexample:
    """A 7-periodic path alternating in sign whose frieze tiling has the entry -1."""
    columns = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, -2, 1), (1, -1, 1), (1, -3, 2), (1, -2, 1))
    gamma = Path(3, 1, columns, Closure.periodic(7))
    t = phi_iota(gamma)
    i, j = 3, 6
    m = from_columns([gamma.column(i), gamma.column(i + 1), gamma.column(j)])
    return Counterexample(gamma, t, (i, j), t.entry(i, j), m)


# ---- positivity vs quiddity ----
THEOREM_CASES = (
    (2, range(0, 10)),
    (3, range(0, 9)),
    (4, range(0, 8)),
    (5, range(0, 9)),
    (6, range(0, 9)),
)


def theorem_scope(k: int, n: int) -> Optional[str]:
    """Which case of the small (k, n) equivalence applies, or None."""
    for kk, ns in THEOREM_CASES:
        if k == kk and n in ns:
            return "exception_all_ones" if (k, n) == (5, 8) else f"k={k},n<={ns[-1]}"
    return None


@dataclass
class EquivalenceReport:
    k: int
    n: int
    scope: Optional[str]
    frieze_positive: bool
    quiddity_positive: bool
    all_ones: bool

    @property
    def equivalent(self) -> bool:
        return self.frieze_positive == self.quiddity_positive

    @property
    def verdict(self) -> str:
        if self.scope is None:
            return "no_claim"
        if self.equivalent:
            return "holds"
        if self.scope == "exception_all_ones" and self.all_ones:
            return "documented_exception"
        return "violated"

    def as_dict(self) -> dict:
        return {
            "k": self.k, "n": self.n, "scope": self.scope, "frieze_positive": self.frieze_positive,
            "quiddity_positive": self.quiddity_positive, "verdict": self.verdict,
        }


def positivity_equivalence_check(f: Frieze) -> EquivalenceReport:
    if f.n is None:
        raise PreconditionError("the equivalence concerns friezes of type (k,n)")
    q = quiddity_sequence(f)
    return EquivalenceReport(
        f.k, f.n, theorem_scope(f.k, f.n), is_positive_frieze(f), is_positive_quiddity(q),
        all(x == 1 for row in f.rows for x in row),
    )


# ---- enumeration ----
@dataclass
class EnumerationResult:
    k: int
    n: int
    friezes: List[Frieze]
    complete: bool
    bound: int
    min_entry: int
    explored: int

    @property
    def count(self) -> int:
        return len(self.friezes)

    def summary(self) -> dict:
        return {
            "k": self.k, "n": self.n, "count": self.count, "complete": self.complete,
            "bound": self.bound, "min_entry": self.min_entry, "explored": self.explored,
        }


@dataclass(frozen=True)
class _Search:
    k: int
    n: int
    lo: int
    hi: int
    positive_entries: bool
    positive_quiddity: bool

    def choices(self) -> List[Tuple[int, ...]]:
        return list(itertools.product(range(self.lo, self.hi + 1), repeat=self.k - 1))


def _leaf(search: _Search, cols: List[Column]) -> Optional[Frieze]:
    a = from_columns(cols)
    try:
        f = plucker_frieze_eval(a)
    except (PreconditionError, PathError):
        return None
    if search.positive_entries and not is_positive_frieze(f):
        return None
    if search.positive_quiddity:
        if not is_positive_quiddity(quiddity_sequence(f)) or is_positive_frieze(f):
            return None
    return f


class _Node:
    """Columns gamma_1..gamma_j of a path with identity seed, plus the functionals seen so far."""
    __slots__ = ("cols", "funcs")

    def __init__(self, cols: List[Column], funcs: List[Column]) -> None:
        self.cols = cols
        self.funcs = funcs

    @classmethod
    def root(cls, k: int) -> "_Node":
        cols = [tuple(c) for c in identity(k).columns()]
        return cls(cols, [_functional(cols[i:i + k - 1]) for i in range(2)])

    def child(self, k: int, q: Tuple[int, ...]) -> "_Node":
        cols = self.cols + [step_right(self.cols[-k:], JMatrix(k, coeffs_of_quiddity(k, q)))]
        return _Node(cols, self.funcs + [_functional(cols[-(k - 1):])])


def _functional(cols: Sequence[Column]) -> Column:
    """Coefficients of v -> det(cols..., v)."""
    k = len(cols[0])
    units = [tuple(1 if r == c else 0 for r in range(k)) for c in range(k)]
    return tuple(det(from_columns(list(cols) + [u])) for u in units)


def _admissible(search: _Search, node: _Node) -> bool:
    """Entries m_{i,j} fixed by the newest column gamma_j: positive inside the frieze, 1 on its last row."""
    k, n = search.k, search.n
    j = len(node.cols)
    col = node.cols[-1]
    for i in range(max(1, j - n + 1), j - k + 1):
        v = sum(a * b for a, b in zip(node.funcs[i - 1], col))
        d = j - i
        if d == n - 1:
            if v != 1:
                return False
        elif search.positive_entries and v <= 0:
            return False
    return True


def _wrap_functional(k: int, cols: Sequence[Column], t: int) -> Column:
    """v -> det(cols..., v, e_1, ..., e_t) for the k-1-t columns before the closing one."""
    units = [tuple(1 if r == c else 0 for r in range(k)) for c in range(k)]
    return tuple(det(from_columns(list(cols) + [u] + units[:t])) for u in units)


def _closing_choices(search: _Search, node: _Node) -> List[Tuple[int, ...]]:
    """
    Choices for the last column gamma_n.  The k-1 windows wrapping around
    to the identity seed are linear in its coefficients; when that system
    is nonsingular it has at most one integral solution.
    """
    k, n = search.k, search.n
    cols = node.cols
    s = corner(k)
    base = tuple(s * x for x in cols[n - k - 1])
    terms = [cols[n - k + q - 2] for q in range(2, k + 1)]
    a_rows, rhs = [], []
    for t in range(1, k):
        g = _wrap_functional(k, cols[n - k + t:n - 1], t)
        dot = lambda v: sum(x * y for x, y in zip(g, v))
        a_rows.append([dot(v) for v in terms])
        # cyclic minor (1..t, n-k+1+t..n) read in path order
        rhs.append((-1) ** (t * (k - t)) - dot(base))
    a = IntMatrix.of(a_rows)
    d = det(a)
    if d == 0:
        return search.choices()
    adj = adjugate(a)
    coeffs = []
    for r in range(k - 1):
        num = sum(adj[r, c] * rhs[c] for c in range(k - 1))
        if num % d:
            return []
        coeffs.append(num // d)
    q = coeffs_of_quiddity(k, coeffs)
    return [q] if all(search.lo <= x <= search.hi for x in q) else []


def _next_choices(search: _Search, node: _Node) -> List[Tuple[int, ...]]:
    return _closing_choices(search, node) if len(node.cols) == search.n - 1 else search.choices()


def _dfs(search: _Search, node: _Node, counter: List[int]) -> Iterator[Frieze]:
    counter[0] += 1
    if len(node.cols) == search.n:
        f = _leaf(search, node.cols)
        if f is not None:
            yield f
        return
    for q in _next_choices(search, node):
        nxt = node.child(search.k, q)
        if _admissible(search, nxt):
            yield from _dfs(search, nxt, counter)


def _run(search: _Search, first: Optional[Tuple[int, ...]] = None) -> Tuple[List[Frieze], int]:
    counter = [0]
    node = _Node.root(search.k)
    if first is not None:
        node = node.child(search.k, first)
        if not _admissible(search, node):
            return [], 1
    return list(_dfs(search, node, counter)), counter[0]


def _run_first(args: Tuple[_Search, Tuple[int, ...]]) -> Tuple[List[Frieze], int]:
    return _run(*args)


def _frieze_key(f: Frieze) -> Tuple:
    return f.rows


def enumerate_positive_friezes(k: int, n: int, bound: Optional[int] = None, jobs: Optional[int] = None,
                               min_entry: Optional[int] = None, verify: bool = True) -> EnumerationResult:
    """
    Depth-first search over quiddity vectors q_1..q_{n-k}; the remaining
    columns are forced by closure.  For k = 2 the entries range over
    1..n-2 and the result is exact; otherwise over min_entry..bound.
    """
    if n <= k + 1:
        raise ShapeError(f"type ({k},{n}) has no nontrivial rows")
    if k == 2:
        lo, hi, complete = 1, n - 2, True
    else:
        lo = 0 if min_entry is None else min_entry
        hi = get_env_int("SLK_ENUM_BOUND", 6) if bound is None else bound
        complete = False
    jobs = get_env_int("SLK_ENUM_JOBS", 1) if jobs is None else jobs
    search = _Search(k, n, lo, hi, positive_entries=True, positive_quiddity=False)
    friezes, explored = _collect(search, jobs)
    if verify:
        for f in friezes:
            frieze_to_tiling(f)
    if not complete:
        log.info("(%d,%d) search complete only for quiddity entries in %d..%d", k, n, lo, hi)
    return EnumerationResult(k, n, friezes, complete, hi, lo, explored)


def _collect(search: _Search, jobs: int) -> Tuple[List[Frieze], int]:
    if jobs <= 1:
        found, explored = _run(search)
    else:
        tasks = [(search, q) for q in search.choices()]
        with Pool(processes=jobs) as pool:
            parts = pool.map(_run_first, tasks)
        found = [f for part, _ in parts for f in part]
        explored = 1 + sum(e for _, e in parts)
    found.sort(key=_frieze_key)
    log.debug("explored %d search nodes, kept %d friezes", explored, len(found))
    return found, explored


def quiddity_counterexample_search(k: int, n: int, bound: int, jobs: int = 1) -> List[Frieze]:
    """Friezes with a positive quiddity sequence (entries 1..bound) that are not positive."""
    search = _Search(k, n, 1, bound, positive_entries=False, positive_quiddity=True)
    found, _ = _collect(search, jobs)
    return found


def random_positive_instances(k: int, n: int, count: int, seed: int = 0, bound: Optional[int] = None,
                              pool: Optional[int] = None) -> List[Frieze]:
    """
    Positive friezes of type (k, n).  k = 2 draws from the exact
    enumeration and k = n - 2 takes Gale duals of those draws.  Other types
    rotate a pool of friezes found by randomized search with quiddity
    entries in 0..bound (default SLK_ENUM_BOUND).
    """
    rng = random.Random(seed)
    if k in (2, n - 2):
        catalan = enumerate_positive_friezes(2, n).friezes
        sample = [rng.choice(catalan) for _ in range(count)]
        if k == 2:
            return sample
        duals = {f: gale_dual(f) for f in set(sample)}
        return [duals[f] for f in sample]
    hi = get_env_int("SLK_ENUM_BOUND", 6) if bound is None else bound
    size = min(count, get_env_int("SLK_SAMPLE_POOL", 4) if pool is None else pool)
    found = [sample_consecutive_matrix(k, n, rng, lo=0, hi=hi, positive=True)[1] for _ in range(size)]
    log.debug("sampled %d positive (%d,%d) friezes, %d distinct", size, k, n, len(set(found)))
    return [rng.choice(found).rotated(rng.randrange(n)) for _ in range(count)]


def _random_leaf(search: _Search, node: _Node, rng: random.Random) -> Optional[Tuple[List[Column], Frieze]]:
    if len(node.cols) == search.n:
        f = _leaf(search, node.cols)
        return None if f is None else (node.cols, f)
    choices = list(_next_choices(search, node))
    rng.shuffle(choices)
    for q in choices:
        nxt = node.child(search.k, q)
        if _admissible(search, nxt):
            found = _random_leaf(search, nxt, rng)
            if found is not None:
                return found
    return None


def sample_consecutive_matrix(k: int, n: int, rng: random.Random, lo: int = -1, hi: int = 3,
                              positive: bool = False) -> Tuple[IntMatrix, Frieze]:
    """
    A k x n matrix with identity first block and cyclically consecutive
    minors 1, with its frieze; quiddity entries in lo..hi, chosen at random.
    """
    if n <= k + 1:
        raise ShapeError(f"type ({k},{n}) has no nontrivial rows")
    search = _Search(k, n, lo, hi, positive_entries=positive, positive_quiddity=False)
    found = _random_leaf(search, _Node.root(k), rng)
    if found is None:
        raise FriezeError(f"no frieze of type ({k},{n}) with quiddity entries in {lo}..{hi}")
    cols, f = found
    return from_columns(cols), f
