from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from toolz import concat

from env_utils import get_env_int
from src.common.errors import (
    ClosureError, NonUnimodularError, PathError, RangeError, ShapeError, TransitionShapeError,
)
from src.common.linalg import (
    IntMatrix, det, from_columns, identity, mul, product, require_sl, unimodular_inverse,
)
from src.utils.log import get_logger

log = get_logger("paths")

Column = Tuple[int, ...]
Coeffs = Tuple[int, ...]


def corner(k: int) -> int:
    """The forced top-right entry (-1)^(k-1) of every J matrix; also the skew sign."""
    return -1 if k % 2 == 0 else 1


# ---- closures ----
class ClosureKind(str, Enum):
    FINITE = "finite"
    PERIODIC = "periodic"
    SKEW_PERIODIC = "skew_periodic"


@dataclass(frozen=True)
class Closure:
    kind: ClosureKind
    period: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is ClosureKind.FINITE:
            if self.period is not None:
                raise ClosureError("finite closure carries no period")
        elif self.period is None or self.period < 1:
            raise ClosureError(f"{self.kind.value} closure needs a positive period, got {self.period}")

    @classmethod
    def finite(cls) -> "Closure":
        return cls(ClosureKind.FINITE)

    @classmethod
    def periodic(cls, p: int) -> "Closure":
        return cls(ClosureKind.PERIODIC, p)

    @classmethod
    def skew_periodic(cls, p: int) -> "Closure":
        return cls(ClosureKind.SKEW_PERIODIC, p)

    @property
    def is_finite(self) -> bool:
        return self.kind is ClosureKind.FINITE


# ---- J matrices ----
@dataclass(frozen=True)
class JMatrix:
    """Transition matrix: shifted identity with last column ((-1)^(k-1), j_2, ..., j_k)."""
    k: int
    coeffs: Coeffs

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ShapeError(f"k must be at least 2, got {self.k}")
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.k - 1:
            raise ShapeError(f"J matrix for k={self.k} needs {self.k - 1} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, k: int) -> "JMatrix":
        return cls(k, (0,) * (k - 1))

    @classmethod
    def from_matrix(cls, m: IntMatrix) -> "JMatrix":
        k = m.nrows
        if not m.is_square or k < 2:
            raise TransitionShapeError(f"{m.nrows}x{m.ncols} matrix cannot be a J matrix")
        for r in range(k):
            for c in range(k - 1):
                want = 1 if r == c + 1 else 0
                if m[r, c] != want:
                    raise TransitionShapeError(f"entry ({r + 1},{c + 1}) is {m[r, c]}, J shape needs {want}")
        if m[0, k - 1] != corner(k):
            raise TransitionShapeError(f"corner entry is {m[0, k - 1]}, J shape needs {corner(k)}")
        return cls(k, tuple(m[r, k - 1] for r in range(1, k)))

    def expand(self) -> IntMatrix:
        return expand(self)

    def coeff(self, q: int) -> int:
        """j_q for q in 2..k; q = 1 gives the corner."""
        return corner(self.k) if q == 1 else self.coeffs[q - 2]


def expand(j: JMatrix) -> IntMatrix:
    k = j.k
    rows = [[0] * k for _ in range(k)]
    rows[0][k - 1] = corner(k)
    for r in range(1, k):
        rows[r][r - 1] = 1
        rows[r][k - 1] = j.coeffs[r - 1]
    return IntMatrix.of(rows)


def product_of_word(word: Sequence[JMatrix], k: int) -> IntMatrix:
    return product((expand(j) for j in word), k)


# ---- recurrences ----
def step_right(window: Sequence[Column], j: JMatrix) -> Column:
    """Column following the window under transition j."""
    k = j.k
    s = corner(k)
    out = [s * x for x in window[0]]
    for q in range(2, k + 1):
        c = j.coeffs[q - 2]
        if c:
            out = [a + c * b for a, b in zip(out, window[q - 1])]
    return tuple(out)


def step_left(window: Sequence[Column], j: JMatrix) -> Column:
    """Column preceding the window, where j is the transition out of that earlier window."""
    k = j.k
    s = corner(k)
    out = list(window[k - 1])
    for q in range(2, k + 1):
        c = j.coeffs[q - 2]
        if c:
            out = [a - c * b for a, b in zip(out, window[q - 2])]
    return tuple(s * x for x in out)


@dataclass(frozen=True)
class TransitionSequence:
    """J matrices indexed by absolute position; periodic when period is set, else finite."""
    k: int
    base_index: int
    coeffs: Tuple[Coeffs, ...]
    period: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(tuple(int(x) for x in c) for c in self.coeffs))
        for idx, c in enumerate(self.coeffs):
            if len(c) != self.k - 1:
                raise ShapeError(f"transition {self.base_index + idx} has {len(c)} coefficients, expected {self.k - 1}")
        if self.period is not None and len(self.coeffs) != self.period:
            raise ClosureError(f"periodic sequence stores {len(self.coeffs)} transitions for period {self.period}")

    def has(self, i: int) -> bool:
        if self.period is not None:
            return True
        return self.base_index <= i < self.base_index + len(self.coeffs)

    def at(self, i: int) -> JMatrix:
        if self.period is not None:
            return JMatrix(self.k, self.coeffs[(i - self.base_index) % self.period])
        if not self.has(i):
            raise RangeError(f"transition {i} outside {self.base_index}..{self.base_index + len(self.coeffs) - 1}")
        return JMatrix(self.k, self.coeffs[i - self.base_index])

    def index_range(self) -> Optional[Tuple[int, int]]:
        if self.period is not None:
            return None
        return self.base_index, self.base_index + len(self.coeffs) - 1

    def word(self, lo: int, hi: int) -> List[JMatrix]:
        return [self.at(i) for i in range(lo, hi + 1)]


# ---- paths ----
@dataclass(frozen=True)
class Path:
    """
    Bi-infinite strip of integer columns, presented by the columns at
    base_index, base_index+1, ... together with a closure.  For closed
    paths the stored columns are exactly one period.
    """
    k: int
    base_index: int
    columns: Tuple[Column, ...]
    closure: Closure

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ShapeError(f"paths need k >= 2, got {self.k}")
        cols = tuple(tuple(int(x) for x in c) for c in self.columns)
        for idx, c in enumerate(cols):
            if len(c) != self.k:
                raise ShapeError(f"column {self.base_index + idx} has {len(c)} entries, expected {self.k}")
        object.__setattr__(self, "columns", cols)
        if self.closure.is_finite:
            if len(cols) < self.k:
                raise PathError(f"finite path needs at least {self.k} columns, got {len(cols)}")
            checks = range(self.base_index, self.base_index + len(cols) - self.k + 1)
        else:
            if len(cols) != self.closure.period:
                raise ClosureError(f"closed path stores {len(cols)} columns for period {self.closure.period}")
            checks = range(self.base_index, self.base_index + len(cols))
        for i in checks:
            d = det(self.window(i))
            if d != 1:
                raise PathError(f"window at {i} has determinant {d}")

    # ---- accessors ----
    @property
    def is_finite(self) -> bool:
        return self.closure.is_finite

    @property
    def period(self) -> Optional[int]:
        return self.closure.period

    def index_range(self) -> Optional[Tuple[int, int]]:
        if not self.is_finite:
            return None
        return self.base_index, self.base_index + len(self.columns) - 1

    def has_column(self, i: int) -> bool:
        rng = self.index_range()
        return rng is None or rng[0] <= i <= rng[1]

    def has_window(self, i: int) -> bool:
        return self.has_column(i) and self.has_column(i + self.k - 1)

    def column(self, i: int) -> Column:
        offset = i - self.base_index
        if self.is_finite:
            if not 0 <= offset < len(self.columns):
                lo, hi = self.index_range()
                raise RangeError(f"column {i} outside {lo}..{hi}")
            return self.columns[offset]
        p = self.closure.period
        q, r = divmod(offset, p)
        col = self.columns[r]
        if self.closure.kind is ClosureKind.SKEW_PERIODIC and q % 2 and corner(self.k) == -1:
            return tuple(-x for x in col)
        return col

    def window(self, i: int) -> IntMatrix:
        return from_columns([self.column(i + t) for t in range(self.k)])

    def transition(self, i: int) -> JMatrix:
        return transition_at(self, i)

    def transition_range(self) -> Optional[Tuple[int, int]]:
        rng = self.index_range()
        if rng is None:
            return None
        return rng[0], rng[1] - self.k

    def transitions(self, lo: int, hi: int) -> List[JMatrix]:
        return [transition_at(self, i) for i in range(lo, hi + 1)]

    def transition_sequence(self) -> TransitionSequence:
        if self.is_finite:
            lo, hi = self.transition_range()
            return TransitionSequence(self.k, lo, tuple(transition_at(self, i).coeffs for i in range(lo, hi + 1)))
        p = self.closure.period
        return TransitionSequence(
            self.k, self.base_index,
            tuple(transition_at(self, i).coeffs for i in range(self.base_index, self.base_index + p)), p,
        )

    def restrict(self, lo: int, hi: int) -> "Path":
        """Finite path on columns lo..hi."""
        return Path(self.k, lo, tuple(self.column(i) for i in range(lo, hi + 1)), Closure.finite())

    def as_periodic(self) -> "Path":
        """A skew-p-periodic path with negative sign is 2p-periodic."""
        if self.closure.kind is not ClosureKind.SKEW_PERIODIC:
            return self
        p = self.closure.period
        if corner(self.k) == 1:
            return Path(self.k, self.base_index, self.columns, Closure.periodic(p))
        cols = tuple(self.column(i) for i in range(self.base_index, self.base_index + 2 * p))
        return Path(self.k, self.base_index, cols, Closure.periodic(2 * p))


def transition_at(gamma: Path, i: int) -> JMatrix:
    if not (gamma.has_window(i) and gamma.has_window(i + 1)):
        raise RangeError(f"transition {i} needs columns {i}..{i + gamma.k}")
    m = mul(unimodular_inverse(gamma.window(i)), gamma.window(i + 1))
    try:
        return JMatrix.from_matrix(m)
    except TransitionShapeError as exc:
        raise PathError(f"transition at {i} is not a J matrix: {exc}") from exc


def _grow(k: int, seed_cols: List[Column], word_right: Sequence[JMatrix],
          word_left: Sequence[JMatrix]) -> Tuple[List[Column], int]:
    """Columns generated from the seed; returns the list and how many were prepended."""
    right = list(seed_cols)
    for j in word_right:
        right.append(step_right(right[-k:], j))
    left: List[Column] = []
    window = list(seed_cols)
    for j in word_left:
        col = step_left(window, j)
        left.append(col)
        window = [col] + window[:-1]
    return list(reversed(left)) + right, len(left)


def _check_seed(k: int, seed: IntMatrix) -> None:
    if seed.shape != (k, k):
        raise ShapeError(f"seed is {seed.nrows}x{seed.ncols}, expected {k}x{k}")
    try:
        require_sl(seed, "seed")
    except NonUnimodularError as exc:
        raise PathError(str(exc)) from exc


def path_from_word(k: int, seed: IntMatrix, base_index: int, word_right: Sequence[JMatrix] = (),
                   word_left: Sequence[JMatrix] = (), closure: Optional[Closure] = None) -> Path:
    """
    Seed occupies columns base_index..base_index+k-1.  word_right[t] is the
    transition at base_index+t, word_left[t] the one at base_index-1-t.
    A closed closure takes exactly one period of word_right and no left word.
    """
    closure = closure or Closure.finite()
    _check_seed(k, seed)
    for j in concat([word_right, word_left]):
        if j.k != k:
            raise ShapeError(f"J matrix for k={j.k} in a word for k={k}")
    cols, shift = _grow(k, seed.columns(), word_right, word_left)
    if closure.is_finite:
        return Path(k, base_index - shift, tuple(cols), closure)

    p = closure.period
    if word_left:
        raise ClosureError("closed paths are generated from the right word only")
    if len(word_right) != p:
        raise ClosureError(f"closed path of period {p} needs {p} transitions, got {len(word_right)}")
    sign = corner(k) if closure.kind is ClosureKind.SKEW_PERIODIC else 1
    expected = [tuple(sign * x for x in c) for c in seed.columns()]
    if cols[p:p + k] != expected:
        raise ClosureError(f"word does not return the window to {'the signed ' if sign == -1 else ''}seed")
    return Path(k, base_index, tuple(cols[:p]), closure)


def path_from_sequence(seed: IntMatrix, seq: TransitionSequence, anchor: Optional[int] = None,
                       span: Optional[int] = None) -> Path:
    """
    Path with window seed at anchor (default seq.base_index) and transitions
    seq.  A periodic sequence closes up when its period product is I
    (periodic) or -I with k even (skew-periodic); otherwise span periods
    are materialised each way.
    """
    k = seq.k
    anchor = seq.base_index if anchor is None else anchor
    if seq.period is None:
        lo, hi = seq.index_range()
        if not lo <= anchor <= hi + 1:
            raise RangeError(f"anchor {anchor} outside transition range {lo}..{hi}")
        left = [seq.at(anchor - 1 - t) for t in range(anchor - lo)]
        return path_from_word(k, seed, anchor, seq.word(anchor, hi), left)
    p = seq.period
    word = seq.word(anchor, anchor + p - 1)
    total = product_of_word(word, k)
    if total == identity(k):
        return path_from_word(k, seed, anchor, word, closure=Closure.periodic(p))
    if corner(k) == -1 and total == -identity(k):
        return path_from_word(k, seed, anchor, word, closure=Closure.skew_periodic(p))
    if span is None:
        span = get_env_int("SLK_PATH_SPAN", 12)
    reach = max(span, 1) * p
    log.warning("transition period product is not +-I; materialising %d columns each way", reach)
    left = [seq.at(anchor - 1 - t) for t in range(reach)]
    return path_from_word(k, seed, anchor, seq.word(anchor, anchor + reach - 1), left)


def shifted(seq: TransitionSequence, offset: int) -> TransitionSequence:
    """Sequence whose transition at i is seq's transition at i - offset."""
    return TransitionSequence(seq.k, seq.base_index + offset, seq.coeffs, seq.period)


def act(a: IntMatrix, gamma: Path) -> Path:
    if a.shape != (gamma.k, gamma.k):
        raise ShapeError(f"cannot act by {a.nrows}x{a.ncols} on a path in dimension {gamma.k}")
    require_sl(a, "acting matrix")
    return Path(gamma.k, gamma.base_index, tuple(a.apply(c) for c in gamma.columns), gamma.closure)


def normalize(gamma: Path, anchor: Optional[int] = None) -> Path:
    """Act so that the window at anchor (default base_index) becomes the identity."""
    anchor = gamma.base_index if anchor is None else anchor
    return act(unimodular_inverse(gamma.window(anchor)), gamma)


# ---- SL_k(Z) as J words ----
def shear_to_j_word(k: int, i: int, j: int, lam: int) -> List[JMatrix]:
    """J word of length 2k whose product is the shear with lam at (i, j)."""
    if i == j:
        raise ShapeError("shear needs i != j")
    if not (1 <= i <= k and 1 <= j <= k):
        raise ShapeError(f"shear position ({i},{j}) invalid for k={k}")
    row = (i - j) % k + 1
    coeffs = [0] * (k - 1)
    coeffs[row - 2] = lam if i < j else corner(k) * lam
    j0 = JMatrix.zero(k)
    return [j0] * (j - 1) + [JMatrix(k, tuple(coeffs))] + [j0] * (k - j) + [j0] * k


def _nearest_quotient(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def shears_of(b: IntMatrix) -> List[Tuple[int, int, int]]:
    """
    (i, j, lam) triples, 1-based, whose shear product in order equals b.
    Row reduction to the identity; each recorded row operation is inverted.
    """
    require_sl(b, "matrix to decompose")
    k = b.nrows
    a = b.to_lists()
    ops: List[Tuple[int, int, int]] = []

    def add(dst: int, src: int, mu: int) -> None:
        if mu == 0:
            return
        a[dst] = [x + mu * y for x, y in zip(a[dst], a[src])]
        ops.append((dst + 1, src + 1, mu))

    for c in range(k):
        for r in range(c + 1, k):
            while a[r][c] != 0:
                if a[c][c] == 0:
                    add(c, r, 1)
                    continue
                add(r, c, -_nearest_quotient(a[r][c], a[c][c]))
                if a[r][c] == 0:
                    break
                add(c, r, -_nearest_quotient(a[c][c], a[r][c]))

    negatives = [c for c in range(k) if a[c][c] == -1]
    for x, y in zip(negatives[0::2], negatives[1::2]):
        for _ in range(2):
            add(x, y, -1)
            add(y, x, 1)
            add(x, y, -1)

    for c in range(k - 1, 0, -1):
        for r in range(c):
            add(r, c, -a[r][c])

    if a != identity(k).to_lists():
        raise PathError(f"row reduction ended at {a}")
    return [(i, j, -mu) for i, j, mu in ops]


def slk_to_j_word(b: IntMatrix) -> List[JMatrix]:
    k = b.nrows
    triples = shears_of(b)
    word = list(concat(shear_to_j_word(k, i, j, lam) for i, j, lam in triples))
    log.debug("decomposed %dx%d matrix into %d shears, %d J matrices", k, k, len(triples), len(word))
    return word


# ---- joining ----
def _seam_is_direct(k: int, left: Sequence[Column], right: Sequence[Column]) -> bool:
    """All k-1 windows straddling left|right have determinant 1."""
    cols = list(left) + list(right)
    return all(det(from_columns(cols[t:t + k])) == 1 for t in range(1, k))


def _bridge(k: int, start: Sequence[Column], target: Sequence[Column],
            word: Optional[Sequence[JMatrix]]) -> List[Column]:
    """Columns strictly between the window start and the window target."""
    if word is None:
        if _seam_is_direct(k, start, target):
            return []
        word = slk_to_j_word(mul(unimodular_inverse(from_columns(start)), from_columns(target)))
        if len(word) < k:
            word = list(word) + [JMatrix.zero(k)] * (2 * k)
    cols, _ = _grow(k, list(start), word, ())
    if len(word) < k or [tuple(c) for c in cols[-k:]] != [tuple(c) for c in target]:
        raise ClosureError("bridging word does not reach the target window")
    return cols[k:len(cols) - k]


def join_paths(gamma: Path, delta: Path, m: int, n: int,
               bridge: Optional[Sequence[JMatrix]] = None,
               wrap: Optional[Sequence[JMatrix]] = None) -> Path:
    """
    Skew-periodic path whose period is gamma_1..gamma_m, a bridge into
    delta_1..delta_n, and a bridge back to the signed start of gamma.
    """
    k = gamma.k
    if delta.k != k:
        raise ShapeError(f"cannot join paths in dimensions {k} and {delta.k}")
    if m < k or n < k:
        raise ShapeError(f"join needs m, n >= k={k}; got m={m}, n={n}")
    g = [gamma.column(i) for i in range(1, m + 1)]
    d = [delta.column(i) for i in range(1, n + 1)]
    s = corner(k)
    head = [tuple(s * x for x in c) for c in g[:k]]
    lam = _bridge(k, g[-k:], d[:k], bridge)
    mu = _bridge(k, d[-k:], head, wrap)
    period = g + lam + d + mu
    log.debug("joined period: %d + %d + %d + %d columns", m, len(lam), n, len(mu))
    return Path(k, 1, tuple(period), Closure.skew_periodic(len(period)))


# ---- tilde ----
def tilde_coefficients(coeff_at: Callable[[int], Coeffs], i: int, k: int) -> Coeffs:
    """Coefficients of the tilde transition at i; reads transitions i..i+k-2."""
    s = 1 if k % 2 == 0 else -1
    return tuple(s * coeff_at(i + q - 2)[k - q] for q in range(2, k + 1))


def tilde_sequence(seq: TransitionSequence) -> TransitionSequence:
    k = seq.k
    if seq.period is not None:
        coeffs = tuple(tilde_coefficients(lambda x: seq.at(x).coeffs, i, k)
                       for i in range(seq.base_index, seq.base_index + seq.period))
        return TransitionSequence(k, seq.base_index, coeffs, seq.period)
    lo, hi = seq.index_range()
    last = hi - k + 2
    coeffs = tuple(tilde_coefficients(lambda x: seq.at(x).coeffs, i, k) for i in range(lo, last + 1))
    return TransitionSequence(k, lo, coeffs)


def untilde_sequence(seq: TransitionSequence) -> TransitionSequence:
    """
    Transitions J with tilde_sequence(J) == seq.  J_x's coefficient j_{c+2}
    is read off the tilde transition at x-k+c+2; on a finite sequence the
    coefficients with no such transition are set to 0.  On a periodic
    sequence this is the double tilde shifted by k-2.
    """
    k = seq.k
    s = 1 if k % 2 == 0 else -1

    def coeff(x: int, c: int) -> int:
        i = x - k + c + 2
        return s * seq.at(i).coeffs[k - c - 2] if seq.has(i) else 0

    if seq.period is not None:
        xs = range(seq.base_index, seq.base_index + seq.period)
    else:
        lo, hi = seq.index_range()
        xs = range(lo, hi + k - 1)
    coeffs = tuple(tuple(coeff(x, c) for c in range(k - 1)) for x in xs)
    return TransitionSequence(k, xs.start, coeffs, seq.period)


def tilde(gamma: Path) -> Path:
    seq = gamma.transition_sequence()
    if seq.period is None:
        lo, hi = seq.index_range()
        if hi - lo + 1 < gamma.k - 1:
            raise RangeError(f"tilde needs at least {gamma.k - 1} transitions, path has {hi - lo + 1}")
    seed = gamma.window(gamma.base_index).T
    return path_from_sequence(seed, tilde_sequence(seq))


# ---- periodicity ----
def _check_range(gamma: Path, p: int) -> Iterable[int]:
    if gamma.is_finite:
        lo, hi = gamma.index_range()
        return range(lo, hi - p + 1)
    return range(gamma.base_index, gamma.base_index + gamma.period)


def is_periodic(gamma: Path, p: int) -> bool:
    idx = _check_range(gamma, p)
    if len(idx) < gamma.k:
        return False
    return all(gamma.column(i) == gamma.column(i + p) for i in idx)


def is_skew_periodic(gamma: Path, p: int) -> bool:
    idx = _check_range(gamma, p)
    if len(idx) < gamma.k:
        return False
    s = corner(gamma.k)
    return all(gamma.column(i) == tuple(s * x for x in gamma.column(i + p)) for i in idx)
