import random

import pytest
from hypothesis import given

from conftest import closed_paths, consecutive_matrices
from src.common.errors import FriezeError, PreconditionError, RangeError
from src.common.friezes import (
    Frieze, frieze_from_path, frieze_to_tiling, is_valid_frieze, matrix_of_frieze, phi_a, phi_iota,
    plucker_frieze_eval, quiddity_sequence, tiling_is_from_frieze,
)
from src.common.linalg import IntMatrix, identity, submatrix
from src.common.paths import Closure, Path
from src.common.pluecker import j_entry_formula
from src.common.positivity import sample_consecutive_matrix
from src.common.tilings import is_skew_col_periodic, is_skew_row_periodic, window

TYPES = [(2, 5), (3, 6), (3, 7), (4, 7)]


def test_shape_errors():
    with pytest.raises(FriezeError):
        Frieze(1, ((1,),), 3)
    with pytest.raises(FriezeError, match="no nontrivial rows"):
        Frieze(2, (), 3)
    with pytest.raises(FriezeError, match="needs 2 rows"):
        Frieze(2, ((1, 1, 1, 1, 1),), 5)
    with pytest.raises(FriezeError, match="one period"):
        Frieze(2, ((1, 1, 1, 1), (1, 1, 1, 1, 1)), 5)
    with pytest.raises(FriezeError):
        Frieze(2, ((1,) * 5, (1,) * 5), 5, base=0)
    with pytest.raises(FriezeError):
        Frieze(2, ((1, 2), (3,)))


def test_borders(friezes_25):
    f = friezes_25[0]
    assert f.width == 2
    for r in f.positions():
        assert f.entry(r, 1) == 0
        assert f.entry(r, 2) == 1
        assert f.entry(r, 3) == f.rows[0][r - 1]
        assert f.entry(r, 5) == 1
        assert f.entry(r, 6) == 0
    assert f.entry(0, 3) == f.entry(5, 3)
    with pytest.raises(RangeError):
        f.entry(1, 0)


def test_all_ones_is_not_a_frieze():
    f = Frieze(2, ((1,) * 5, (1,) * 5), 5)
    assert not is_valid_frieze(f)
    with pytest.raises(FriezeError, match="not an SL_2-frieze"):
        frieze_to_tiling(f)


def test_conway_coxeter_quiddity(friezes_25, friezes_26):
    for f in friezes_25 + friezes_26:
        n = f.n
        q = [v[0] for v in quiddity_sequence(f)]
        row = list(f.rows[0])
        assert sum(q) == 3 * n - 6
        assert q in [row[s:] + row[:s] for s in range(n)]


def test_all_ones_58_quiddity():
    f = Frieze(5, ((1,) * 8, (1,) * 8), 8)
    assert is_valid_frieze(f)
    assert quiddity_sequence(f) == [(1, 0, 0, 0, 1)] * 8


@pytest.mark.parametrize("k,n", TYPES)
def test_pluecker_frieze_gives_a_frieze_tiling(k, n):
    @given(consecutive_matrices(k, n))
    def check(a):
        f = plucker_frieze_eval(a)
        assert (f.k, f.n) == (k, n)
        t = frieze_to_tiling(f)
        assert tiling_is_from_frieze(t)
        assert is_skew_row_periodic(t, n) and is_skew_col_periodic(t, n)
        for i in range(1, n + 1):
            for j in range(i, i + 2 * n):
                assert t.entry(i, j) == f.tiling_entry(i, j)

    check()


@pytest.mark.parametrize("k,n", TYPES)
def test_frieze_reads_back_from_its_path(k, n):
    @given(consecutive_matrices(k, n))
    def check(a):
        f = plucker_frieze_eval(a)
        gamma = phi_a(a)
        assert frieze_from_path(gamma) == f
        assert Frieze.from_tiling(phi_iota(gamma), n) == f

    check()


@pytest.mark.parametrize("k,n", TYPES)
def test_matrix_of_frieze(k, n):
    @given(consecutive_matrices(k, n))
    def check(a):
        f = plucker_frieze_eval(a)
        b = matrix_of_frieze(f)
        assert submatrix(b, range(k), range(k)) == identity(k)
        assert plucker_frieze_eval(b) == f

    check()


@pytest.mark.parametrize("k,n", [(2, 6), (3, 7), (4, 8)])
def test_quiddity_entries_are_pluecker_coordinates(k, n):
    @given(consecutive_matrices(k, n))
    def check(a):
        q = quiddity_sequence(plucker_frieze_eval(a))
        for p in range(1, n + 1):
            want = tuple((-1) ** (k - x) * j_entry_formula(a, p, x - 1) for x in range(2, k + 1))
            assert q[p - 1] == want

    check()


def test_phi_a_needs_consecutive_minors():
    with pytest.raises(PreconditionError):
        phi_a(IntMatrix.of([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]]))


def test_frieze_from_finite_path():
    gamma = Path(2, 1, ((1, 0), (0, 1), (-1, 1)), Closure.finite())
    with pytest.raises(PreconditionError):
        frieze_from_path(gamma)


@pytest.mark.parametrize("k", [2, 3])
def test_infinite_periodic_frieze(k):
    @given(closed_paths(k))
    def check(gamma):
        t = phi_iota(gamma)
        p = gamma.period
        depth = k + 2
        rows = tuple(tuple(t.entry(r, r + m - 1) for r in range(1, p + 1)) for m in range(k + 1, k + 1 + depth))
        f = Frieze(k, rows, period=p)
        assert f.width == "infinite"
        assert f.entry(p + 1, k + 1) == f.entry(1, k + 1)
        u = frieze_to_tiling(f)
        size = 3 * k
        assert window(u, 1, 1, size, size) == window(t, 1, 1, size, size)
        with pytest.raises(RangeError):
            f.tiling_entry(2, 1)

    check()


def test_infinite_frieze_needs_k_rows():
    f = Frieze(3, ((1, 1, 1),), period=3)
    with pytest.raises(FriezeError, match="at least 3"):
        frieze_to_tiling(f)


def test_infinite_frieze_rows_below_storage():
    f = Frieze(2, ((2, 2), (3, 3)), base=1)
    assert f.entry(1, 4) == 3
    with pytest.raises(RangeError):
        f.entry(1, 5)
    with pytest.raises(RangeError):
        f.entry(3, 3)


def test_seeded_sample_is_reproducible():
    a1, f1 = sample_consecutive_matrix(3, 7, random.Random(4))
    a2, f2 = sample_consecutive_matrix(3, 7, random.Random(4))
    assert a1 == a2 and f1 == f2
    assert plucker_frieze_eval(a1) == f1


@pytest.mark.parametrize("k,n", TYPES)
def test_rotation_is_a_frieze_of_the_same_type(k, n):
    _, f = sample_consecutive_matrix(k, n, random.Random(n))
    for s in (1, n - 1, n + 2):
        g = f.rotated(s)
        assert is_valid_frieze(g)
        assert all(g.entry(r, k + 1) == f.entry(r + s, k + 1) for r in g.positions())
    assert f.rotated(n) == f


def test_infinite_friezes_do_not_rotate():
    with pytest.raises(FriezeError):
        Frieze(2, ((2, 2), (3, 3))).rotated(1)


@pytest.mark.parametrize("k", [2, 3])
def test_infinite_frieze_stored_on_a_finite_range(k):
    @given(closed_paths(k))
    def check(gamma):
        t = phi_iota(gamma)

        def rows(base):
            return tuple(tuple(t.entry(r, r + m - 1) for r in range(base, base + 4 * k))
                         for m in range(k + 1, 2 * k + 2))

        assert frieze_to_tiling(Frieze(k, rows(2 - k), base=2 - k)).central == t.central
        with pytest.raises(RangeError, match=f"at or before {2 - k}"):
            frieze_to_tiling(Frieze(k, rows(2), base=2))

    check()
