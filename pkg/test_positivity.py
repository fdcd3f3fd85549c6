import random

import pytest

from src.common.duality import gale_dual
from src.common.errors import FriezeError, PreconditionError, ShapeError
from src.common.friezes import Frieze, is_positive_frieze, is_valid_frieze, matrix_of_frieze, phi_a
from src.common.paths import Closure, Path
from src.common.pluecker import consecutive_minors
from src.common.positivity import (
    alternates_in_sign, alternating_converse_counterexample, enumerate_positive_friezes,
    positivity_equivalence_check, quiddity_counterexample_search, random_positive_instances,
    sample_consecutive_matrix, theorem_scope,
)


@pytest.mark.parametrize("n,count", [(5, 5), (6, 14), (7, 42)])
def test_sl2_counts_are_catalan(n, count):
    result = enumerate_positive_friezes(2, n)
    assert result.count == count
    assert result.complete
    assert (result.min_entry, result.bound) == (1, n - 2)
    assert all(is_positive_frieze(f) for f in result.friezes)
    assert result.summary()["count"] == count


def test_enumeration_is_sorted_and_distinct(friezes_26):
    keys = [f.rows for f in friezes_26]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_parallel_enumeration_matches():
    assert enumerate_positive_friezes(2, 6, jobs=2).friezes == enumerate_positive_friezes(2, 6, jobs=1).friezes


def test_bounded_enumeration_is_not_complete():
    small = enumerate_positive_friezes(3, 6, bound=3)
    result = enumerate_positive_friezes(3, 6, bound=6)
    assert not result.complete
    assert result.bound == 6 and result.min_entry == 0
    assert result.count > 0
    assert all(f.k == 3 and is_positive_frieze(f) for f in result.friezes)
    assert set(small.friezes) <= set(result.friezes)


def test_enumeration_needs_rows():
    with pytest.raises(ShapeError):
        enumerate_positive_friezes(3, 4)


def test_counterexample():
    cx = alternating_converse_counterexample()
    assert cx.position == (3, 6)
    assert cx.value == -1
    assert cx.matrix.det() == -1
    report = alternates_in_sign(cx.path)
    assert report.alternates
    assert report.excluded == (1, 2, 3)
    assert report.checked == (4, 5, 6, 7)


def test_alternation_of_positive_sl3_friezes(friezes_25):
    friezes = [gale_dual(f) for f in friezes_25] + enumerate_positive_friezes(3, 6).friezes
    for g in friezes:
        assert g.k == 3 and is_positive_frieze(g)
        assert alternates_in_sign(phi_a(matrix_of_frieze(g)))


def test_alternation_failure_is_reported():
    gamma = Path(3, 1, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)), Closure.finite())
    report = alternates_in_sign(gamma)
    assert not report
    assert report.failures == [4]


def test_alternation_is_for_sl3():
    gamma = Path(2, 1, ((1, 0), (0, 1)), Closure.finite())
    with pytest.raises(PreconditionError):
        alternates_in_sign(gamma)


def test_theorem_scope():
    assert theorem_scope(5, 8) == "exception_all_ones"
    assert theorem_scope(4, 7) is not None
    assert theorem_scope(3, 9) is None
    assert theorem_scope(7, 9) is None


def test_all_ones_58_is_the_documented_exception():
    report = positivity_equivalence_check(Frieze(5, ((1,) * 8, (1,) * 8), 8))
    assert report.frieze_positive and not report.quiddity_positive
    assert report.verdict == "documented_exception"
    assert report.as_dict()["verdict"] == "documented_exception"


def test_equivalence_on_sl2_friezes(friezes_25, friezes_26):
    for f in friezes_25 + friezes_26:
        assert positivity_equivalence_check(f).verdict == "holds"


@pytest.mark.parametrize("k,n", [(4, 6), (3, 5), (2, 7)])
def test_equivalence_on_random_positive_instances(k, n):
    sample = random_positive_instances(k, n, 6, seed=1)
    assert len(sample) == 6
    for f in sample:
        assert (f.k, f.n) == (k, n)
        assert is_valid_frieze(f)
        assert positivity_equivalence_check(f).verdict == "holds"


@pytest.mark.parametrize("k,n", [(3, 6), (4, 7)])
def test_equivalence_on_sampled_positive_friezes(k, n):
    sample = random_positive_instances(k, n, 200, seed=3, bound=6)
    assert len(sample) == 200
    for f in set(sample):
        assert (f.k, f.n) == (k, n)
        assert is_positive_frieze(f)
        assert is_valid_frieze(f)
    assert all(positivity_equivalence_check(f).verdict == "holds" for f in sample)


def test_sampled_instances_are_reproducible():
    assert random_positive_instances(3, 7, 5, seed=8) == random_positive_instances(3, 7, 5, seed=8)


def test_random_instances_need_a_positive_frieze_in_range():
    with pytest.raises(FriezeError):
        random_positive_instances(3, 6, 1, bound=0)


def test_equivalence_outside_the_theorem():
    f = random_positive_instances(7, 9, 1)[0]
    assert positivity_equivalence_check(f).verdict == "no_claim"


def test_equivalence_needs_finite_type():
    with pytest.raises(PreconditionError):
        positivity_equivalence_check(Frieze(2, ((2, 2), (3, 3))))


def test_no_quiddity_counterexample_for_small_sl4():
    assert quiddity_counterexample_search(4, 7, 2) == []


def test_sampled_matrix_has_unit_consecutive_minors():
    for k, n in ((2, 5), (3, 6), (4, 8)):
        a, f = sample_consecutive_matrix(k, n, random.Random(k * n))
        assert consecutive_minors(a) == [1] * n
        assert (f.k, f.n) == (k, n)


def test_sampling_reports_empty_range():
    with pytest.raises(FriezeError):
        sample_consecutive_matrix(2, 5, random.Random(0), lo=5, hi=6)


@pytest.mark.slow
def test_sl3_8_count():
    assert enumerate_positive_friezes(3, 8, bound=6, min_entry=0).count == 26952


@pytest.mark.slow
def test_sl5_8_count():
    assert enumerate_positive_friezes(5, 8, bound=6, min_entry=0).count == 26953
