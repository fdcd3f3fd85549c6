import os
import random
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from env_utils import get_env_bool, get_env_str
from src.common.paths import JMatrix
from src.common.positivity import enumerate_positive_friezes
from src.common.reference_cases import (
    block_example_paths, random_closed_path, random_consecutive_matrix, random_finite_path, random_sl,
)

for _name, _examples in (("default", 25), ("ci", 100), ("thorough", 400)):
    settings.register_profile(_name, deadline=None, max_examples=_examples,
                              suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile(get_env_str("SLK_HYPOTHESIS_PROFILE", "default"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running enumeration targets, run with SLK_STRETCH=true")


def pytest_collection_modifyitems(config, items):
    if get_env_bool("SLK_STRETCH"):
        return
    skip = pytest.mark.skip(reason="set SLK_STRETCH=true to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


# ---- strategies ----
rngs = st.integers(min_value=0, max_value=2 ** 32 - 1).map(random.Random)


def sl_matrices(k):
    return rngs.map(lambda r: random_sl(k, r))


def j_matrices(k, lo=-3, hi=3):
    return st.tuples(*[st.integers(lo, hi)] * (k - 1)).map(lambda c: JMatrix(k, c))


def j_words(k, min_size=0, max_size=8):
    return st.lists(j_matrices(k), min_size=min_size, max_size=max_size)


def finite_paths(k, length=None):
    return rngs.map(lambda r: random_finite_path(k, length or 3 * k + 2, r))


def closed_paths(k):
    return rngs.map(lambda r: random_closed_path(k, r))


def path_pairs(k):
    return rngs.map(lambda r: (random_closed_path(k, r), random_closed_path(k, r)))


def consecutive_matrices(k, n):
    return rngs.map(lambda r: random_consecutive_matrix(k, n, r))


# ---- fixtures ----
@pytest.fixture(scope="session")
def block_example():
    return block_example_paths()


@pytest.fixture(scope="session")
def friezes_25():
    return enumerate_positive_friezes(2, 5).friezes


@pytest.fixture(scope="session")
def friezes_26():
    return enumerate_positive_friezes(2, 6).friezes
