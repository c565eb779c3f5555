from fractions import Fraction

import pytest
from hypothesis import strategies as st

from braidedsuq.coeff import GaussRational, LaurentPoly
from braidedsuq.ncalg import NCPoly
from braidedsuq.suq2 import make_system


@pytest.fixture(scope="session")
def sys11():
    return make_system(1, 1)


@pytest.fixture(scope="session")
def sys22():
    return make_system(2, 2)


@pytest.fixture(scope="session")
def sys33():
    return make_system(3, 3)


@pytest.fixture(scope="session")
def sys11_rot():
    return make_system(1, 1, with_rotation=True)


@pytest.fixture(scope="session")
def braided22():
    return make_system(2, 2, conjugates="braided")


small_fracs = st.fractions(min_value=-4, max_value=4, max_denominator=6)
gauss = st.builds(GaussRational, small_fracs, small_fracs)
laurent = st.dictionaries(st.integers(-4, 4), gauss, max_size=4).map(LaurentPoly)


def words_of(sys, max_len=6):
    return st.lists(st.sampled_from(sys.generators()), max_size=max_len).map(tuple)


def ncpolys_of(sys, max_terms=3, max_len=4):
    return st.dictionaries(words_of(sys, max_len), laurent, max_size=max_terms).map(NCPoly)
