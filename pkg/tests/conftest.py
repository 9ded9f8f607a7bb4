import numpy as np
import pytest

from rhps_sim.materials import cucl_defaults
from rhps_sim import stack as st


@pytest.fixture(scope="session")
def cucl():
    return cucl_defaults()


@pytest.fixture(scope="session")
def exc(cucl):
    return cucl[0]


@pytest.fixture(scope="session")
def bx(cucl):
    return cucl[1]


@pytest.fixture(scope="session")
def film_vacuum(exc):
    return st.film_stack(700.0, exc.eps_bg)


@pytest.fixture(scope="session")
def film_matched(exc):
    return st.film_stack(700.0, exc.eps_bg, exc.eps_bg)


@pytest.fixture(scope="session")
def dbr_cavity(exc):
    return st.build_dbr_cavity(120.0, 4, 16, exc.hw_t, exc.eps_bg)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
