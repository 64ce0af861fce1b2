import numpy as np
import pytest

from anosov import (
    FejerKernel,
    GridSpec,
    PerturbedCat,
    cat_map,
    standard_observable,
)


@pytest.fixture(scope="session")
def std_g():
    return standard_observable()


@pytest.fixture(scope="session")
def perturbed_map():
    return PerturbedCat(0.01, "section7")


@pytest.fixture(scope="session")
def linear_cat():
    return cat_map()


@pytest.fixture(scope="session")
def fejer():
    return FejerKernel()


@pytest.fixture(scope="session")
def small_grid():
    return GridSpec(16, 128)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240612)
