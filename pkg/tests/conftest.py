import numpy as np
import pytest

from posetcoh.corpus import build_corpus, circle_model, directed_model, figure_eight_model


@pytest.fixture(scope="session")
def circle64():
    return circle_model(6, 4)


@pytest.fixture(scope="session")
def circle42():
    return circle_model(4, 2)


@pytest.fixture(scope="session")
def fig8():
    return figure_eight_model(2)


@pytest.fixture(scope="session")
def directed5():
    return directed_model(5)


@pytest.fixture(scope="session")
def corpus():
    return build_corpus(seed=0, n_random=20)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
