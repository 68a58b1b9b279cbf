import numpy as np
import pytest

from ctmark.complexity import dataset_stats
from ctmark.synth import synthetic_corpus


@pytest.fixture(scope="session")
def mini_corpus():
    """Small fast corpus for codec/bench tests; 128x128 keeps runtimes low."""
    return synthetic_corpus(4, shape=(128, 128), seed=3)


@pytest.fixture(scope="session")
def mini_stats(mini_corpus):
    return dataset_stats(mini_corpus.values())


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
