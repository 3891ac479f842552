import pytest

from spinacc.corpus_checks import Corpus


@pytest.fixture(scope="session")
def corpus():
    return Corpus(seed=0, primes=2)
