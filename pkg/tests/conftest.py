import pytest

from farmgate.lexicon import load_bundled_lexicon
from farmgate.ontology import load_bundled_ontology


@pytest.fixture(scope="session")
def ontology():
    return load_bundled_ontology()


@pytest.fixture(scope="session")
def lexicon():
    return load_bundled_lexicon()
