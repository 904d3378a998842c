import sys
from pathlib import Path

import pytest

from maasar.corpus import Decision
from maasar.lexicon import load_lexicon
from maasar.synthetic import generate_corpus

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def numerals(lexicon):
    return lexicon.numerals


@pytest.fixture(scope="session")
def synthetic(lexicon):
    return generate_corpus(lexicon.numerals, num_decisions=24, seed=7)


@pytest.fixture
def decision_of():
    def make(*sentences: str, case_id: str = "case") -> Decision:
        return Decision.from_text(case_id, " ".join(sentences))

    return make
