import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fairnli.datagen import CorpusConfig, emit_corpus  # noqa: E402
from fairnli.fragment import Vocabulary, build_aligned_tree  # noqa: E402


@pytest.fixture(scope="session")
def vocab4():
    return Vocabulary(4)


@pytest.fixture(scope="session")
def tree4(vocab4):
    return build_aligned_tree(vocab4)


DESK = CorpusConfig(n_open=4, ratio="0", train=5000, dev=500, test=500, seed=0, oracle_samples=30)


@pytest.fixture(scope="session")
def desk_corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("desk")
    manifest = emit_corpus(DESK, out)
    return out, manifest
