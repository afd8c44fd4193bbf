import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairnli import oracle
from fairnli.datagen import SITE_NODES, SITE_RELATIONS, propose_pair
from fairnli.fragment import Sentence, Vocabulary, build_aligned_tree, label_pair
from fairnli.oracle import (
    CONTRADICTORY,
    ENTAILED,
    NEUTRAL_VERDICT,
    UNKNOWN,
    Model,
    OracleConfig,
    adjudicate,
    check_agreement,
    evaluate_sentence,
    kernels,
)
from fairnli.oracle import _models

VOCAB = Vocabulary(4)


def _pair(rng):
    return propose_pair(VOCAB, [rng.choice(SITE_RELATIONS) for _ in SITE_NODES], rng)


def _backends():
    out = [kernels("numpy")]
    try:
        out.append(kernels("cython"))
    except ImportError:
        pass
    return out


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 4))
def test_kernels_match_reference(seed, k):
    rng = random.Random(seed)
    p, h = _pair(rng)
    lex = _models.pair_lexicon(p, h)
    U, B = _models.sample(lex, k, 64, np.random.default_rng(seed))
    sp, sh = lex.spec(p), lex.spec(h)
    expected_p = [evaluate_sentence(Model.from_masks(k, lex, U[i], B[i]), p) for i in range(64)]
    expected_h = [evaluate_sentence(Model.from_masks(k, lex, U[i], B[i]), h) for i in range(64)]
    for kern in _backends():
        gp, gh = kern.eval_pair(U, B, k, sp, sh)
        assert list(gp) == expected_p
        assert list(gh) == expected_h
        assert list(kern.eval_sentence(U, B, k, sp)) == expected_p


def test_backend_is_selected():
    assert oracle.BACKEND in ("cython", "numpy")


def test_forced_numpy_fallback():
    env = dict(os.environ, FAIRNLI_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import fairnli.oracle as o; print(o.BACKEND)"], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_enumerate_range_covers_space():
    p = Sentence.from_tokens("some ε snoun_000 ε ε verb_000 some ε onoun_000")
    lex = _models.pair_lexicon(p, p)
    k = 2
    n = _models.space_size(lex, k)
    U, B = _models.enumerate_range(lex, k, 0, n)
    rows = {tuple(u) + tuple(b) for u, b in zip(U.tolist(), B.tolist())}
    assert len(rows) == n
    nu, nb = _models.option_counts(k)
    assert U.min() >= 1 and U.max() <= nu and B.min() >= 1 and B.max() <= nb


def test_properness_modes():
    p = Sentence.from_tokens("some sadj_000 snoun_000 ε ε verb_000 some ε onoun_000")
    lex = _models.pair_lexicon(p, p)
    masks = {"sadj_000": 0b001, "snoun_000": 0b110, "onoun_000": 0b011}
    disjoint = np.array([[masks[t] for t in lex.unary]], dtype=np.int64)
    masks["sadj_000"] = 0b110  # equal to the noun: non-empty but not a strict subset
    same = np.array([[masks[t] for t in lex.unary]], dtype=np.int64)
    B = np.array([[0b0001]], dtype=np.int64)
    assert _models.valid(disjoint, B, lex, "lexical").all()
    assert not _models.valid(disjoint, B, lex, "derived").any()
    assert _models.valid(same, B, lex, "derived").all()
    assert not _models.valid(same, B, lex, "proper").any()
    with pytest.raises(ValueError):
        _models.valid(same, B, lex, "bogus")


def _s(text):
    return Sentence.from_tokens(text)


def test_de_morgan_by_oracle():
    some = _s("some ε snoun_000 ε ε verb_000 some ε onoun_000")
    every_not = _s("every ε snoun_000 not ε verb_000 some ε onoun_000")
    assert adjudicate(some, every_not).kind == CONTRADICTORY
    not_every = _s("not_every ε snoun_000 ε ε verb_000 some ε onoun_000")
    some_not = _s("some ε snoun_000 not ε verb_000 some ε onoun_000")
    assert adjudicate(not_every, some_not).kind == ENTAILED
    assert adjudicate(some_not, not_every).kind == ENTAILED


def test_neutral_pair_has_both_witnesses():
    p = _s("some ε snoun_000 ε ε verb_000 some ε onoun_000")
    h = _s("some ε snoun_001 ε ε verb_000 some ε onoun_000")
    v = adjudicate(p, h)
    assert v.kind == NEUTRAL_VERDICT
    assert evaluate_sentence(v.witness_both, p) and evaluate_sentence(v.witness_both, h)
    assert evaluate_sentence(v.witness_premise_only, p) and not evaluate_sentence(v.witness_premise_only, h)
    assert v.to_dict()["witness_p_and_h"]["universe"] >= 2


def test_zero_budget_is_unknown():
    p = _s("some ε snoun_000 ε ε verb_000 some ε onoun_000")
    v = adjudicate(p, p, OracleConfig(budget=0))
    assert v.kind == UNKNOWN and v.models_checked == 0
    assert check_agreement(p, p, "entailment", v).consistent


def test_max_universe_limit():
    p = _s("some ε snoun_000 ε ε verb_000 some ε onoun_000")
    with pytest.raises(ValueError):
        adjudicate(p, p, OracleConfig(max_universe=8))


def test_wrong_label_yields_checked_counterexample():
    p = _s("some ε snoun_000 ε ε verb_000 some ε onoun_000")
    h = _s("every ε snoun_000 ε ε verb_000 some ε onoun_000")
    v = adjudicate(p, h)
    a = check_agreement(p, h, "entailment", v)
    assert not a.consistent and a.counterexample is not None
    assert evaluate_sentence(a.counterexample, p) and not evaluate_sentence(a.counterexample, h)
    assert a.to_dict()["counterexample"]["universe"] >= 2


def test_search_is_deterministic():
    p = _s("every sadj_000 snoun_000 not adv_000 verb_000 some ε onoun_000")
    h = _s("some ε snoun_001 ε ε verb_000 no oadj_000 onoun_000")
    a, b = adjudicate(p, h, OracleConfig(seed=4)), adjudicate(p, h, OracleConfig(seed=4))
    assert a.to_dict() == b.to_dict()


def test_model_violations():
    m = Model(2, {"a": frozenset(), "b": frozenset({0})}, {"r": frozenset({(0, 0), (0, 1), (1, 0), (1, 1)})})
    assert sorted(m.violations()) == ["a empty or universal", "r empty or universal"]


def test_missing_extension():
    m = Model(2, {}, {})
    with pytest.raises(oracle.MissingExtension):
        evaluate_sentence(m, _s("some ε snoun_000 ε ε verb_000 some ε onoun_000"))


def test_agreement_on_random_pairs():
    rng = random.Random(5)
    tree = build_aligned_tree(VOCAB)
    for _ in range(150):
        p, h = _pair(rng)
        ex = label_pair(p, h, tree)
        assert check_agreement(p, h, ex.label, adjudicate(p, h)).consistent
