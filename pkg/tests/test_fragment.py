import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairnli.comptree import input_space_size
from fairnli.fragment import (
    CONTRADICTION,
    ENTAILMENT,
    NEUTRAL,
    SLOTS,
    SUBTASK_IDS,
    MalformedSentence,
    Sentence,
    Vocabulary,
    build_aligned_tree,
    count_pair_space,
    worked_pair,
    in_fragment,
    label_pair,
    negation_count,
    negation_parity,
    pair_input,
    rel_to_label,
    sentences,
    split_input,
)
from fairnli.natlog import ALT, COV, EQ, FWD, IND, NEG, REV


def test_vocabulary_classes():
    v = Vocabulary(3)
    assert v.subject_nouns == ("snoun_000", "snoun_001", "snoun_002")
    assert v.adverbs[0] == "ε" and len(v.adverbs) == 4
    assert v.open_words("adj_o") == ("oadj_000", "oadj_001", "oadj_002")
    assert v.sentence_count() == 4 * 4 * 3 * 2 * 4 * 3 * 4 * 4 * 3
    with pytest.raises(ValueError):
        Vocabulary(0)


def test_sentence_parsing_and_check():
    s = Sentence.from_tokens("some ε snoun_000 not adv_000 verb_001 every oadj_000 onoun_001")
    assert s.neg == "not" and s.adv == "adv_000"
    assert str(s).split() == list(s.tokens)
    s.check(Vocabulary(2))
    with pytest.raises(MalformedSentence):
        s.check(Vocabulary(1))
    with pytest.raises(MalformedSentence):
        Sentence.from_tokens("some dog barks")


def test_worked_pair():
    p, h, vocab = worked_pair()
    ex = label_pair(p, h, build_aligned_tree(vocab))
    assert ex.relation == FWD and ex.label == ENTAILMENT
    got = {s["task"]: s["label"] for s in ex.subtasks}
    assert got == {
        "sentence": "entailment",
        "negated_vp": "|",
        "vp": "⊏",
        "adverb_verb": "⊏",
        "subject_np": "≡",
        "object_np": "⊐",
        "subject_adjective": "≡",
        "subject_noun": "≡",
        "adverb": "⊏",
        "verb": "≡",
        "object_adjective": "⊐",
        "object_noun": "≡",
    }
    assert [s["task"] for s in ex.subtasks] == list(SUBTASK_IDS)
    assert {s["task"]: s["len_p"] for s in ex.subtasks}["negated_vp"] == 6


def test_pair_input_round_trip():
    p, h, _ = worked_pair()
    x = pair_input(p, h)
    assert len(x) == 18 and x[0] == "every" and x[1] == "no"
    assert split_input(x) == (p, h)


def test_rel_to_label():
    assert [rel_to_label(r) for r in (EQ, FWD, REV, NEG, ALT, COV, IND)] == [
        ENTAILMENT, ENTAILMENT, NEUTRAL, CONTRADICTION, CONTRADICTION, NEUTRAL, NEUTRAL,
    ]


def test_trimmed_site_domains(tree4):
    for node in ("subj_np", "adv_verb", "obj_np"):
        assert set(tree4.dom[node]) == {EQ, FWD, REV, IND}
    assert len(tree4.dom["root"]) == 7


def test_count_pair_space():
    assert count_pair_space(1) == (4 * 2 * 1 * 2 * 2 * 1 * 4 * 2 * 1) ** 2
    for n in (1, 2, 3):
        assert count_pair_space(n) == input_space_size(build_aligned_tree(Vocabulary(n)))
        assert count_pair_space(n) == Vocabulary(n).sentence_count() ** 2
    assert count_pair_space(100) > 10**26
    with pytest.raises(ValueError):
        count_pair_space(0)


def test_sentences_enumeration():
    v = Vocabulary(1)
    assert sum(1 for _ in sentences(v)) == v.sentence_count()


def test_in_fragment(vocab4):
    p, h, _ = worked_pair()
    assert in_fragment(p, h, vocab4)
    bad = Sentence("some", "ε", "cat", "ε", "ε", "verb_000", "some", "ε", "onoun_000")
    assert not in_fragment(bad, h, vocab4)


def _random_sentence(rng, vocab):
    return Sentence(*(rng.choice(vocab.slot_domain(s)) for s in SLOTS))


def test_negation_count():
    s = Sentence.from_tokens("no ε snoun_000 not ε verb_000 not_every ε onoun_000")
    t = Sentence.from_tokens("some ε snoun_000 ε ε verb_000 every ε onoun_000")
    assert negation_count(s, t) == 3
    assert negation_parity(s, t) == 1


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9))
def test_parity_law(seed):
    # contradictions have an odd number of negative tokens, entailments an even number
    rng = random.Random(seed)
    vocab = Vocabulary(4)
    tree = _tree_cache(vocab)
    p, h = _random_sentence(rng, vocab), _random_sentence(rng, vocab)
    # make sites agree often enough to see all labels
    if rng.random() < 0.8:
        h = Sentence(h.q_s, p.adj_s, p.n_s, h.neg, p.adv, p.v, h.q_o, p.adj_o, p.n_o)
    ex = label_pair(p, h, tree)
    if ex.label == CONTRADICTION:
        assert negation_parity(p, h) == 1
    elif ex.label == ENTAILMENT:
        assert negation_parity(p, h) == 0


_CACHE = {}


def _tree_cache(vocab):
    if vocab.n_open not in _CACHE:
        _CACHE[vocab.n_open] = build_aligned_tree(vocab)
    return _CACHE[vocab.n_open]


def test_identical_sentences_are_equivalent(tree4, vocab4):
    rng = random.Random(3)
    for _ in range(50):
        s = _random_sentence(rng, vocab4)
        assert label_pair(s, s, tree4).relation == EQ


def test_label_pair_rejects_unknown_tokens(tree4):
    p, h, _ = worked_pair()
    bad = Sentence("some", "ε", "cat", "ε", "ε", "verb_000", "some", "ε", "onoun_000")
    with pytest.raises(MalformedSentence):
        label_pair(bad, h, tree4)
