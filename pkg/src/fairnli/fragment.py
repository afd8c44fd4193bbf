"""The nine-slot sentence fragment and its aligned composition tree.

Sentences have the shape ``Q_S Adj_S N_S Neg Adv V Q_O Adj_O N_O``.  A
premise/hypothesis pair is fed to one tree whose leaves are aligned token
pairs; PROJ nodes map token pairs to joint signatures, REL nodes compare
nouns or verbs, and COMP nodes apply signatures to relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .comptree import CompositionTree, OrderedTree, trace, trim_domains
from .natlog import (
    EPSILON,
    EQ,
    IND,
    QUANTIFIERS,
    RELATIONS,
    Relation,
    MODIFIER_SIGNATURES,
    compose_binary,
    modifier_joint,
    negation_signature,
    quantifier_joint,
)

ENTAILMENT, CONTRADICTION, NEUTRAL = "entailment", "contradiction", "neutral"
LABELS = (ENTAILMENT, CONTRADICTION, NEUTRAL)
NEGATIONS = ("not", EPSILON)
NEGATIVE_TOKENS = frozenset({"not", "no", "not_every"})

SLOTS = ("q_s", "adj_s", "n_s", "neg", "adv", "v", "q_o", "adj_o", "n_o")
MODIFIER_SLOTS = ("adj_s", "adv", "adj_o")
HEAD_OF = {"adj_s": "n_s", "adv": "v", "adj_o": "n_o"}


class MalformedSentence(ValueError):
    pass


@dataclass(frozen=True)
class Vocabulary:
    """Open classes of synthetic tokens plus the fixed closed classes."""

    n_open: int = 100
    subject_nouns: tuple = field(init=False)
    object_nouns: tuple = field(init=False)
    verbs: tuple = field(init=False)
    subject_adjectives: tuple = field(init=False)
    object_adjectives: tuple = field(init=False)
    adverbs: tuple = field(init=False)

    def __post_init__(self):
        if self.n_open < 1:
            raise ValueError("n_open must be at least 1")

        def make(prefix):
            return tuple(f"{prefix}_{i:03d}" for i in range(self.n_open))

        object.__setattr__(self, "subject_nouns", make("snoun"))
        object.__setattr__(self, "object_nouns", make("onoun"))
        object.__setattr__(self, "verbs", make("verb"))
        object.__setattr__(self, "subject_adjectives", (EPSILON,) + make("sadj"))
        object.__setattr__(self, "object_adjectives", (EPSILON,) + make("oadj"))
        object.__setattr__(self, "adverbs", (EPSILON,) + make("adv"))

    quantifiers = QUANTIFIERS
    negations = NEGATIONS

    def slot_domain(self, slot: str) -> tuple:
        return {
            "q_s": QUANTIFIERS,
            "adj_s": self.subject_adjectives,
            "n_s": self.subject_nouns,
            "neg": NEGATIONS,
            "adv": self.adverbs,
            "v": self.verbs,
            "q_o": QUANTIFIERS,
            "adj_o": self.object_adjectives,
            "n_o": self.object_nouns,
        }[slot]

    def open_words(self, slot: str) -> tuple:
        """Domain of ``slot`` without ε."""
        return tuple(w for w in self.slot_domain(slot) if w != EPSILON)

    def sentence_count(self) -> int:
        n = 1
        for s in SLOTS:
            n *= len(self.slot_domain(s))
        return n


@dataclass(frozen=True)
class Sentence:
    q_s: str
    adj_s: str
    n_s: str
    neg: str
    adv: str
    v: str
    q_o: str
    adj_o: str
    n_o: str

    @classmethod
    def from_tokens(cls, tokens: Sequence[str] | str) -> "Sentence":
        if isinstance(tokens, str):
            tokens = tokens.split()
        if len(tokens) != 9:
            raise MalformedSentence(f"expected 9 tokens, got {len(tokens)}: {tokens!r}")
        return cls(*tokens)

    @property
    def tokens(self) -> tuple:
        return tuple(getattr(self, s) for s in SLOTS)

    def __str__(self) -> str:
        return " ".join(self.tokens)

    def check(self, vocab: Vocabulary) -> None:
        for slot, tok in zip(SLOTS, self.tokens):
            if tok not in vocab.slot_domain(slot):
                raise MalformedSentence(f"{tok!r} is not a valid {slot} token")


# ---------------------------------------------------------------------------
# aligned tree

LEAVES = tuple(f"{s}_{side}" for s in SLOTS for side in ("p", "h"))
TREE_CHILDREN = {
    "root": ("proj_q_s", "subj_np", "neg_vp"),
    "proj_q_s": ("q_s_p", "q_s_h"),
    "subj_np": ("proj_adj_s", "rel_n_s"),
    "proj_adj_s": ("adj_s_p", "adj_s_h"),
    "rel_n_s": ("n_s_p", "n_s_h"),
    "neg_vp": ("proj_neg", "vp"),
    "proj_neg": ("neg_p", "neg_h"),
    "vp": ("adv_verb", "proj_q_o", "obj_np"),
    "adv_verb": ("proj_adv", "rel_v"),
    "proj_adv": ("adv_p", "adv_h"),
    "rel_v": ("v_p", "v_h"),
    "proj_q_o": ("q_o_p", "q_o_h"),
    "obj_np": ("proj_adj_o", "rel_n_o"),
    "proj_adj_o": ("adj_o_p", "adj_o_h"),
    "rel_n_o": ("n_o_p", "n_o_h"),
}
ALIGNED_TREE = OrderedTree("root", TREE_CHILDREN)
assert ALIGNED_TREE.leaves == LEAVES

QUANTIFIER_SIGNATURES = tuple(f"{a}/{b}" for a, b in itertools.product(QUANTIFIERS, repeat=2))
NEGATION_SIGNATURES = tuple(f"{a}/{b}" for a, b in itertools.product(NEGATIONS, repeat=2))
MODIFIER_NAMES = tuple(MODIFIER_SIGNATURES)
# the site nodes whose relation the balancing pass controls
SITES = {"adj_s": "subj_np", "adv": "adv_verb", "adj_o": "obj_np"}


def word_relation(a: str, b: str) -> Relation:
    """Distinct lexical items are independent."""
    return EQ if a == b else IND


def modifier_relation(a: str, b: str) -> Relation:
    """Relation between two modifier tokens (ε is the identity modifier)."""
    return modifier_joint(a, b)(EQ)


def _quant(name: str):
    return quantifier_joint(*name.split("/"))


def _tables(vocab: Vocabulary, dom: dict) -> dict:
    prod = itertools.product
    func = {}
    for node, slot in (("proj_q_s", "q_s"), ("proj_q_o", "q_o")):
        func[node] = {(a, b): f"{a}/{b}" for a, b in prod(dom[f"{slot}_p"], dom[f"{slot}_h"])}
    func["proj_neg"] = {(a, b): f"{a}/{b}" for a, b in prod(dom["neg_p"], dom["neg_h"])}
    for node, slot in (("proj_adj_s", "adj_s"), ("proj_adv", "adv"), ("proj_adj_o", "adj_o")):
        func[node] = {(a, b): modifier_joint(a, b).name for a, b in prod(dom[f"{slot}_p"], dom[f"{slot}_h"])}
    for node, slot in (("rel_n_s", "n_s"), ("rel_v", "v"), ("rel_n_o", "n_o")):
        func[node] = {(a, b): word_relation(a, b) for a, b in prod(dom[f"{slot}_p"], dom[f"{slot}_h"])}
    for node, proj, rel in (("subj_np", "proj_adj_s", "rel_n_s"), ("adv_verb", "proj_adv", "rel_v"), ("obj_np", "proj_adj_o", "rel_n_o")):
        func[node] = {(m, r): MODIFIER_SIGNATURES[m](r) for m, r in prod(dom[proj], dom[rel])}
    func["vp"] = {
        (av, q, onp): compose_binary(_quant(q), onp, av) for av, q, onp in prod(dom["adv_verb"], dom["proj_q_o"], dom["obj_np"])
    }
    func["neg_vp"] = {(n, r): negation_signature(*n.split("/"))(r) for n, r in prod(dom["proj_neg"], dom["vp"])}
    func["root"] = {
        (q, np, vp): compose_binary(_quant(q), np, vp) for q, np, vp in prod(dom["proj_q_s"], dom["subj_np"], dom["neg_vp"])
    }
    return func


def build_aligned_tree(vocab: Vocabulary, trim: bool = True) -> CompositionTree:
    """The aligned tree over the vocabulary; REL/COMP nodes start with all
    seven relations and are trimmed to the reachable ones."""
    dom: dict = {}
    for s in SLOTS:
        dom[f"{s}_p"] = dom[f"{s}_h"] = vocab.slot_domain(s)
    dom["proj_q_s"] = dom["proj_q_o"] = QUANTIFIER_SIGNATURES
    dom["proj_neg"] = NEGATION_SIGNATURES
    dom["proj_adj_s"] = dom["proj_adv"] = dom["proj_adj_o"] = MODIFIER_NAMES
    for node in ("rel_n_s", "rel_v", "rel_n_o", "subj_np", "adv_verb", "obj_np", "vp", "neg_vp", "root"):
        dom[node] = RELATIONS
    C = CompositionTree(ALIGNED_TREE, dom, _tables(vocab, dom))
    return trim_domains(C) if trim else C


def pair_input(premise: Sentence, hypothesis: Sentence) -> tuple:
    """Leaf-ordered input: premise and hypothesis tokens interleaved by slot."""
    return tuple(itertools.chain.from_iterable(zip(premise.tokens, hypothesis.tokens)))


def split_input(x: Sequence) -> tuple[Sentence, Sentence]:
    return Sentence(*x[0::2]), Sentence(*x[1::2])


# ---------------------------------------------------------------------------
# labels and subtasks


def rel_to_label(r: Relation) -> str:
    r = Relation(r)
    if r in (EQ, Relation.FWD):
        return ENTAILMENT
    if r in (Relation.NEG, Relation.ALT):
        return CONTRADICTION
    return NEUTRAL


# (task id, node or slot, token span over the 9 slots); spans are [start, end)
SUBTASKS = (
    ("sentence", "root", (0, 9)),
    ("negated_vp", "neg_vp", (3, 9)),
    ("vp", "vp", (4, 9)),
    ("adverb_verb", "adv_verb", (4, 6)),
    ("subject_np", "subj_np", (1, 3)),
    ("object_np", "obj_np", (7, 9)),
    ("subject_adjective", "adj_s", (1, 2)),
    ("subject_noun", "n_s", (2, 3)),
    ("adverb", "adv", (4, 5)),
    ("verb", "v", (5, 6)),
    ("object_adjective", "adj_o", (7, 8)),
    ("object_noun", "n_o", (8, 9)),
)
SUBTASK_IDS = tuple(t for t, _, _ in SUBTASKS)


@dataclass(frozen=True)
class PairExample:
    premise: Sentence
    hypothesis: Sentence
    label: str
    relation: Relation
    nodes: dict
    subtasks: tuple

    @property
    def input(self) -> tuple:
        return pair_input(self.premise, self.hypothesis)

    def site_relations(self) -> dict:
        return {slot: self.nodes[node] for slot, node in SITES.items()}


def _subtask_entries(premise: Sentence, hypothesis: Sentence, nodes: dict) -> tuple:
    out = []
    for task, ref, (s, e) in SUBTASKS:
        if ref == "root":
            value = rel_to_label(nodes["root"])
        elif ref in nodes:
            value = str(nodes[ref])
        else:
            a, b = getattr(premise, ref), getattr(hypothesis, ref)
            value = str(modifier_relation(a, b) if ref in MODIFIER_SLOTS else word_relation(a, b))
        out.append({"task": task, "span_premise": [s, e], "span_hypothesis": [s, e], "len_p": e - s, "len_h": e - s, "label": value})
    return tuple(out)


def label_pair(premise: Sentence, hypothesis: Sentence, tree: CompositionTree, check: bool = True) -> PairExample:
    try:
        r = trace(tree, pair_input(premise, hypothesis), check=check)
    except ValueError as exc:
        raise MalformedSentence(str(exc)) from exc
    nodes = {a: r[a] for a in tree.tree.non_leaves if not a.startswith("proj_")}
    root = Relation(r["root"])
    return PairExample(premise, hypothesis, rel_to_label(root), root, nodes, _subtask_entries(premise, hypothesis, nodes))


def negation_count(premise: Sentence, hypothesis: Sentence) -> int:
    return sum(tok in NEGATIVE_TOKENS for s in (premise, hypothesis) for tok in (s.q_s, s.neg, s.q_o))


def negation_parity(premise: Sentence, hypothesis: Sentence) -> int:
    """0 for an even number of negative tokens across the pair, 1 for odd."""
    return negation_count(premise, hypothesis) % 2


def in_fragment(premise: Sentence, hypothesis: Sentence, vocab: Vocabulary) -> bool:
    """Membership in the example set.  The restriction that unequal aligned
    open-class words be independent holds by stipulation, so any pair of
    well-formed sentences qualifies."""
    try:
        premise.check(vocab)
        hypothesis.check(vocab)
    except MalformedSentence:
        return False
    return True


def count_pair_space(vocab: Vocabulary | int) -> int:
    n = vocab.n_open if isinstance(vocab, Vocabulary) else int(vocab)
    if n < 1:
        raise ValueError("n_open must be at least 1")
    per_sentence = 4 * (n + 1) * n * 2 * (n + 1) * n * 4 * (n + 1) * n
    return per_sentence**2


WORKED_PREMISE = "every tall kid ε happily kicks every ε rock"
WORKED_HYPOTHESIS = "no tall kid not ε kicks some large rock"


def worked_vocabulary() -> tuple[Vocabulary, dict]:
    """A vocabulary plus a renaming that maps the worked example's English
    words onto synthetic tokens."""
    vocab = Vocabulary(2)
    rename = {
        "tall": "sadj_000",
        "kid": "snoun_000",
        "happily": "adv_000",
        "kicks": "verb_000",
        "large": "oadj_000",
        "rock": "onoun_000",
    }
    return vocab, rename


def worked_pair() -> tuple[Sentence, Sentence, Vocabulary]:
    vocab, rename = worked_vocabulary()

    def conv(text):
        return Sentence.from_tokens([rename.get(t, t) for t in text.split()])

    return conv(WORKED_PREMISE), conv(WORKED_HYPOTHESIS), vocab


def sentences(vocab: Vocabulary) -> Iterable[Sentence]:
    for toks in itertools.product(*(vocab.slot_domain(s) for s in SLOTS)):
        yield Sentence(*toks)
