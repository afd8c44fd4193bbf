"""Small worked trees: propositional truth evaluation and a one-quantifier
natural-logic example."""

from __future__ import annotations

from .comptree import CompositionTree, OrderedTree, from_functions
from .fragment import NEGATIONS, Vocabulary, word_relation
from .natlog import (
    EQ,
    FWD,
    IND,
    MODIFIER_SIGNATURES,
    QUANTIFIERS,
    REV,
    compose_binary,
    modifier_joint,
    negation_signature,
    quantifier_joint,
)

T, F = "T", "F"
IMPLIES, NOT, EPS = "⇒", "¬", "ε"

PROP_TREE = OrderedTree("C2", {"C2": ("V1", "op", "C1"), "C1": ("U", "V2")})


def _implies(v1, op, v2):
    return F if (v1 == T and v2 == F) else T


def _unary(u, v):
    if u == EPS:
        return v
    return F if v == T else T


def prop_tree() -> CompositionTree:
    """``V1 ⇒ U V2`` with ``U`` in {¬, ε}."""
    leaves = {"V1": (T, F), "op": (IMPLIES,), "U": (NOT, EPS), "V2": (T, F)}
    return from_functions(PROP_TREE, leaves, {"C2": _implies, "C1": _unary})


def parse_prop(text: str) -> tuple:
    """``"T ⇒ ¬ F"`` -> ``("T", "⇒", "¬", "F")``; ASCII ``=>``, ``~``, ``e`` accepted."""
    alias = {"=>": IMPLIES, "~": NOT, "!": NOT, "e": EPS, "eps": EPS}
    toks = tuple(alias.get(t, t) for t in text.split())
    if len(toks) != 4:
        raise ValueError(f"expected 4 tokens, got {text!r}")
    return toks


def format_prop(x) -> str:
    return " ".join(x)


WORKED_TRAIN = tuple(parse_prop(s) for s in ("T ⇒ ε F", "T ⇒ ¬ F", "F ⇒ ¬ T", "F ⇒ ε T"))
WORKED_TEST = tuple(parse_prop(s) for s in ("T ⇒ ¬ T", "T ⇒ ε T", "F ⇒ ¬ F", "F ⇒ ε F"))


# one quantifier over an aligned noun pair
QUANT_TREE = OrderedTree("COMP", {"COMP": ("PROJ", "REL"), "PROJ": ("q_p", "q_h"), "REL": ("n_p", "n_h")})
NOUN_LEXICON = {("animal", "dog"): REV, ("dog", "animal"): FWD}


def _noun_relation(a, b):
    if a == b:
        return EQ
    return NOUN_LEXICON.get((a, b), IND)


def quantifier_tree(quantifiers=("every", "some"), nouns=("animal", "dog")) -> CompositionTree:
    """Quantified noun pairs with a shared scope (the scope relation is ≡)."""
    leaves = {"q_p": quantifiers, "q_h": quantifiers, "n_p": nouns, "n_h": nouns}
    funcs = {
        "PROJ": lambda q1, q2: f"{q1}/{q2}",
        "REL": _noun_relation,
        "COMP": lambda sig, rel: compose_binary(quantifier_joint(*sig.split("/")), rel, EQ),
    }
    return from_functions(QUANT_TREE, leaves, funcs)


# one quantifier over an intransitive clause: "Q Adj N Neg Adv V"
SINGLE_QUANT_TREE = OrderedTree(
    "root",
    {
        "root": ("proj_q", "subj_np", "neg_vp"),
        "proj_q": ("q_p", "q_h"),
        "subj_np": ("proj_adj", "rel_n"),
        "proj_adj": ("adj_p", "adj_h"),
        "rel_n": ("n_p", "n_h"),
        "neg_vp": ("proj_neg", "adv_verb"),
        "proj_neg": ("neg_p", "neg_h"),
        "adv_verb": ("proj_adv", "rel_v"),
        "proj_adv": ("adv_p", "adv_h"),
        "rel_v": ("v_p", "v_h"),
    },
)


def single_quantifier_tree(n_open: int = 2) -> CompositionTree:
    """Aligned tree for one-quantifier sentences over a small vocabulary."""
    vocab = Vocabulary(n_open)
    leaves = {}
    for slot, side_dom in (
        ("q", QUANTIFIERS),
        ("adj", vocab.subject_adjectives),
        ("n", vocab.subject_nouns),
        ("neg", NEGATIONS),
        ("adv", vocab.adverbs),
        ("v", vocab.verbs),
    ):
        leaves[f"{slot}_p"] = leaves[f"{slot}_h"] = side_dom

    def modify(sig, r):
        return MODIFIER_SIGNATURES[sig](r)

    funcs = {
        "proj_q": lambda a, b: f"{a}/{b}",
        "proj_neg": lambda a, b: f"{a}/{b}",
        "proj_adj": lambda a, b: modifier_joint(a, b).name,
        "proj_adv": lambda a, b: modifier_joint(a, b).name,
        "rel_n": word_relation,
        "rel_v": word_relation,
        "subj_np": modify,
        "adv_verb": modify,
        "neg_vp": lambda n, r: negation_signature(*n.split("/"))(r),
        "root": lambda q, np_, vp: compose_binary(quantifier_joint(*q.split("/")), np_, vp),
    }
    return from_functions(SINGLE_QUANT_TREE, leaves, funcs)
