import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairnli.comptree import (
    CompositionTree,
    InputOutOfDomain,
    MalformedTree,
    OrderedTree,
    compose,
    dumps,
    from_functions,
    input_space_size,
    is_surjective,
    loads,
    same_function,
    trace,
    trace_partial,
    tree_hash,
    trim_domains,
)
from fairnli.demos import prop_tree
from helpers import random_tree


def test_prop_tree_shape():
    C = prop_tree()
    assert C.tree.leaves == ("V1", "op", "U", "V2")
    assert C.tree.postorder == ("V1", "op", "U", "V2", "C1", "C2")
    assert set(C.dom["C1"]) == {"T", "F"}
    assert input_space_size(C) == 8


@pytest.mark.parametrize(
    "x, expected",
    [
        (("T", "⇒", "ε", "F"), "F"),
        (("T", "⇒", "¬", "F"), "T"),
        (("F", "⇒", "¬", "T"), "T"),
        (("T", "⇒", "¬", "T"), "F"),
    ],
)
def test_compose_prop(x, expected):
    C = prop_tree()
    assert compose(C, "C2", x) == expected
    assert trace(C, x)["C2"] == expected


def test_trace_records_intermediate_values():
    r = trace(prop_tree(), ("T", "⇒", "¬", "F"))
    assert r["C1"] == "T"
    assert r["U"] == "¬"


def test_input_out_of_domain():
    C = prop_tree()
    with pytest.raises(InputOutOfDomain) as err:
        compose(C, "C2", ("T", "⇒", "?", "F"))
    assert err.value.position == 2 and err.value.node == "U"
    with pytest.raises(InputOutOfDomain):
        trace(C, ("T", "⇒", "ε"))


def _tiny():
    return OrderedTree("r", {"r": ("a", "b")})


def test_missing_function_is_malformed():
    with pytest.raises(MalformedTree):
        CompositionTree(_tiny(), {"a": (0, 1), "b": (0,), "r": (0,)}, {})


def test_partial_table_is_malformed():
    with pytest.raises(MalformedTree):
        CompositionTree(_tiny(), {"a": (0, 1), "b": (0,), "r": (0,)}, {"r": {(0, 0): 0}})


def test_output_outside_domain_is_malformed():
    with pytest.raises(MalformedTree):
        CompositionTree(_tiny(), {"a": (0,), "b": (0,), "r": (0,)}, {"r": {(0, 0): 5}})


def test_extra_table_entries_are_malformed():
    with pytest.raises(MalformedTree):
        CompositionTree(_tiny(), {"a": (0,), "b": (0,), "r": (0,)}, {"r": {(0, 0): 0, (1, 0): 0}})


def test_empty_domain_is_malformed():
    with pytest.raises(MalformedTree):
        CompositionTree(_tiny(), {"a": (), "b": (0,), "r": (0,)}, {"r": {}})


def test_two_parents_rejected():
    with pytest.raises(MalformedTree):
        OrderedTree("r", {"r": ("a", "b"), "a": ("c",), "b": ("c",)})


def test_unreachable_nodes_rejected():
    with pytest.raises(MalformedTree):
        OrderedTree("r", {"r": ("a",), "x": ("y",)})


def test_trim_domains_shrinks_to_image():
    T = _tiny()
    C = CompositionTree(T, {"a": (0, 1), "b": (0, 1), "r": (0, 1, 2)}, {"r": {(i, j): i & j for i in (0, 1) for j in (0, 1)}})
    assert not is_surjective(C)
    D = trim_domains(C)
    assert D.dom["r"] == (0, 1)
    assert is_surjective(D)


def test_from_functions_derives_domains():
    T = _tiny()
    C = from_functions(T, {"a": (1, 2), "b": (3,)}, {"r": lambda a, b: a + b})
    assert set(C.dom["r"]) == {4, 5}


def test_serialization_round_trip_prop():
    C = prop_tree()
    text = dumps(C)
    assert text.startswith("fairnli-tree 1\n")
    D = loads(text)
    assert same_function(C, D)
    assert tree_hash(D) == tree_hash(C)


def test_loads_rejects_bad_header():
    with pytest.raises(MalformedTree):
        loads("tree 2\nroot r\n")


def test_dumps_rejects_whitespace_values():
    T = _tiny()
    C = CompositionTree(T, {"a": ("x y",), "b": ("z",), "r": ("o",)}, {"r": {("x y", "z"): "o"}})
    with pytest.raises(ValueError):
        dumps(C)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip_random_trees(seed):
    C = random_tree(random.Random(seed))
    D = loads(dumps(C))
    assert same_function(C, D)
    assert dumps(D) == dumps(C)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_trace_agrees_with_compose(seed):
    rng = random.Random(seed)
    C = random_tree(rng)
    x = tuple(rng.choice(d) for d in C.leaf_domains)
    r = trace(C, x)
    for a in C.tree.nodes:
        assert r[a] == compose(C, a, x)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_trace_partial_matches_full_trace(seed):
    rng = random.Random(seed)
    C = random_tree(rng)
    x = tuple(rng.choice(d) for d in C.leaf_domains)
    full = trace(C, x)
    pos = C.tree.leaf_order
    for a in C.tree.nodes:
        p = tuple(x[pos[leaf]] for leaf in C.tree.leaves_under(a))
        part = trace_partial(C, a, p)
        assert all(part[b] == full[b] for b in part)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_trees_are_surjective_after_trim(seed):
    C = random_tree(random.Random(seed))
    assert is_surjective(C)
    assert same_function(C, trim_domains(C))
