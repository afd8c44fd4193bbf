import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairnli.natlog import (
    ALT,
    COV,
    EQ,
    ERRATA,
    JOINT_ROWS,
    FWD,
    IND,
    JOINT_ONLY,
    LEXICAL_RELATIONS,
    MODIFIER_SIGNATURES,
    NEG,
    QUANTIFIERS,
    RELATIONS,
    REFINEMENTS,
    REV,
    AmbiguityMismatch,
    Relation,
    _join_table,
    aggregate,
    all_quantifier_joints,
    brute_force_join,
    check_cell,
    compose_binary,
    decompositions,
    export_joint_table,
    export_join_table,
    extensional_signature,
    joint_table_cells,
    printed_joint_signature,
    join_table,
    modifier_joint,
    negation_signature,
    quantifier_joint,
    relation_of_extensions,
)


def test_relation_symbols_and_parsing():
    assert [r.value for r in RELATIONS] == ["≡", "⊏", "⊐", "^", "|", "⌣", "#"]
    assert Relation.parse("<") is FWD
    assert Relation.parse("|") is ALT
    assert FWD.converse is REV and NEG.converse is NEG
    assert FWD == "⊏"


@pytest.mark.parametrize(
    "x, y, expected",
    [
        ({1}, {1}, EQ),
        ({1}, {1, 2}, FWD),
        ({1, 2}, {1}, REV),
        ({1}, {2, 3}, NEG),
        ({1}, {2}, ALT),
        ({1, 2}, {2, 3}, COV),
        ({1, 2}, {2, 4}, IND),
    ],
)
def test_relation_of_extensions(x, y, expected):
    assert relation_of_extensions(x, y, {1, 2, 3} if expected in (NEG, COV) else {1, 2, 3, 4}) == expected


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 6), st.data())
def test_relation_converse_symmetry(size, data):
    full = (1 << size) - 1
    x = data.draw(st.integers(1, full - 1))
    y = data.draw(st.integers(1, full - 1))
    assert relation_of_extensions(y, x, full) == relation_of_extensions(x, y, full).converse
    assert relation_of_extensions(x, y, full) == relation_of_extensions(
        {i for i in range(size) if x >> i & 1}, {i for i in range(size) if y >> i & 1}, set(range(size))
    )


def test_join_table_stable_between_sizes():
    assert _join_table(5) == dict(join_table())


def test_join_identity_and_known_cells():
    for r in RELATIONS:
        assert brute_force_join(EQ, r) == {r}
        assert brute_force_join(r, EQ) == {r}
    assert brute_force_join(NEG, NEG) == {EQ}
    assert brute_force_join(FWD, FWD) == {FWD}
    # x = U - y and z inside U - y, so z is inside x
    assert brute_force_join(NEG, ALT) == {REV}
    assert brute_force_join(ALT, NEG) == {FWD}
    assert brute_force_join(IND, IND) == frozenset(RELATIONS)


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 6), st.data())
def test_join_is_sound(size, data):
    full = (1 << size) - 1
    x, y, z = (data.draw(st.integers(1, full - 1)) for _ in range(3))
    r1, r2 = relation_of_extensions(x, y, full), relation_of_extensions(y, z, full)
    assert relation_of_extensions(x, z, full) in brute_force_join(r1, r2)


def test_join_converse_law():
    for r1, r2 in itertools.product(RELATIONS, repeat=2):
        assert {r.converse for r in brute_force_join(r1, r2)} == set(brute_force_join(r2.converse, r1.converse))


def test_corrected_joint_table_cells_sound():
    rng = random.Random(7)
    bad = [c for c in (check_cell(*cell, rng, witnesses=100) for cell in joint_table_cells()) if not c.ok]
    assert bad == []


def test_printed_erratum_cells_refuted():
    rng = random.Random(7)
    refuted = {(c.pair, c.arg, c.relation) for c in (check_cell(*cell, rng) for cell in joint_table_cells(printed=True)) if not c.ok}
    assert refuted == {(pair, arg, r) for (pair, arg, r) in ERRATA}


def test_errata_values_applied():
    sig = negation_signature("ε", "not")
    for (pair, arg, r), value in ERRATA.items():
        assert sig(r) == value
        assert printed_joint_signature(*pair, arg)(r) != value


def test_joint_only_cells():
    assert quantifier_joint("some", "every").arg2(NEG) == NEG
    for pair, arg, r in JOINT_ONLY:
        assert JOINT_ROWS[pair][arg - 1] is not None
        assert quantifier_joint(*pair).arg2(r) == printed_joint_signature(*pair, arg)(r)


def test_negative_quantifiers_are_outer_negations():
    for q1, q2 in itertools.product(QUANTIFIERS, repeat=2):
        j = quantifier_joint(q1, q2)
        assert j.name == f"{q1}/{q2}"
        for r in RELATIONS:
            assert j.arg1(r) in RELATIONS and j.arg2(r) in RELATIONS
    assert quantifier_joint("no", "no").arg2(FWD) == REV
    assert quantifier_joint("not_every", "not_every").arg1(FWD) == FWD


@pytest.mark.parametrize("q1,q2", list(itertools.product(QUANTIFIERS, repeat=2)))
def test_quantifier_joints_match_direct_extension(q1, q2):
    j = quantifier_joint(q1, q2)
    e1 = extensional_signature(q1, q2, 1, inputs=LEXICAL_RELATIONS)
    e2 = extensional_signature(q1, q2, 2)
    assert {r: j.arg1(r) for r in e1} == e1
    assert {r: j.arg2(r) for r in e2} == e2
    assert len(e1) == 4 and len(e2) == 7


def test_strict_extension_is_tighter_on_independence():
    # with # read as "overlapping", some/every gains an entailment
    assert extensional_signature("some", "every", 1, inputs=(IND,), strict=True)[IND] == REV
    assert extensional_signature("some", "every", 1, inputs=(IND,))[IND] == IND


def test_aggregate():
    assert aggregate({EQ}) == EQ
    assert aggregate({EQ, FWD}) == FWD
    assert aggregate({NEG, ALT}) == ALT
    assert aggregate({FWD, REV}) == IND
    for r in RELATIONS:
        assert aggregate(REFINEMENTS[r]) == r


def test_modifier_signatures():
    assert modifier_joint("ε", "ε").name == "id"
    assert modifier_joint("red", "red").name == "id"
    assert modifier_joint("red", "ε").name == "m/ε"
    assert modifier_joint("ε", "red").name == "ε/m"
    assert modifier_joint("red", "big").name == "m/m'"
    assert MODIFIER_SIGNATURES["m/ε"](EQ) == FWD
    assert MODIFIER_SIGNATURES["ε/m"](EQ) == REV
    assert MODIFIER_SIGNATURES["m/m'"](EQ) == IND
    assert all(MODIFIER_SIGNATURES[s](IND) == IND for s in MODIFIER_SIGNATURES)


def test_compose_binary_total():
    for j in all_quantifier_joints():
        for rr in LEXICAL_RELATIONS:
            for rs in RELATIONS:
                assert compose_binary(j, rr, rs) in RELATIONS


def test_compose_binary_de_morgan():
    assert compose_binary(quantifier_joint("some", "every"), EQ, NEG) == NEG
    assert compose_binary(quantifier_joint("not_every", "some"), EQ, NEG) == EQ
    assert compose_binary(quantifier_joint("every", "some"), EQ, EQ) == FWD
    assert compose_binary(quantifier_joint("no", "some"), EQ, EQ) == NEG


def test_decompositions_have_four_paths():
    paths = decompositions(quantifier_joint("every", "some"), REV, EQ)
    assert len(paths) == 4
    assert all(paths.values())


def test_compose_binary_raises_on_disagreement(monkeypatch):
    import fairnli.natlog as nl

    monkeypatch.setattr(nl, "decompositions", lambda j, a, b: {"x": frozenset({EQ}), "y": frozenset({NEG})})
    with pytest.raises(AmbiguityMismatch):
        nl.compose_binary(quantifier_joint("some", "some"), EQ, EQ)


def test_exports_render():
    assert "≡" in export_join_table()
    assert export_joint_table().count("\n") == len(JOINT_ROWS)
