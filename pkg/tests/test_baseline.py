import json

import pytest

from fairnli.baseline import (
    InconsistentLabels,
    LabeledExample,
    UnseenLocalInput,
    evaluate,
    label_examples,
    learn,
    predict,
    predict_trace,
    report_json,
)
from fairnli.demos import WORKED_TEST, WORKED_TRAIN, prop_tree


def test_worked_train_learns_full_space():
    C = prop_tree()
    L = learn(C.tree, label_examples(C, WORKED_TRAIN))
    for x in C.inputs():
        assert predict(L, x) == predict_trace(L, x)["C2"]
    report = evaluate(L, label_examples(C, C.inputs()))
    assert report["accuracy"] == 1.0
    assert report["correct"] == 8
    assert report["examples_with_unseen"] == 0


def test_learned_table_sizes():
    C = prop_tree()
    L = learn(C.tree, label_examples(C, WORKED_TRAIN))
    assert len(L.func["C1"]) == 4
    assert len(L.func["C2"]) == 4
    assert L.entries() == 8


def test_unseen_local_input_is_explicit():
    C = prop_tree()
    L = learn(C.tree, label_examples(C, WORKED_TRAIN[:1]))
    with pytest.raises(UnseenLocalInput) as err:
        predict(L, WORKED_TEST[0])
    assert err.value.node in ("C1", "C2")


def test_evaluate_reports_unseen_inputs():
    C = prop_tree()
    L = learn(C.tree, label_examples(C, WORKED_TRAIN[:2]))
    report = evaluate(L, label_examples(C, WORKED_TEST))
    assert report["examples_with_unseen"] > 0
    assert report["accuracy"] < 1.0
    assert report["unseen_local_inputs"]
    json.loads(report_json(report))


def test_inconsistent_labels_rejected():
    C = prop_tree()
    x = WORKED_TRAIN[0]
    good = label_examples(C, [x])[0]
    bad = LabeledExample(x, {**good.labels, "C2": "T" if good.labels["C2"] == "F" else "F"})
    with pytest.raises(InconsistentLabels):
        learn(C.tree, [good, bad])


def test_arity_mismatch_rejected():
    C = prop_tree()
    with pytest.raises(ValueError):
        learn(C.tree, [LabeledExample(("T",), {})])


def test_memorizer_ignores_global_test_inputs():
    # the test inputs share no full input with train, yet are predicted exactly
    C = prop_tree()
    assert not set(WORKED_TRAIN) & set(WORKED_TEST)
    L = learn(C.tree, label_examples(C, WORKED_TRAIN))
    assert evaluate(L, label_examples(C, WORKED_TEST))["accuracy"] == 1.0
