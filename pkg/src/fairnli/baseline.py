"""The memorizing baseline learner.

It records, for every non-leaf node, the output label seen for each tuple of
child values, and predicts by looking those tables up bottom-up.  A test
input whose local input was never memorized is an explicit error.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .comptree import CompositionTree, NodeId, OrderedTree, trace


class InconsistentLabels(ValueError):
    def __init__(self, node, key, old, new):
        super().__init__(f"node {node!r} on {key!r}: saw both {old!r} and {new!r}")
        self.node, self.key, self.old, self.new = node, key, old, new


class UnseenLocalInput(LookupError):
    def __init__(self, node, key):
        super().__init__(f"node {node!r} never saw local input {key!r}")
        self.node, self.key = node, key


@dataclass(frozen=True)
class LabeledExample:
    input: tuple
    labels: Mapping[NodeId, object]


def label_examples(C: CompositionTree, inputs: Iterable[Sequence]) -> list[LabeledExample]:
    """Label inputs with every non-leaf value realized by the reference tree."""
    out = []
    non_leaves = C.tree.non_leaves
    for x in inputs:
        r = trace(C, x)
        out.append(LabeledExample(tuple(x), {a: r[a] for a in non_leaves}))
    return out


@dataclass
class LearnedTree:
    tree: OrderedTree
    dom: dict[NodeId, set] = field(default_factory=dict)
    func: dict[NodeId, dict[tuple, object]] = field(default_factory=dict)

    def entries(self) -> int:
        return sum(len(t) for t in self.func.values())


def learn(T: OrderedTree, D: Iterable[LabeledExample]) -> LearnedTree:
    L = LearnedTree(T, {a: set() for a in T.nodes}, {a: {} for a in T.non_leaves})
    pos = T.leaf_order
    n_leaves = len(T.leaves)
    for ex in D:
        if len(ex.input) != n_leaves:
            raise ValueError(f"example arity {len(ex.input)} != {n_leaves} leaves")

        def y(c):
            return ex.input[pos[c]] if c in pos else ex.labels[c]

        for leaf in T.leaves:
            L.dom[leaf].add(y(leaf))
        for a in T.non_leaves:
            key = tuple(y(c) for c in T.children[a])
            out = ex.labels[a]
            table = L.func[a]
            old = table.setdefault(key, out)
            if old != out:
                raise InconsistentLabels(a, key, old, out)
            L.dom[a].add(out)
    return L


def predict_trace(L: LearnedTree, x: Sequence) -> dict[NodeId, object]:
    """Predicted value at every node; raises at the first unseen local input."""
    T = L.tree
    pos = T.leaf_order
    realized = {}
    for a in T.postorder:
        kids = T.children[a]
        if not kids:
            realized[a] = x[pos[a]]
            continue
        key = tuple(realized[c] for c in kids)
        try:
            realized[a] = L.func[a][key]
        except KeyError:
            raise UnseenLocalInput(a, key) from None
    return realized


def predict(L: LearnedTree, x: Sequence):
    return predict_trace(L, x)[L.tree.root]


def _partial_trace(L: LearnedTree, x: Sequence):
    """Like predict_trace but keeps going; failed nodes map to None."""
    T = L.tree
    pos = T.leaf_order
    realized, misses = {}, []
    for a in T.postorder:
        kids = T.children[a]
        if not kids:
            realized[a] = x[pos[a]]
            continue
        key = tuple(realized[c] for c in kids)
        if None in key:
            realized[a] = None
            continue
        v = L.func[a].get(key)
        if v is None:
            misses.append((a, key))
        realized[a] = v
    return realized, misses


def evaluate(L: LearnedTree, test: Iterable[LabeledExample]) -> dict:
    """Root and per-node accuracy; unseen local inputs count as errors."""
    T = L.tree
    total = 0
    correct = Counter()
    unseen = Counter()
    failed_examples = 0
    for ex in test:
        total += 1
        realized, misses = _partial_trace(L, ex.input)
        for node_key in misses:
            unseen[node_key] += 1
        if misses:
            failed_examples += 1
        for a in T.non_leaves:
            if realized[a] is not None and realized[a] == ex.labels[a]:
                correct[a] += 1
    acc = {a: (correct[a] / total if total else 1.0) for a in T.non_leaves}
    return {
        "n": total,
        "accuracy": acc[T.root],
        "correct": correct[T.root],
        "node_accuracy": acc,
        "examples_with_unseen": failed_examples,
        "unseen_local_inputs": [
            {"node": a, "input": [str(v) for v in key], "count": c}
            for (a, key), c in sorted(unseen.items(), key=lambda kv: (str(kv[0][0]), [str(v) for v in kv[0][1]]))
        ],
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=str, ensure_ascii=False)
