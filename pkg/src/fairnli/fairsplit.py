"""Fairness audits and fair train/test split generation.

A training set is fair for a composition tree when every non-leaf node
sees every tuple of child-domain values on some training input.  The
generator builds, bottom up, equivalence classes of partial inputs per
node value; at ``ratio`` 0 the result is small, at 1 it is everything.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .comptree import CompositionTree, NodeId, input_space_size, trace, tree_hash
from .symsplit import SymbolicSplit, even_split_for

EXACT_LIMIT = 200_000  # largest input space materialized by default


class NotSurjective(ValueError):
    pass


class Infeasible(ValueError):
    pass


def random_even_split(S: Sequence, D: Sequence, ratio, rng: random.Random) -> dict:
    """Map each element of ``D`` to a subset of ``S`` (as an ordered tuple).

    A shared part of ``floor(ratio*|S|)`` elements is in every image; the
    rest are dealt round-robin after a seeded shuffle.
    """
    S = list(S)
    D = list(D)
    if not S:
        raise Infeasible("cannot split an empty set")
    if not D:
        raise Infeasible("no targets to split over")
    split = even_split_for(len(S), len(D), ratio, rng)
    return {d: tuple(S[i] for i in split.members(t)) for t, d in enumerate(D)}


def sibling_space(C: CompositionTree, a: NodeId, k: int) -> list[tuple]:
    kids = C.tree.children[a]
    return list(itertools.product(*(C.dom[c] for j, c in enumerate(kids) if j != k)))


def _check_surjective(C: CompositionTree, a: NodeId) -> None:
    image = set(C.func[a].values())
    missing = [v for v in C.dom[a] if v not in image]
    if missing:
        raise NotSurjective(f"values {missing!r} at {a!r} have no preimage; trim the tree first")


def generate_inputs(C: CompositionTree, a: NodeId, ratio, rng: random.Random) -> dict:
    """Equivalence classes ``value -> tuple of partial inputs`` at node ``a``.

    Each child's class for value ``v`` is split once over the sibling space;
    the block for child tuple ``i`` is the product of the parts selected by
    ``i``'s siblings.
    """
    kids = C.tree.children[a]
    if not kids:
        return {v: ((v,),) for v in C.dom[a]}
    child_classes = [generate_inputs(C, c, ratio, rng) for c in kids]
    _check_surjective(C, a)
    splits = []
    for k, c in enumerate(kids):
        sibs = sibling_space(C, a, k)
        splits.append({v: random_even_split(child_classes[k][v], sibs, ratio, rng) for v in C.dom[c]})
    classes: dict = {v: [] for v in C.dom[a]}
    for key in itertools.product(*(C.dom[c] for c in kids)):
        parts = []
        for k, v in enumerate(key):
            parts.append(splits[k][v][key[:k] + key[k + 1:]])
        classes[C.func[a][key]].extend(tuple(itertools.chain.from_iterable(p)) for p in itertools.product(*parts))
    return {v: tuple(ps) for v, ps in classes.items()}


@dataclass
class FairSplit:
    train: frozenset
    test: frozenset
    ratio: float
    seed: int
    tree_hash: str = ""

    def manifest(self, audit: "FairnessReport | None" = None) -> dict:
        out = {
            "seed": self.seed,
            "ratio": self.ratio,
            "tree_hash": self.tree_hash,
            "train_size": len(self.train),
            "test_size": len(self.test),
        }
        if audit is not None:
            out["fair"] = audit.fair
            out["unexposed"] = len(audit.unexposed)
        return out


def generate_fair_split(C: CompositionTree, ratio, seed: int) -> FairSplit:
    rng = random.Random(seed)
    if input_space_size(C) > EXACT_LIMIT:
        raise Infeasible("input space too large to materialize; use symbolic_split")
    classes = generate_inputs(C, C.root, ratio, rng)
    train = frozenset(itertools.chain.from_iterable(classes.values()))
    test = frozenset(x for x in C.inputs() if x not in train)
    return FairSplit(train, test, ratio, seed, tree_hash(C))


def symbolic_split(C: CompositionTree, ratio, seed: int) -> SymbolicSplit:
    """Same training set as ``generate_fair_split`` without materializing it."""
    for a in C.tree.non_leaves:
        _check_surjective(C, a)
    return SymbolicSplit(C, ratio, random.Random(seed))


# ---------------------------------------------------------------------------
# audits


@dataclass
class FairnessReport:
    fair: bool
    unexposed: list[tuple[NodeId, tuple]]
    exposures: dict[NodeId, Counter] = field(default_factory=dict)
    n_train: int = 0

    def to_dict(self) -> dict:
        return {
            "fair": self.fair,
            "n_train": self.n_train,
            "unexposed": [{"node": a, "input": [str(v) for v in key]} for a, key in self.unexposed],
            "local_inputs_seen": {a: len(c) for a, c in self.exposures.items()},
        }

    def to_text(self) -> str:
        lines = [f"fair: {self.fair}", f"train inputs: {self.n_train}", f"unexposed: {len(self.unexposed)}"]
        lines += [f"  {a}: ({', '.join(map(str, key))})" for a, key in self.unexposed]
        return "\n".join(lines)


def exposures(C: CompositionTree, inputs: Iterable[Sequence]) -> tuple[dict[NodeId, Counter], int]:
    seen = {a: Counter() for a in C.tree.non_leaves}
    children = C.tree.children
    n = 0
    for x in inputs:
        n += 1
        r = trace(C, x)
        for a, cnt in seen.items():
            cnt[tuple(r[c] for c in children[a])] += 1
    return seen, n


def _report(C: CompositionTree, seen: dict[NodeId, Counter], n: int) -> FairnessReport:
    missing = []
    for a in C.tree.non_leaves:
        for key in itertools.product(*(C.dom[c] for c in C.tree.children[a])):
            if key not in seen[a]:
                missing.append((a, key))
    return FairnessReport(not missing, missing, seen, n)


def is_fair(C: CompositionTree, train: Iterable[Sequence]) -> FairnessReport:
    seen, n = exposures(C, train)
    return _report(C, seen, n)


@dataclass(frozen=True)
class HeldoutScheme:
    """Hold out every input that realizes a matching local input somewhere."""

    name: str
    predicate: Callable[[NodeId, tuple], bool]
    description: str = ""


def subclass_out(node: NodeId, signature: Hashable, relation: Hashable, sig_pos: int = 0, rel_pos: int = -1) -> HeldoutScheme:
    """Inputs exposing ``signature`` to ``relation`` at ``node``."""

    def pred(a, key):
        return a == node and key[sig_pos] == signature and key[rel_pos] == relation

    return HeldoutScheme(f"SUBCLASS-OUT({signature},{relation})", pred, f"node {node}")


def pair_out(node: NodeId, signature: Hashable, sig_pos: int = 0) -> HeldoutScheme:
    """Inputs containing ``signature`` at ``node``."""

    def pred(a, key):
        return a == node and key[sig_pos] == signature

    return HeldoutScheme(f"PAIR-OUT({signature})", pred, f"node {node}")


NOTHING_OUT = HeldoutScheme("NONE", lambda a, key: False)


@dataclass
class HeldoutAudit:
    scheme: str
    n_train: int
    n_test: int
    report: FairnessReport

    def missing_at(self, node: NodeId) -> list[tuple]:
        return [key for a, key in self.report.unexposed if a == node]

    def to_dict(self) -> dict:
        return {"scheme": self.scheme, "n_train": self.n_train, "n_test": self.n_test, **self.report.to_dict()}


def audit_heldout_scheme(C: CompositionTree, scheme: HeldoutScheme) -> HeldoutAudit:
    """Split the full input space by ``scheme`` and audit the remainder."""
    children = C.tree.children
    seen = {a: Counter() for a in C.tree.non_leaves}
    n_train = n_test = 0
    for x in C.inputs():
        r = trace(C, x, check=False)
        keys = {a: tuple(r[c] for c in children[a]) for a in seen}
        if any(scheme.predicate(a, key) for a, key in keys.items()):
            n_test += 1
            continue
        n_train += 1
        for a, key in keys.items():
            seen[a][key] += 1
    return HeldoutAudit(scheme.name, n_train, n_test, _report(C, seen, n_train))


def minimal_fair_size(C: CompositionTree) -> int:
    """Smallest fair training set, by exhaustive search (tiny trees only)."""
    inputs = list(C.inputs())
    if len(inputs) > 16:
        raise Infeasible("exhaustive minimality search is limited to 16 inputs")
    for size in range(1, len(inputs) + 1):
        for subset in itertools.combinations(inputs, size):
            if is_fair(C, subset).fair:
                return size
    return len(inputs)


def write_manifest(path, manifest: Mapping) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, ensure_ascii=False, default=str)
        fh.write("\n")
