"""Composition trees: an ordered tree, a finite domain per node, and an
explicit function table at every non-leaf node.

Values are any hashable atoms; in practice strings (``Relation`` is a
``str`` subclass, so relations compare equal to their symbols).  Domains are
stored as tuples so enumeration order is deterministic.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

NodeId = str
Value = Hashable


class MalformedTree(ValueError):
    pass


class InputOutOfDomain(ValueError):
    def __init__(self, position: int, node: NodeId, value):
        super().__init__(f"input component {position} ({value!r}) not in domain of leaf {node!r}")
        self.position = position
        self.node = node
        self.value = value


@dataclass(frozen=True)
class OrderedTree:
    """Rooted ordered tree; leaves are numbered left to right from 0."""

    root: NodeId
    children: Mapping[NodeId, tuple[NodeId, ...]]
    nodes: tuple[NodeId, ...] = field(init=False)
    leaves: tuple[NodeId, ...] = field(init=False)
    postorder: tuple[NodeId, ...] = field(init=False)
    parent: Mapping[NodeId, NodeId] = field(init=False)

    def __post_init__(self):
        children = {k: tuple(v) for k, v in self.children.items()}
        parent: dict[NodeId, NodeId] = {}
        for a, kids in children.items():
            for c in kids:
                if c in parent:
                    raise MalformedTree(f"node {c!r} has two parents")
                parent[c] = a
        if self.root in parent:
            raise MalformedTree("root has a parent")
        order, leaves = [], []
        seen = set()
        stack: list[tuple[NodeId, bool]] = [(self.root, False)]
        while stack:
            a, done = stack.pop()
            if done:
                order.append(a)
                continue
            if a in seen:
                raise MalformedTree(f"cycle through {a!r}")
            seen.add(a)
            kids = children.get(a, ())
            if not kids:
                leaves.append(a)
                order.append(a)
                continue
            stack.append((a, True))
            stack.extend((c, False) for c in reversed(kids))
        mentioned = set(children) | set(parent)
        if mentioned - seen:
            raise MalformedTree(f"nodes not reachable from root: {sorted(mentioned - seen)}")
        object.__setattr__(self, "children", {a: children.get(a, ()) for a in order})
        object.__setattr__(self, "nodes", tuple(order))
        object.__setattr__(self, "leaves", tuple(leaves))
        object.__setattr__(self, "postorder", tuple(order))
        object.__setattr__(self, "parent", parent)

    def is_leaf(self, a: NodeId) -> bool:
        return not self.children[a]

    @property
    def non_leaves(self) -> tuple[NodeId, ...]:
        return tuple(a for a in self.postorder if self.children[a])

    @property
    def leaf_order(self) -> dict[NodeId, int]:
        return {leaf: i for i, leaf in enumerate(self.leaves)}

    def leaves_under(self, a: NodeId) -> tuple[NodeId, ...]:
        """Leaves of the subtree rooted at ``a``, left to right."""
        if self.is_leaf(a):
            return (a,)
        return tuple(itertools.chain.from_iterable(self.leaves_under(c) for c in self.children[a]))


@dataclass(frozen=True)
class CompositionTree:
    tree: OrderedTree
    dom: Mapping[NodeId, tuple[Value, ...]]
    func: Mapping[NodeId, Mapping[tuple, Value]]

    def __post_init__(self):
        dom = {a: tuple(dict.fromkeys(self.dom.get(a, ()))) for a in self.tree.nodes}
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "func", {a: dict(self.func[a]) for a in self.tree.non_leaves if a in self.func})
        object.__setattr__(self, "_leaf_pos", self.tree.leaf_order)
        self.validate()

    def validate(self) -> None:
        t = self.tree
        for a in t.nodes:
            if not self.dom[a]:
                raise MalformedTree(f"empty domain at {a!r}")
        for a in t.non_leaves:
            if a not in self.func:
                raise MalformedTree(f"no function at non-leaf {a!r}")
            table = self.func[a]
            kid_doms = [self.dom[c] for c in t.children[a]]
            expected = 1
            for d in kid_doms:
                expected *= len(d)
            out = set(self.dom[a])
            for key in itertools.product(*kid_doms):
                try:
                    v = table[key]
                except KeyError:
                    raise MalformedTree(f"function at {a!r} undefined on {key!r}") from None
                if v not in out:
                    raise MalformedTree(f"function at {a!r} maps {key!r} to {v!r} outside its domain")
            if len(table) != expected:
                raise MalformedTree(f"function at {a!r} has entries outside its child domains")

    @property
    def root(self) -> NodeId:
        return self.tree.root

    @property
    def leaf_domains(self) -> list[tuple[Value, ...]]:
        return [self.dom[leaf] for leaf in self.tree.leaves]

    def check_input(self, x: Sequence) -> None:
        leaves = self.tree.leaves
        if len(x) != len(leaves):
            raise InputOutOfDomain(len(x), "<arity>", tuple(x))
        for i, (leaf, v) in enumerate(zip(leaves, x)):
            if v not in self.dom[leaf]:
                raise InputOutOfDomain(i, leaf, v)

    def local_input(self, a: NodeId, realized: Mapping[NodeId, Value]) -> tuple:
        return tuple(realized[c] for c in self.tree.children[a])

    def inputs(self) -> Iterable[tuple]:
        """Every input, in lexicographic order of the leaf domains."""
        return itertools.product(*self.leaf_domains)


def compose(C: CompositionTree, a: NodeId, x: Sequence) -> Value:
    """Output realized at node ``a`` on input ``x`` (recursive evaluation)."""
    C.check_input(x)
    return _compose(C, a, tuple(x))


def _compose(C: CompositionTree, a: NodeId, x: tuple) -> Value:
    kids = C.tree.children[a]
    if not kids:
        return x[C._leaf_pos[a]]
    return C.func[a][tuple(_compose(C, c, x) for c in kids)]


def trace(C: CompositionTree, x: Sequence, check: bool = True) -> dict[NodeId, Value]:
    """Values realized at every node, computed in one bottom-up pass."""
    if check:
        C.check_input(x)
    realized: dict[NodeId, Value] = {}
    pos = C._leaf_pos
    children = C.tree.children
    for a in C.tree.postorder:
        kids = children[a]
        if kids:
            realized[a] = C.func[a][tuple(realized[c] for c in kids)]
        else:
            realized[a] = x[pos[a]]
    return realized


def trace_partial(C: CompositionTree, a: NodeId, p: Sequence) -> dict[NodeId, Value]:
    """Values realized in the subtree of ``a`` on a partial input (its leaves, in order)."""
    leaves = C.tree.leaves_under(a)
    pos = {leaf: i for i, leaf in enumerate(leaves)}
    realized: dict[NodeId, Value] = {}

    def walk(b):
        kids = C.tree.children[b]
        if not kids:
            realized[b] = p[pos[b]]
        else:
            for c in kids:
                walk(c)
            realized[b] = C.func[b][tuple(realized[c] for c in kids)]

    walk(a)
    return realized


def input_space_size(C: CompositionTree) -> int:
    n = 1
    for d in C.leaf_domains:
        n *= len(d)
    return n


def trim_domains(C: CompositionTree) -> CompositionTree:
    """Shrink every non-leaf domain to the image of its function, bottom up."""
    dom = dict(C.dom)
    func = {}
    for a in C.tree.non_leaves:
        kid_doms = [dom[c] for c in C.tree.children[a]]
        table = {key: C.func[a][key] for key in itertools.product(*kid_doms)}
        image = set(table.values())
        dom[a] = tuple(v for v in C.dom[a] if v in image)
        func[a] = table
    return CompositionTree(C.tree, dom, func)


def is_surjective(C: CompositionTree) -> bool:
    return all(set(C.func[a].values()) == set(C.dom[a]) for a in C.tree.non_leaves)


def from_functions(tree: OrderedTree, leaf_domains: Mapping[NodeId, Iterable], functions: Mapping, trim: bool = True) -> CompositionTree:
    """Tabulate Python callables into a tree, deriving domains bottom up.

    ``functions[a]`` is called with the child values as positional args.
    Non-leaf domains are the forward images, so the result is surjective.
    """
    dom = {leaf: tuple(leaf_domains[leaf]) for leaf in tree.leaves}
    func = {}
    for a in tree.non_leaves:
        f = functions[a]
        table = {key: f(*key) for key in itertools.product(*(dom[c] for c in tree.children[a]))}
        dom[a] = tuple(dict.fromkeys(table.values()))
        func[a] = table
    C = CompositionTree(tree, dom, func)
    return trim_domains(C) if trim else C


# ---------------------------------------------------------------------------
# text serialization
#
#   fairnli-tree 1
#   root <node>
#   node <node> [<child> ...]        one line per node, postorder
#   dom <node> <value> ...
#   func <node> <v1> ... <vm> -> <value>
#
# Node ids and values are whitespace-free strings.


def dumps(C: CompositionTree) -> str:
    def tok(v) -> str:
        s = str(v)
        if not s or any(ch.isspace() for ch in s) or s == "->":
            raise ValueError(f"value {v!r} cannot be serialized")
        return s

    lines = ["fairnli-tree 1", f"root {tok(C.root)}"]
    for a in C.tree.postorder:
        lines.append(" ".join(["node", tok(a), *map(tok, C.tree.children[a])]))
    for a in C.tree.postorder:
        lines.append(" ".join(["dom", tok(a), *map(tok, C.dom[a])]))
    for a in C.tree.non_leaves:
        for key, v in C.func[a].items():
            lines.append(" ".join(["func", tok(a), *map(tok, key), "->", tok(v)]))
    return "\n".join(lines) + "\n"


def loads(text: str) -> CompositionTree:
    root = None
    children: dict[str, tuple[str, ...]] = {}
    dom: dict[str, tuple[str, ...]] = {}
    func: dict[str, dict[tuple, str]] = {}
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or lines[0] != ["fairnli-tree", "1"]:
        raise MalformedTree("missing 'fairnli-tree 1' header")
    for parts in lines[1:]:
        kind, rest = parts[0], parts[1:]
        if kind == "root":
            root = rest[0]
        elif kind == "node":
            children[rest[0]] = tuple(rest[1:])
        elif kind == "dom":
            dom[rest[0]] = tuple(rest[1:])
        elif kind == "func":
            arrow = rest.index("->")
            func.setdefault(rest[0], {})[tuple(rest[1:arrow])] = rest[arrow + 1]
        else:
            raise MalformedTree(f"unknown record {kind!r}")
    if root is None:
        raise MalformedTree("no root record")
    return CompositionTree(OrderedTree(root, children), dom, func)


def tree_hash(C: CompositionTree) -> str:
    return hashlib.sha256(dumps(C).encode("utf-8")).hexdigest()


def same_function(C1, C2) -> bool:
    """Extensional equality of domains and tables (trees must match)."""
    if C1.tree.children != C2.tree.children or C1.tree.root != C2.tree.root:
        return False
    for a in C1.tree.nodes:
        if set(C1.dom[a]) != set(C2.dom[a]):
            return False
    return all(dict(C1.func[a]) == dict(C2.func[a]) for a in C1.tree.non_leaves)
