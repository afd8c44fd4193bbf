"""Symbolic fair splits for input spaces too large to materialize.

An equivalence class of partial inputs at a node is a union of blocks, one
per tuple of child values, and each block is a product of per-child split
parts.  Elements are addressed by rank (mixed radix inside a block), which
gives exact sizes, membership tests, uniform sampling and unranking without
ever listing the class.

Split parts come from ``EvenSplit``: a keyed permutation of ``range(n)``
whose first ``p1`` positions are shared by every target and whose remaining
positions are dealt round-robin.
"""

from __future__ import annotations

import bisect
import hashlib
import itertools
import math
import random
from fractions import Fraction
from typing import Iterator, Sequence

from .comptree import CompositionTree, NodeId

SMALL_PERMUTATION = 1 << 16
_FEISTEL_ROUNDS = 6


def fixed_count(n: int, ratio) -> int:
    """Size of the shared part: floor(ratio * n), computed exactly."""
    r = ratio if isinstance(ratio, Fraction) else Fraction(str(ratio))
    if not 0 <= r <= 1:
        raise ValueError(f"ratio must lie in [0, 1], got {ratio}")
    return math.floor(r * n)


class Permutation:
    """A seeded bijection on ``range(n)`` with a cheap inverse.

    Small sizes use an explicit shuffle; large sizes use a keyed Feistel
    network on the next even power of two with cycle walking.
    """

    def __init__(self, n: int, key: int):
        self.n = n
        self.key = key
        if n <= SMALL_PERMUTATION:
            fwd = list(range(n))
            random.Random(key).shuffle(fwd)
            inv = [0] * n
            for i, p in enumerate(fwd):
                inv[p] = i
            self._fwd, self._inv = fwd, inv
        else:
            self._fwd = self._inv = None
            bits = max(2, (n - 1).bit_length())
            self._half = (bits + 1) // 2
            self._mask = (1 << self._half) - 1
            self._salt = key.to_bytes(16, "little", signed=False)

    def _round(self, r: int, x: int) -> int:
        h = hashlib.blake2b(x.to_bytes(16, "little"), digest_size=16, key=self._salt, person=bytes([r]) * 16)
        return int.from_bytes(h.digest(), "little") & self._mask

    def _encrypt(self, x: int) -> int:
        left, right = x >> self._half, x & self._mask
        for r in range(_FEISTEL_ROUNDS):
            left, right = right, left ^ self._round(r, right)
        return (left << self._half) | right

    def _decrypt(self, y: int) -> int:
        left, right = y >> self._half, y & self._mask
        for r in reversed(range(_FEISTEL_ROUNDS)):
            left, right = right ^ self._round(r, left), left
        return (left << self._half) | right

    def __call__(self, i: int) -> int:
        if self._fwd is not None:
            return self._fwd[i]
        y = self._encrypt(i)
        while y >= self.n:
            y = self._encrypt(y)
        return y

    def inverse(self, p: int) -> int:
        if self._inv is not None:
            return self._inv[p]
        x = self._decrypt(p)
        while x >= self.n:
            x = self._decrypt(x)
        return x


class EvenSplit:
    """Split ``range(n)`` over ``targets`` slots.

    Positions ``[0, p1)`` of the permutation are in every slot.  The rest
    are dealt round-robin, so slot sizes differ by at most one.  If there
    are fewer dealt elements than slots, the extra slots get only the
    shared part, or, when the shared part is empty, reuse dealt elements
    cyclically so no slot is empty.
    """

    def __init__(self, n: int, targets: int, p1: int, perm: Permutation):
        if n <= 0 or targets <= 0:
            raise ValueError("EvenSplit needs a non-empty set and at least one target")
        self.n, self.targets, self.p1, self.perm = n, targets, p1, perm
        self.q = n - p1
        self._cyclic = p1 == 0 and self.q < targets

    def size(self, t: int) -> int:
        if self._cyclic:
            return 1
        q, d = self.q, self.targets
        return self.p1 + q // d + (1 if t < q % d else 0)

    def element_at(self, t: int, idx: int) -> int:
        if idx < self.p1:
            return self.perm(idx)
        if self._cyclic:
            return self.perm(t % self.q)
        return self.perm(self.p1 + t + (idx - self.p1) * self.targets)

    def position(self, t: int, s: int) -> int | None:
        """Index of element ``s`` inside slot ``t``, or None if absent."""
        pos = self.perm.inverse(s)
        if pos < self.p1:
            return pos
        r = pos - self.p1
        if self._cyclic:
            return 0 if r == t % self.q else None
        if r % self.targets != t:
            return None
        return self.p1 + r // self.targets

    def some_slot(self, s: int) -> int:
        """A slot containing element ``s`` (every element is in one)."""
        pos = self.perm.inverse(s)
        if pos < self.p1:
            return 0
        return (pos - self.p1) % self.targets

    def members(self, t: int) -> list[int]:
        return [self.element_at(t, i) for i in range(self.size(t))]


def even_split_for(n: int, targets: int, ratio, rng: random.Random) -> EvenSplit:
    """Draw one key from ``rng`` and build the split; shared by both modes."""
    key = rng.getrandbits(64)
    return EvenSplit(n, targets, fixed_count(n, ratio), Permutation(n, key))


def _mixed_radix(values: Sequence[int], radices: Sequence[int]) -> int:
    r = 0
    for v, b in zip(values, radices):
        r = r * b + v
    return r


def _digits(r: int, radices: Sequence[int]) -> list[int]:
    out = [0] * len(radices)
    for k in range(len(radices) - 1, -1, -1):
        r, out[k] = divmod(r, radices[k])
    return out


class SymbolicSplit:
    """Fair training set of ``C`` at ``ratio``, represented by ranks.

    Randomness is consumed in the same order as the materialized
    generator, so for equal seeds both describe the same training set.
    """

    def __init__(self, C: CompositionTree, ratio, rng: random.Random):
        self.C = C
        self.ratio = ratio
        t = C.tree
        self.dom_index = {a: {v: i for i, v in enumerate(C.dom[a])} for a in t.nodes}
        self.splits: dict[NodeId, list[dict]] = {}
        # per node: value -> (list of child tuples, cumulative offsets)
        self.blocks: dict[NodeId, dict] = {}
        self.block_offset: dict[NodeId, dict[tuple, int]] = {}
        self.class_size: dict[NodeId, dict] = {}
        self.n_leaves_under = {a: len(t.leaves_under(a)) for a in t.nodes}
        self._slots: dict = {}
        for a in t.postorder:
            kids = t.children[a]
            if not kids:
                self.class_size[a] = {v: 1 for v in C.dom[a]}
                continue
            sizes = [len(C.dom[c]) for c in kids]
            per_child = []
            for k, c in enumerate(kids):
                targets = math.prod(sizes[:k] + sizes[k + 1:])
                per_child.append({v: even_split_for(self.class_size[c][v], targets, ratio, rng) for v in C.dom[c]})
            self.splits[a] = per_child
            blocks: dict = {v: ([], [0]) for v in C.dom[a]}
            offsets = {}
            for key in itertools.product(*(C.dom[c] for c in kids)):
                size = self.block_size(a, key)
                tuples, cum = blocks[C.func[a][key]]
                offsets[key] = cum[-1]
                tuples.append(key)
                cum.append(cum[-1] + size)
            self.blocks[a] = blocks
            self.block_offset[a] = offsets
            self.class_size[a] = {v: blocks[v][1][-1] for v in C.dom[a]}
            if any(n == 0 for n in self.class_size[a].values()):
                raise AssertionError(f"empty class at {a!r}")

    # -- block geometry -------------------------------------------------

    def slot(self, a: NodeId, key: tuple, k: int) -> int:
        return self.slots(a, key)[k]

    def slots(self, a: NodeId, key: tuple) -> tuple[int, ...]:
        """Sibling-space index of ``key`` as seen from each child position."""
        got = self._slots.get((a, key))
        if got is None:
            kids = self.C.tree.children[a]
            idx = [self.dom_index[c][v] for c, v in zip(kids, key)]
            rad = [len(self.C.dom[c]) for c in kids]
            got = tuple(_mixed_radix(idx[:k] + idx[k + 1:], rad[:k] + rad[k + 1:]) for k in range(len(kids)))
            self._slots[(a, key)] = got
        return got

    def part_sizes(self, a: NodeId, key: tuple) -> list[int]:
        return [self.splits[a][k][v].size(sl) for k, (v, sl) in enumerate(zip(key, self.slots(a, key)))]

    def block_size(self, a: NodeId, key: tuple) -> int:
        return math.prod(self.part_sizes(a, key))

    @property
    def train_size(self) -> int:
        return sum(self.class_size[self.C.root].values())

    # -- rank / unrank --------------------------------------------------

    def unrank(self, a: NodeId, value, r: int) -> tuple:
        """The ``r``-th partial input (leaf values under ``a``) of class ``value``."""
        kids = self.C.tree.children[a]
        if not kids:
            if r != 0:
                raise IndexError(r)
            return (value,)
        tuples, cum = self.blocks[a][value]
        b = bisect.bisect_right(cum, r) - 1
        key = tuples[b]
        return self.unrank_in_block(a, key, r - cum[b])

    def unrank_in_block(self, a: NodeId, key: tuple, r: int) -> tuple:
        kids = self.C.tree.children[a]
        digits = _digits(r, self.part_sizes(a, key))
        slots = self.slots(a, key)
        out: list = []
        for k, (c, v) in enumerate(zip(kids, key)):
            s = self.splits[a][k][v].element_at(slots[k], digits[k])
            out.extend(self.unrank(c, v, s))
        return tuple(out)

    def rank(self, a: NodeId, p: Sequence) -> tuple | None:
        """``(value, rank)`` of partial input ``p`` at ``a``, or None if absent."""
        kids = self.C.tree.children[a]
        if not kids:
            return (p[0], 0) if p[0] in self.dom_index[a] else None
        key, inner, start = [], [], 0
        for c in kids:
            w = self.n_leaves_under[c]
            got = self.rank(c, p[start:start + w])
            if got is None:
                return None
            key.append(got[0])
            inner.append(got[1])
            start += w
        key = tuple(key)
        positions = []
        for k, v in enumerate(key):
            pos = self.splits[a][k][v].position(self.slot(a, key, k), inner[k])
            if pos is None:
                return None
            positions.append(pos)
        within = _mixed_radix(positions, self.part_sizes(a, key))
        return self.C.func[a][key], self.block_offset[a][key] + within

    def __contains__(self, x) -> bool:
        return self.rank(self.C.root, tuple(x)) is not None

    # -- sampling and enumeration ----------------------------------------

    def sample(self, rng: random.Random, value=None) -> tuple:
        """Uniform draw from the training set, optionally within one root class."""
        root = self.C.root
        if value is not None:
            return self.unrank(root, value, rng.randrange(self.class_size[root][value]))
        r = rng.randrange(self.train_size)
        for v in self.C.dom[root]:
            n = self.class_size[root][v]
            if r < n:
                return self.unrank(root, v, r)
            r -= n
        raise AssertionError("unreachable")

    def sample_block(self, rng: random.Random, key: tuple, a: NodeId | None = None) -> tuple:
        """Uniform draw among training inputs realizing ``key`` at node ``a``'s children."""
        a = a or self.C.root
        return self.unrank_in_block(a, key, rng.randrange(self.block_size(a, key)))

    def iter_train(self) -> Iterator[tuple]:
        root = self.C.root
        for v in self.C.dom[root]:
            for r in range(self.class_size[root][v]):
                yield self.unrank(root, v, r)

    # -- coverage --------------------------------------------------------

    def cover(self) -> list[tuple]:
        """Training inputs that together expose every local input of every node.

        For each node ``b`` and child tuple ``i``, take the first element of
        block ``i`` and lift it to the root: at each ancestor, pick the
        slot of the split that contains it and fill the siblings with the
        first element of their parts.
        """
        t = self.C.tree
        out, seen = [], set()
        for b in t.non_leaves:
            for key in itertools.product(*(self.C.dom[c] for c in t.children[b])):
                p = self.unrank_in_block(b, key, 0)
                node, value = b, self.C.func[b][key]
                rank = self.block_offset[b][key]
                while node != t.root:
                    p, value, rank = self._lift(node, value, rank, p)
                    node = t.parent[node]
                if p not in seen:
                    seen.add(p)
                    out.append(p)
        return out

    def _lift(self, c: NodeId, value, rank: int, p: tuple):
        t = self.C.tree
        a = t.parent[c]
        kids = t.children[a]
        k = kids.index(c)
        split = self.splits[a][k][value]
        slot = split.some_slot(rank)
        others = [c2 for j, c2 in enumerate(kids) if j != k]
        other_vals = _digits(slot, [len(self.C.dom[c2]) for c2 in others])
        key = []
        it = iter(other_vals)
        for j, c2 in enumerate(kids):
            key.append(value if j == k else self.C.dom[c2][next(it)])
        key = tuple(key)
        positions = []
        parts: list = []
        for j, (c2, v) in enumerate(zip(kids, key)):
            sp = self.splits[a][j][v]
            sl = self.slot(a, key, j)
            if j == k:
                pos = sp.position(sl, rank)
                parts.append(p)
            else:
                pos = 0
                parts.append(self.unrank(c2, v, sp.element_at(sl, 0)))
            positions.append(pos)
        lifted = tuple(itertools.chain.from_iterable(parts))
        new_rank = self.block_offset[a][key] + _mixed_radix(positions, self.part_sizes(a, key))
        return lifted, self.C.func[a][key], new_rank
