"""Random small composition trees for property tests."""

import itertools
import random

from fairnli.comptree import CompositionTree, OrderedTree, trim_domains


def random_tree(rng: random.Random, max_depth: int = 4, max_domain: int = 6, max_children: int = 3, max_inputs: int = 4000):
    """A random surjective composition tree with at most ``max_inputs`` inputs."""
    while True:
        children, dom = {}, {}
        counter = itertools.count()

        def grow(depth):
            a = f"n{next(counter)}"
            leaf = depth >= max_depth - 1 or (depth > 0 and rng.random() < 0.4)
            if leaf:
                children[a] = ()
                dom[a] = tuple(f"v{i}" for i in range(rng.randint(1, max_domain)))
                return a
            kids = tuple(grow(depth + 1) for _ in range(rng.randint(1, max_children)))
            children[a] = kids
            dom[a] = tuple(f"v{i}" for i in range(rng.randint(1, max_domain)))
            return a

        root = grow(0)
        tree = OrderedTree(root, children)
        size = 1
        for leaf in tree.leaves:
            size *= len(dom[leaf])
        if size > max_inputs or tree.is_leaf(root):
            continue
        func = {}
        for a in tree.non_leaves:
            outs = dom[a]
            func[a] = {key: rng.choice(outs) for key in itertools.product(*(dom[c] for c in tree.children[a]))}
        # values no child tuple produces are dropped bottom up
        return trim_domains(CompositionTree(tree, dom, func))
