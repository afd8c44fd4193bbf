"""Finite models as integer bitmasks, generated in batches.

A unary predicate over a universe of size ``k`` is a ``k``-bit mask; a
binary predicate is a ``k*k``-bit mask with pair ``(x, y)`` at bit
``x*k + y``.  Batches are int64 arrays of shape ``(models, predicates)``.
Generation is shared by every backend so results do not depend on which
kernel evaluates them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fragment import EPSILON, Sentence

QUANTIFIER_CODES = {"some": 0, "every": 1, "no": 2, "not_every": 3}
MAX_UNIVERSE = 7  # k*k bits must fit in an int64


@dataclass(frozen=True)
class PairLexicon:
    """Predicates needed for one pair, and the modifier/head pairs in it."""

    unary: tuple[str, ...]
    binary: tuple[str, ...]
    unary_proper: tuple[tuple[int, int], ...]  # (modifier, head) indices
    binary_proper: tuple[tuple[int, int], ...]

    def spec(self, s: Sentence) -> np.ndarray:
        """Nine ints describing ``s``: quantifiers as codes, words as
        predicate indices, ε modifiers as -1, negation as 0/1."""
        u = {t: i for i, t in enumerate(self.unary)}
        b = {t: i for i, t in enumerate(self.binary)}

        def mod(table, tok):
            return -1 if tok == EPSILON else table[tok]

        return np.array(
            [
                QUANTIFIER_CODES[s.q_s], mod(u, s.adj_s), u[s.n_s],
                1 if s.neg == "not" else 0, mod(b, s.adv), b[s.v],
                QUANTIFIER_CODES[s.q_o], mod(u, s.adj_o), u[s.n_o],
            ],
            dtype=np.int64,
        )


def pair_lexicon(premise: Sentence, hypothesis: Sentence) -> PairLexicon:
    unary: list[str] = []
    binary: list[str] = []

    def add(lst, tok):
        if tok != EPSILON and tok not in lst:
            lst.append(tok)

    for s in (premise, hypothesis):
        for tok in (s.n_s, s.n_o, s.adj_s, s.adj_o):
            add(unary, tok)
        for tok in (s.v, s.adv):
            add(binary, tok)
    up, bp = set(), set()
    for s in (premise, hypothesis):
        for m, h in ((s.adj_s, s.n_s), (s.adj_o, s.n_o)):
            if m != EPSILON:
                up.add((unary.index(m), unary.index(h)))
        if s.adv != EPSILON:
            bp.add((binary.index(s.adv), binary.index(s.v)))
    return PairLexicon(tuple(unary), tuple(binary), tuple(sorted(up)), tuple(sorted(bp)))


def option_counts(k: int) -> tuple[int, int]:
    """Non-empty, non-universal masks available per unary / binary predicate."""
    return (1 << k) - 2, (1 << (k * k)) - 2


def space_size(lex: PairLexicon, k: int) -> int:
    nu, nb = option_counts(k)
    return nu ** len(lex.unary) * nb ** len(lex.binary)


# how far the non-empty / non-universal assumption reaches:
#   lexical  only the words themselves
#   derived  also every modifier ∩ head intersection (non-universal follows
#            from the head being non-universal)
#   proper   derived, and the intersection is a strict subset of the head
PROPERNESS_MODES = ("derived", "proper", "lexical")


def valid(U: np.ndarray, B: np.ndarray, lex: PairLexicon, properness: str = "derived") -> np.ndarray:
    if properness not in PROPERNESS_MODES:
        raise ValueError(f"unknown properness mode {properness!r}")
    ok = np.ones(U.shape[0], dtype=bool)
    if properness == "lexical":
        return ok
    for arr, pairs in ((U, lex.unary_proper), (B, lex.binary_proper)):
        for m, h in pairs:
            inter = arr[:, m] & arr[:, h]
            ok &= inter != 0
            if properness == "proper":
                ok &= inter != arr[:, h]
    return ok


def sample(lex: PairLexicon, k: int, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    nu, nb = option_counts(k)
    U = rng.integers(1, nu + 1, size=(n, len(lex.unary)), dtype=np.int64)
    B = rng.integers(1, nb + 1, size=(n, len(lex.binary)), dtype=np.int64)
    return U, B


def enumerate_range(lex: PairLexicon, k: int, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Models ``start..stop-1`` of the full space in mixed-radix order."""
    nu, nb = option_counts(k)
    idx = np.arange(start, stop, dtype=np.int64)
    U = np.empty((idx.size, len(lex.unary)), dtype=np.int64)
    B = np.empty((idx.size, len(lex.binary)), dtype=np.int64)
    for j in range(len(lex.binary) - 1, -1, -1):
        idx, B[:, j] = np.divmod(idx, nb)
    for j in range(len(lex.unary) - 1, -1, -1):
        idx, U[:, j] = np.divmod(idx, nu)
    return U + 1, B + 1
