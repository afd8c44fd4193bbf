"""Natural-logic algebra: the seven basic relations, join, and projectivity.

Relations are compared extensionally over finite universes encoded as
integer bitmasks.  Joint projectivity signatures for ``some``/``every`` and
for ``not``/``ε`` are tabulated; the remaining quantifier pairs are derived by
parsing ``no`` as ``not some`` and ``not_every`` as ``not every``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping


class Relation(str, enum.Enum):
    EQ = "≡"
    FWD = "⊏"
    REV = "⊐"
    NEG = "^"
    ALT = "|"
    COV = "⌣"
    IND = "#"

    def __str__(self) -> str:
        return self.value

    @property
    def converse(self) -> "Relation":
        return _CONVERSE.get(self, self)

    @classmethod
    def parse(cls, text: str) -> "Relation":
        try:
            return cls(text)
        except ValueError:
            return _ASCII[text]


EQ, FWD, REV, NEG, ALT, COV, IND = Relation
RELATIONS: tuple[Relation, ...] = tuple(Relation)
# restrictor / modified-head relations after trimming
LEXICAL_RELATIONS: tuple[Relation, ...] = (IND, FWD, REV, EQ)

_CONVERSE = {FWD: REV, REV: FWD}
_ASCII = {"=": EQ, "<": FWD, ">": REV, "neg": NEG, "alt": ALT, "cov": COV}


class AmbiguityMismatch(ValueError):
    """Decompositions of a binary composition produced incompatible results."""


# ---------------------------------------------------------------------------
# extensional relations and join


def relation_of_extensions(x: Iterable | int, y: Iterable | int, universe: Iterable | int) -> Relation:
    """Classify the pair ``(x, y)`` by the set-theoretic definitions.

    Arguments are either Python sets or integer bitmasks (all three of the
    same kind).
    """
    if isinstance(x, int) and isinstance(y, int) and isinstance(universe, int):
        return _relation_bits(x, y, universe)
    xs, ys, us = set(x), set(y), set(universe)
    if xs == ys:
        return EQ
    if xs < ys:
        return FWD
    if xs > ys:
        return REV
    disjoint = not (xs & ys)
    exhaustive = (xs | ys) == us
    if disjoint:
        return NEG if exhaustive else ALT
    return COV if exhaustive else IND


def _relation_bits(x: int, y: int, full: int) -> Relation:
    if x == y:
        return EQ
    if x & ~y == 0:
        return FWD
    if y & ~x == 0:
        return REV
    exhaustive = (x | y) == full
    if x & y == 0:
        return NEG if exhaustive else ALT
    return COV if exhaustive else IND


def _join_table(size: int) -> dict[tuple[Relation, Relation], frozenset[Relation]]:
    full = (1 << size) - 1
    proper = range(1, full)  # no expression is empty or universal
    rel = [[_relation_bits(a, b, full) for b in range(full + 1)] for a in range(full + 1)]
    table: dict[tuple[Relation, Relation], set[Relation]] = {}
    for x in proper:
        rx = rel[x]
        for y in proper:
            r1 = rx[y]
            ry = rel[y]
            for z in proper:
                table.setdefault((r1, ry[z]), set()).add(rx[z])
    return {k: frozenset(v) for k, v in table.items()}


@lru_cache(maxsize=None)
def join_table(max_size: int = 6) -> Mapping[tuple[Relation, Relation], frozenset[Relation]]:
    """Exhaustive join table over universes of size ``max_size``.

    A universe of ``n`` elements embeds every smaller one (take unions of
    disjoint worlds), so the largest size is enough; the table is checked
    to be identical one size down.
    """
    table = _join_table(max_size)
    if max_size > 4 and _join_table(max_size - 1) != table:
        raise RuntimeError(f"join table not stable between sizes {max_size - 1} and {max_size}")
    return table


def brute_force_join(r1: Relation, r2: Relation) -> frozenset[Relation]:
    """Relations possible between x and z given x r1 y and y r2 z."""
    return join_table()[(Relation(r1), Relation(r2))]


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    """A total map on the seven relations, tagged with a readable name."""

    name: str
    table: tuple[Relation, ...]

    def __call__(self, r: Relation) -> Relation:
        return self.table[RELATIONS.index(r)]

    def __str__(self) -> str:
        return self.name

    @classmethod
    def from_row(cls, name: str, row: str) -> "Signature":
        return cls(name, tuple(Relation.parse(s) for s in row.split()))

    def then(self, outer: "Signature", name: str | None = None) -> "Signature":
        """Apply ``self`` first, then ``outer``."""
        return Signature(name or f"{outer.name}∘{self.name}", tuple(outer(self(r)) for r in RELATIONS))


def apply_signature(s: Signature, r: Relation) -> Relation:
    return s(r)


@dataclass(frozen=True)
class QuantifierJoint:
    """Joint projectivity of a premise/hypothesis quantifier pair."""

    premise: str
    hypothesis: str
    arg1: Signature
    arg2: Signature

    @property
    def name(self) -> str:
        return f"{self.premise}/{self.hypothesis}"

    def __str__(self) -> str:
        return self.name


# Column order: ≡ ⊏ ⊐ ^ | ⌣ #
JOINT_ROWS = {
    ("some", "every"): ("⊐ ⊐ ⊐ # # # #", "⊐ # ⊐ ^ | ⌣ #"),
    ("every", "some"): ("⊏ ⊏ ⊏ # # # #", "⊏ ⊏ # ^ | ⌣ #"),
    ("every", "every"): ("≡ ⊐ ⊏ | # | #", "≡ ⊏ ⊐ | | # #"),
    ("some", "some"): ("≡ ⊏ ⊐ ⌣ # ⌣ #", "≡ ⊏ ⊐ ⌣ # ⌣ #"),
    ("not", "ε"): ("^ ⌣ | ≡ ⊐ ⊏ #", None),
    ("ε", "not"): ("^ ⌣ | ≡ ⊏ ⊐ #", None),
    ("not", "not"): ("≡ ⊐ ⊏ ^ ⌣ | #", None),
    ("ε", "ε"): ("≡ ⊏ ⊐ ^ | ⌣ #", None),
}
# Entries that are not computed by projectivity of a single function
# (they need the joint view); flagged for table exports.
JOINT_ONLY = {
    (("some", "every"), 2, NEG), (("some", "every"), 2, ALT), (("some", "every"), 2, COV),
    (("every", "some"), 2, NEG), (("every", "some"), 2, ALT), (("every", "some"), 2, COV),
}
# The printed ε/not row disagrees with set algebra on ⊏ and ⊐: for x ⊂ y,
# x and (U - y) are disjoint and not exhaustive, i.e. alternation.
ERRATA = {(("ε", "not"), 1, FWD): ALT, (("ε", "not"), 1, REV): COV}


def _corrected_rows() -> dict[tuple[str, str], tuple[Signature, Signature | None]]:
    rows = {}
    for pair, (a1, a2) in JOINT_ROWS.items():
        s1 = Signature.from_row(f"{pair[0]}/{pair[1]}", a1)
        fixed = list(s1.table)
        for (epair, arg, r), value in ERRATA.items():
            if epair == pair and arg == 1:
                fixed[RELATIONS.index(r)] = value
        s1 = Signature(s1.name, tuple(fixed))
        s2 = Signature.from_row(f"{pair[0]}/{pair[1]}", a2) if a2 else None
        rows[pair] = (s1, s2)
    return rows


_ROWS = _corrected_rows()

NEGATION_PAIRS = (("ε", "ε"), ("not", "not"), ("not", "ε"), ("ε", "not"))
QUANTIFIERS = ("some", "every", "no", "not_every")
_BASE = {"some": "some", "every": "every", "no": "some", "not_every": "every"}
_NEGATIVE = {"no", "not_every"}


def negation_signature(premise: str, hypothesis: str) -> Signature:
    """Joint signature of a sentential/VP negation pair (``not`` or ``ε``)."""
    return _ROWS[(premise, hypothesis)][0]


def printed_joint_signature(premise: str, hypothesis: str, arg: int) -> Signature | None:
    """The row exactly as printed in the source table (errata not applied)."""
    row = JOINT_ROWS[(premise, hypothesis)][arg - 1]
    return Signature.from_row(f"{premise}/{hypothesis}", row) if row else None


@lru_cache(maxsize=None)
def quantifier_joint(q1: str, q2: str) -> QuantifierJoint:
    """Joint signature for any pair drawn from some/every/no/not_every.

    Negative quantifiers are the outer negation of their positive base, so
    the base pair's signature is post-composed with the ``not/ε``, ``ε/not``
    or ``not/not`` signature.
    """
    if q1 not in _BASE or q2 not in _BASE:
        raise ValueError(f"unknown quantifier pair {q1}/{q2}")
    base1, base2 = _ROWS[(_BASE[q1], _BASE[q2])]
    neg = ("not" if q1 in _NEGATIVE else "ε", "not" if q2 in _NEGATIVE else "ε")
    outer = negation_signature(*neg)
    name = f"{q1}/{q2}"
    return QuantifierJoint(q1, q2, base1.then(outer, name), base2.then(outer, name))


# modifiers: signatures over {≡, #} inputs, extended as identity elsewhere
EPSILON = "ε"


def _modifier_signature(name: str, on_eq: Relation) -> Signature:
    table = tuple(on_eq if r is EQ else (r if r is IND else IND) for r in RELATIONS)
    return Signature(name, table)


MODIFIER_SIGNATURES = {
    "id": _modifier_signature("id", EQ),
    "ε/m": _modifier_signature("ε/m", REV),
    "m/ε": _modifier_signature("m/ε", FWD),
    "m/m'": _modifier_signature("m/m'", IND),
}


def modifier_joint(m1: str, m2: str) -> Signature:
    """Joint signature of two intersective modifiers (``ε`` for none).

    Distinct modifier tokens are lexically independent.
    """
    if m1 == m2:
        return MODIFIER_SIGNATURES["id"]
    if m1 == EPSILON:
        return MODIFIER_SIGNATURES["ε/m"]
    if m2 == EPSILON:
        return MODIFIER_SIGNATURES["m/ε"]
    return MODIFIER_SIGNATURES["m/m'"]


# ---------------------------------------------------------------------------
# binary composition under a quantifier pair


def determinize(candidates: frozenset[Relation]) -> Relation:
    """Collapse a join result to one relation; ambiguity means independence."""
    if len(candidates) == 1:
        return next(iter(candidates))
    return IND


def decompositions(j: QuantifierJoint, r_restrictor: Relation, r_scope: Relation) -> dict[str, frozenset[Relation]]:
    """Join sets for the four two-step paths from Q(A,B) to Q'(A',B').

    Each path changes one argument at a time; the joint signature is used
    on the step that switches quantifier and the self-signature of the
    fixed quantifier on the other step.
    """
    qp = quantifier_joint(j.premise, j.premise)
    qh = quantifier_joint(j.hypothesis, j.hypothesis)
    return {
        "restrictor-joint,scope-self": brute_force_join(j.arg1(r_restrictor), qh.arg2(r_scope)),
        "scope-self,restrictor-joint": brute_force_join(qp.arg2(r_scope), j.arg1(r_restrictor)),
        "scope-joint,restrictor-self": brute_force_join(j.arg2(r_scope), qh.arg1(r_restrictor)),
        "restrictor-self,scope-joint": brute_force_join(qp.arg1(r_restrictor), j.arg2(r_scope)),
    }


def compose_binary(j: QuantifierJoint, r_restrictor: Relation, r_scope: Relation) -> Relation:
    """Relation between ``Q(A, B)`` and ``Q'(A', B')`` from the argument relations."""
    paths = decompositions(j, Relation(r_restrictor), Relation(r_scope))
    common = frozenset.intersection(*paths.values())
    if not common:
        raise AmbiguityMismatch(f"{j.name} on ({r_restrictor}, {r_scope}): paths disagree {paths}")
    return determinize(common)


# ---------------------------------------------------------------------------
# extensional verification of signature cells

NEGATIONS_ = ("not", "ε")
# relations a concrete witness may show when a cell promises ``r``
REFINEMENTS = {
    EQ: frozenset({EQ}),
    FWD: frozenset({EQ, FWD}),
    REV: frozenset({EQ, REV}),
    NEG: frozenset({NEG}),
    ALT: frozenset({NEG, ALT}),
    COV: frozenset({NEG, COV}),
    IND: frozenset(RELATIONS),
}


def _holds(q: str, a: int, b: int) -> bool:
    if q in ("some", "no"):
        t = a & b != 0
    elif q in ("every", "not_every"):
        t = a & ~b == 0
    else:
        raise ValueError(q)
    return not t if q in _NEGATIVE else t


def aggregate(seen: Iterable[Relation]) -> Relation:
    """Tightest relation whose refinements include every relation in ``seen``."""
    seen = frozenset(seen)
    for r in (EQ, NEG, FWD, REV, ALT, COV):
        if seen <= REFINEMENTS[r]:
            return r
    return IND


def extensional_signature(q1: str, q2: str, arg: int, sizes=(2, 3, 4), inputs=RELATIONS, strict: bool = False) -> dict:
    """Signature of a quantifier pair derived directly from the quantifier
    meanings, by exhausting argument pairs over the given universe sizes.

    An input relation admits every argument pair whose relation refines it
    (``#`` admits anything), matching how the tables are used; ``strict``
    admits only pairs in exactly that relation.  Inputs never realized are
    omitted.
    """
    seen: dict = {r: set() for r in inputs}
    for size in sizes:
        full = (1 << size) - 1
        for x in range(1, full):
            for y in range(1, full):
                rel = _relation_bits(x, y, full)
                hit = [r for r in inputs if (rel == r if strict else rel in REFINEMENTS[r])]
                if hit:
                    image = cell_image((q1, q2), arg, x, y, size)
                    for r in hit:
                        seen[r].add(image)
    return {r: aggregate(v) for r, v in seen.items() if v}


def random_pair_with(r: Relation, size: int, rng, tries: int = 2000) -> tuple[int, int] | None:
    """Random non-empty, non-universal sets ``x r y`` over ``size`` elements."""
    full = (1 << size) - 1
    for _ in range(tries):
        x, y = rng.randrange(1, full), rng.randrange(1, full)
        if _relation_bits(x, y, full) == r:
            return x, y
    return None


def cell_image(pair: tuple[str, str], arg: int, x: int, y: int, size: int) -> Relation:
    """Relation between the two sides' denotations when argument ``arg``
    holds ``x`` on the premise side and ``y`` on the hypothesis side.

    Negation sides denote complements.  Quantifier sides denote the set of
    values of the other argument (ranging over non-empty, non-universal
    sets) that make the sentence true.
    """
    full = (1 << size) - 1
    p, h = pair
    if p in NEGATIONS_:
        fx = full ^ x if p == "not" else x
        fy = full ^ y if h == "not" else y
        return _relation_bits(fx, fy, full)
    others = range(1, full)
    px = hy = 0
    for i, o in enumerate(others):
        if (_holds(p, x, o) if arg == 1 else _holds(p, o, x)):
            px |= 1 << i
        if (_holds(h, y, o) if arg == 1 else _holds(h, o, y)):
            hy |= 1 << i
    return _relation_bits(px, hy, (1 << len(others)) - 1)


@dataclass
class CellCheck:
    pair: tuple
    arg: int
    relation: Relation
    claimed: Relation
    witnesses: int
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def check_cell(pair: tuple[str, str], arg: int, r: Relation, claimed: Relation, rng, witnesses: int = 100, max_size: int = 6) -> CellCheck:
    """Test ``claimed`` against random witness pairs in relation ``r``."""
    done = 0
    attempts = 0
    while done < witnesses:
        attempts += 1
        if attempts > 50 * witnesses:
            raise RuntimeError(f"could not find witnesses for {r} on universes up to {max_size}")
        size = rng.randrange(2, max_size + 1)
        got = random_pair_with(r, size, rng, tries=200)
        if got is None:
            continue
        x, y = got
        image = cell_image(pair, arg, x, y, size)
        done += 1
        if image not in REFINEMENTS[claimed]:
            cex = {"size": size, "x": x, "y": y, "image": image}
            return CellCheck(pair, arg, r, claimed, done, cex)
    return CellCheck(pair, arg, r, claimed, done)


def joint_table_cells(printed: bool = False):
    """``(pair, arg, relation, claimed)`` for every filled cell of the base
    rows, corrected unless ``printed``."""
    for pair in JOINT_ROWS:
        for arg in (1, 2):
            sig = printed_joint_signature(*pair, arg) if printed else (_ROWS[pair][arg - 1])
            if sig is None:
                continue
            for r in RELATIONS:
                yield pair, arg, r, sig(r)


# ---------------------------------------------------------------------------
# exports


def format_signature_table(rows: Mapping[str, Signature | None], title: str = "") -> str:
    header = "".join(f"{r.value:>3}" for r in RELATIONS)
    width = max([len(k) for k in rows] + [len(title)])
    lines = [f"{title:<{width}} {header}"]
    for name, sig in rows.items():
        cells = "".join(f"{(sig(r).value if sig else '-'):>3}" for r in RELATIONS)
        lines.append(f"{name:<{width}} {cells}")
    return "\n".join(lines)


def export_joint_table() -> str:
    """Both argument positions of the base rows, laid out side by side."""
    lines = []
    for pair, (a1, a2) in _ROWS.items():
        name = f"{pair[0]}/{pair[1]}"
        c1 = " ".join(r.value for r in a1.table)
        c2 = " ".join(r.value for r in a2.table) if a2 else " ".join("-" * 7)
        lines.append(f"{name:<12} {c1}   {c2}")
    head = f"{'':<12} {' '.join(r.value for r in RELATIONS)}   {' '.join(r.value for r in RELATIONS)}"
    return "\n".join([head, *lines])


def export_join_table() -> str:
    lines = ["join  " + "  ".join(f"{r.value:<8}" for r in RELATIONS)]
    for r1 in RELATIONS:
        cells = []
        for r2 in RELATIONS:
            s = "".join(r.value for r in RELATIONS if r in brute_force_join(r1, r2))
            cells.append(f"{s:<8}")
        lines.append(f"{r1.value:<5} " + "  ".join(cells))
    return "\n".join(lines)


def all_quantifier_joints() -> list[QuantifierJoint]:
    return [quantifier_joint(a, b) for a, b in itertools.product(QUANTIFIERS, repeat=2)]
