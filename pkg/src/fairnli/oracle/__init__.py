"""Bounded finite-model oracle for fragment pairs.

Models assign every open-class word in a pair an extension over a small
universe.  Lexical extensions are non-empty and non-universal, ε is the
universal set, and by default every modifier ∩ head intersection is
non-empty as well.  The search is exhaustive where the space is
small and seeded random sampling elsewhere, so a refutation is exact but a
confirmation is only as good as the budget.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

import numpy as np

from ..fragment import CONTRADICTION, ENTAILMENT, EPSILON, NEUTRAL, Sentence
from . import _models
from ._models import MAX_UNIVERSE, PairLexicon, pair_lexicon

try:
    if os.environ.get("FAIRNLI_BACKEND", "").lower() in ("python", "numpy"):
        raise ImportError("fallback forced")
    from . import _kernels as _backend

    BACKEND = "cython"
except ImportError:
    from . import _numpy_kernels as _backend

    BACKEND = "numpy"

from . import _numpy_kernels

ENTAILED, CONTRADICTORY, NEUTRAL_VERDICT, UNKNOWN = "Entailed", "Contradictory", "Neutral", "Unknown"
VERDICT_FOR_LABEL = {ENTAILMENT: ENTAILED, CONTRADICTION: CONTRADICTORY, NEUTRAL: NEUTRAL_VERDICT}


class MissingExtension(KeyError):
    pass


def kernels(name: str | None = None):
    """The active kernel module, or a named one (``"cython"`` / ``"numpy"``)."""
    if name is None:
        return _backend
    if name == "numpy":
        return _numpy_kernels
    from . import _kernels

    return _kernels


@dataclass(frozen=True)
class Model:
    size: int
    unary: dict
    binary: dict

    @property
    def universe(self) -> frozenset:
        return frozenset(range(self.size))

    @classmethod
    def from_masks(cls, k: int, lex: PairLexicon, urow, brow) -> "Model":
        unary = {t: frozenset(x for x in range(k) if (int(m) >> x) & 1) for t, m in zip(lex.unary, urow)}
        binary = {
            t: frozenset((x, y) for x in range(k) for y in range(k) if (int(m) >> (x * k + y)) & 1)
            for t, m in zip(lex.binary, brow)
        }
        return cls(k, unary, binary)

    def to_dict(self) -> dict:
        return {
            "universe": self.size,
            "unary": {t: sorted(v) for t, v in self.unary.items()},
            "binary": {t: sorted(map(list, v)) for t, v in self.binary.items()},
        }

    def violations(self) -> list[str]:
        """Lexical extensions that are empty or universal."""
        out = []
        u = self.universe
        pairs = frozenset((x, y) for x in u for y in u)
        for t, ext in self.unary.items():
            if not ext or ext == u:
                out.append(f"{t} empty or universal")
        for t, ext in self.binary.items():
            if not ext or ext == pairs:
                out.append(f"{t} empty or universal")
        return out


def _quantify(q: str, restrictor: frozenset, scope: frozenset) -> bool:
    if q in ("some", "no"):
        t = bool(restrictor & scope)
    else:
        t = restrictor <= scope
    return not t if q in ("no", "not_every") else t


def evaluate_sentence(m: Model, s: Sentence) -> bool:
    """Truth of ``s`` in ``m``, with surface-order scope (set-based reference)."""
    u = m.universe

    def ext(table, tok, full):
        if tok == EPSILON:
            return full
        try:
            return table[tok]
        except KeyError:
            raise MissingExtension(tok) from None

    pairs = frozenset((x, y) for x in u for y in u)
    subj = ext(m.unary, s.adj_s, u) & ext(m.unary, s.n_s, u)
    obj = ext(m.unary, s.adj_o, u) & ext(m.unary, s.n_o, u)
    rel = ext(m.binary, s.adv, pairs) & ext(m.binary, s.v, pairs)
    scope = set()
    for x in u:
        t = _quantify(s.q_o, obj, frozenset(y for y in u if (x, y) in rel))
        if s.neg == "not":
            t = not t
        if t:
            scope.add(x)
    return _quantify(s.q_s, subj, frozenset(scope))


@dataclass(frozen=True)
class OracleConfig:
    max_universe: int = 3
    budget: int = 20_000
    seed: int = 0
    properness: str = "derived"
    chunk: int = 4096
    min_universe: int = 2


@dataclass
class Verdict:
    kind: str
    models_checked: int
    budget: int
    witness_both: Model | None = None  # satisfies P and H
    witness_premise_only: Model | None = None  # satisfies P and not H
    universes: tuple = ()
    exhaustive: tuple = ()

    def to_dict(self) -> dict:
        return {
            "verdict": self.kind,
            "models_checked": self.models_checked,
            "budget": self.budget,
            "universes": list(self.universes),
            "exhaustive": list(self.exhaustive),
            "witness_p_and_h": self.witness_both.to_dict() if self.witness_both else None,
            "witness_p_and_not_h": self.witness_premise_only.to_dict() if self.witness_premise_only else None,
        }


def pair_seed(premise: Sentence, hypothesis: Sentence, seed: int) -> np.random.SeedSequence:
    digest = hashlib.sha256(f"{premise}|{hypothesis}".encode()).digest()
    return np.random.SeedSequence([seed, int.from_bytes(digest[:8], "little")])


def adjudicate(premise: Sentence, hypothesis: Sentence, config: OracleConfig = OracleConfig(), backend=None) -> Verdict:
    """Search for models of P∧H and P∧¬H up to ``config.max_universe``."""
    kern = backend or _backend
    lex = pair_lexicon(premise, hypothesis)
    sp, sh = lex.spec(premise), lex.spec(hypothesis)
    rng = np.random.default_rng(pair_seed(premise, hypothesis, config.seed))
    if config.max_universe > MAX_UNIVERSE:
        raise ValueError(f"max_universe above {MAX_UNIVERSE} is not supported")
    sizes = list(range(config.min_universe, config.max_universe + 1))
    checked = 0
    both = only_p = None
    exhaustive = []

    def batches(k, remaining, last):
        space = _models.space_size(lex, k)
        if space <= remaining:
            exhaustive.append(k)
            for start in range(0, space, config.chunk):
                yield _models.enumerate_range(lex, k, start, min(space, start + config.chunk))
            return
        share = remaining if last else remaining // (len(sizes) - sizes.index(k))
        done = 0
        while done < share:
            n = min(config.chunk, share - done)
            done += n
            yield _models.sample(lex, k, n, rng)

    for k in sizes:
        remaining = config.budget - checked
        if remaining <= 0:
            break
        for U, B in batches(k, remaining, k == sizes[-1]):
            checked += U.shape[0]
            ok = _models.valid(U, B, lex, config.properness)
            if not ok.any():
                continue
            U, B = np.ascontiguousarray(U[ok]), np.ascontiguousarray(B[ok])
            p, h = kern.eval_pair(U, B, k, sp, sh)
            if both is None:
                hit = np.flatnonzero(p & h)
                if hit.size:
                    both = Model.from_masks(k, lex, U[hit[0]], B[hit[0]])
            if only_p is None:
                hit = np.flatnonzero(p & ~h)
                if hit.size:
                    only_p = Model.from_masks(k, lex, U[hit[0]], B[hit[0]])
            if both is not None and only_p is not None:
                break
        if both is not None and only_p is not None:
            break
    if both is not None and only_p is not None:
        kind = NEUTRAL_VERDICT
    elif both is not None:
        kind = ENTAILED
    elif only_p is not None:
        kind = CONTRADICTORY
    else:
        kind = UNKNOWN
    return Verdict(kind, checked, config.budget, both, only_p, tuple(sizes), tuple(exhaustive))


@dataclass
class Agreement:
    consistent: bool
    label: str
    verdict: Verdict
    counterexample: Model | None = None
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "label": self.label,
            "reason": self.reason,
            **self.verdict.to_dict(),
            "counterexample": self.counterexample.to_dict() if self.counterexample else None,
        }


def check_agreement(premise: Sentence, hypothesis: Sentence, label: str, verdict: Verdict) -> Agreement:
    """Consistent when the verdict matches the label or is Unknown.

    The counterexample, when there is one, is re-checked with the set-based
    evaluator before it is reported.
    """
    if verdict.kind == UNKNOWN or verdict.kind == VERDICT_FOR_LABEL[label]:
        return Agreement(True, label, verdict)
    if label == ENTAILMENT:
        # a model of P and not H refutes entailment; otherwise P∧H is missing
        cex = verdict.witness_premise_only
        reason = "premise true, hypothesis false" if cex else "no model of premise and hypothesis"
    elif label == CONTRADICTION:
        cex = verdict.witness_both
        reason = "premise and hypothesis both true" if cex else "no model of premise without hypothesis"
    else:
        cex = None
        reason = f"oracle found {verdict.kind} for a neutral label"
    if cex is not None:
        p, h = evaluate_sentence(cex, premise), evaluate_sentence(cex, hypothesis)
        expected = (True, False) if label == ENTAILMENT else (True, True)
        if (p, h) != expected:
            raise AssertionError(f"kernel and reference evaluator disagree on {cex}")
    return Agreement(False, label, verdict, cex, reason)


__all__ = [
    "BACKEND",
    "Model",
    "OracleConfig",
    "Verdict",
    "Agreement",
    "MissingExtension",
    "evaluate_sentence",
    "adjudicate",
    "check_agreement",
    "pair_lexicon",
    "kernels",
]
