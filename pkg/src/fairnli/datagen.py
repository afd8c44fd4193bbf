"""Corpus construction over the aligned tree.

Train records are drawn from a fair training set (symbolic, so membership
and sampling never enumerate the input space); dev and test records come
from its complement.  Both samplers target joint cells of (label, subject
NP relation, adverb-verb relation, object NP relation) whose weights are
raked so that labels are uniform thirds and each modifier-head site is
uniform over its four relations.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import random
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import __version__
from .baseline import InconsistentLabels, LabeledExample, evaluate, learn
from .comptree import CompositionTree, input_space_size, trace, trace_partial, tree_hash
from .fairsplit import is_fair, symbolic_split
from .fragment import (
    CONTRADICTION,
    ENTAILMENT,
    LABELS,
    SUBTASKS,
    SLOTS,
    PairExample,
    Sentence,
    Vocabulary,
    build_aligned_tree,
    label_pair,
    negation_count,
    pair_input,
    rel_to_label,
    split_input,
    word_relation,
)
from .natlog import EPSILON, EQ, FWD, IND, MODIFIER_SIGNATURES, REV, modifier_joint
from .symsplit import SymbolicSplit

SITE_RELATIONS = (EQ, FWD, REV, IND)
SITE_NODES = ("subj_np", "adv_verb", "obj_np")
SITE_SLOTS = {"subj_np": ("adj_s", "n_s"), "adv_verb": ("adv", "v"), "obj_np": ("adj_o", "n_o")}
SPLIT_TAGS = ("train", "dev", "test")


class ExhaustedRejectionBudget(RuntimeError):
    def __init__(self, cell, attempts: int):
        super().__init__(f"no sample for cell {cell_name(cell)} after {attempts} attempts")
        self.cell = cell
        self.attempts = attempts


def cell_name(cell) -> str:
    return "/".join(map(str, cell))


def derive_seed(seed: int, tag: str) -> int:
    digest = hashlib.sha256(f"{seed}:{tag}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass(frozen=True)
class CorpusConfig:
    n_open: int = 100
    ratio: str = "0"
    train: int = 500_000
    dev: int = 10_000
    test: int = 10_000
    seed: int = 0
    max_universe: int = 3
    budget: int = 20_000
    oracle_samples: int = 200
    out: str | None = None
    pool_cap: int = 64
    rejection_budget: int = 20_000

    def __post_init__(self):
        # keep the ratio as exact decimal text so manifests round-trip
        object.__setattr__(self, "ratio", str(self.ratio))
        self.validate()

    @property
    def ratio_value(self) -> Fraction:
        return Fraction(self.ratio)

    def validate(self) -> None:
        if self.n_open < 1:
            raise ValueError("n_open must be at least 1")
        if not 0 <= self.ratio_value <= 1:
            raise ValueError("ratio must lie in [0, 1]")
        for name in ("train", "dev", "test"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} size must be positive")
        if self.pool_cap < 1 or self.rejection_budget < 1:
            raise ValueError("pool_cap and rejection_budget must be positive")


def site_profile(nodes: Mapping) -> tuple:
    return tuple(nodes[a] for a in SITE_NODES)


def example_cell(ex: PairExample) -> tuple:
    return (ex.label, *site_profile(ex.nodes))


# ---------------------------------------------------------------------------
# cell weights


def rake(support: Mapping[tuple, float], targets: Sequence[Mapping], iterations: int = 2000, tol: float = 1e-12) -> dict:
    """Iterative proportional fitting of cell weights to per-dimension
    marginal shares.  Dimension ``d`` of a cell is matched to ``targets[d]``,
    renormalized over the values that still carry weight, so infeasible
    targets degrade to the closest reachable shares instead of to zero.
    Dimension 0 is fitted last in each sweep, so it wins any conflict."""
    w = {c: float(v) for c, v in support.items() if v > 0}
    for _ in range(iterations):
        worst = 0.0
        for d, target in reversed(list(enumerate(targets))):
            total = sum(w.values())
            marg = defaultdict(float)
            for c, v in w.items():
                marg[c[d]] += v / total
            reach = sum(target.get(v, 0.0) for v in marg)
            if reach <= 0:
                continue
            for c in w:
                t, m = target.get(c[d], 0.0) / reach, marg[c[d]]
                worst = max(worst, abs(t - m))
                w[c] *= t / m
            w = {c: v for c, v in w.items() if v > 0}
        if worst < tol:
            break
    total = sum(w.values())
    return {c: v / total for c, v in w.items()}


def allocate(probs: Mapping[tuple, float], n: int) -> dict:
    """Integer counts summing to ``n`` by largest remainder; ties by cell order."""
    cells = sorted(probs, key=cell_name)
    raw = {c: probs[c] * n for c in cells}
    counts = {c: int(raw[c]) for c in cells}
    left = n - sum(counts.values())
    order = sorted(cells, key=lambda c: (-(raw[c] - counts[c]), cell_name(c)))
    for c in order[:left]:
        counts[c] += 1
    return {c: k for c, k in counts.items() if k}


def uniform_targets(already: Counter | None = None, n: int = 0) -> list[dict]:
    """Marginal shares for the cells still to be drawn, given ``already``
    drawn cells out of ``n`` in total."""
    shares = [{lab: 1 / 3 for lab in LABELS}] + [{r: 1 / 4 for r in SITE_RELATIONS} for _ in SITE_NODES]
    if not already:
        return shares
    done = sum(already.values())
    out = []
    for d, share in enumerate(shares):
        have = Counter()
        for c, k in already.items():
            have[c[d]] += k
        need = {v: max(0.0, s * n - have[v]) for v, s in share.items()}
        total = sum(need.values()) or 1.0
        out.append({v: x / total for v, x in need.items()})
    assert done <= n
    return out


def cell_schedule(probs: Mapping, n: int, rng: random.Random) -> list[tuple]:
    counts = allocate(probs, n)
    cells = list(itertools.chain.from_iterable([c] * k for c, k in sorted(counts.items(), key=lambda kv: cell_name(kv[0]))))
    rng.shuffle(cells)
    return cells


# ---------------------------------------------------------------------------
# train sampling


class TrainSampler:
    """Draws training inputs for a requested cell.

    For every root block (subject quantifier signature, subject relation,
    negated-VP relation) the label and subject relation are fixed; the
    deep site relations depend on which negated-VP partial input is
    chosen.  Up to ``pool_cap`` members of each block's negated-VP part are
    indexed by their site relations; sampling picks an indexed entry, and
    for parts larger than the cap first tries fresh members.
    """

    def __init__(self, split: SymbolicSplit, pool_cap: int, rng: random.Random, fresh_tries: int = 4):
        self.split = split
        self.C = split.C
        self.pool_cap = pool_cap
        self.fresh_tries = fresh_tries
        C = self.C
        root = C.root
        self.kids = C.tree.children[root]
        assert self.kids == ("proj_q_s", "subj_np", "neg_vp")
        self.index: dict[tuple, list] = defaultdict(list)
        for key in itertools.product(*(C.dom[c] for c in self.kids)):
            part, slot = self._part(key, 2)
            size = part.size(slot)
            if size <= pool_cap:
                idxs = range(size)
            else:
                idxs = sorted({rng.randrange(size) for _ in range(pool_cap)})
            for i in idxs:
                self.index[self._cell(key, i)].append((key, i))

    def _part(self, key, k):
        return self.split.splits[self.C.root][k][key[k]], self.split.slot(self.C.root, key, k)

    def _neg_vp(self, key, i) -> tuple:
        part, slot = self._part(key, 2)
        return self.split.unrank("neg_vp", key[2], part.element_at(slot, i))

    def _cell(self, key, i) -> tuple:
        vals = trace_partial(self.C, "neg_vp", self._neg_vp(key, i))
        label = rel_to_label(self.C.func[self.C.root][key])
        return (label, key[1], vals["adv_verb"], vals["obj_np"])

    @property
    def support(self) -> dict:
        return {c: len(v) for c, v in self.index.items()}

    def draw(self, cell, rng: random.Random) -> tuple:
        entries = self.index.get(cell)
        if not entries:
            raise ExhaustedRejectionBudget(cell, 0)
        key, i = entries[rng.randrange(len(entries))]
        part, slot = self._part(key, 2)
        size = part.size(slot)
        if size > self.pool_cap:
            for _ in range(self.fresh_tries):
                j = rng.randrange(size)
                if self._cell(key, j) == cell:
                    i = j
                    break
        pieces = []
        for k, c in enumerate(self.kids[:2]):
            p, sl = self._part(key, k)
            r = p.element_at(sl, rng.randrange(p.size(sl)))
            pieces.append(self.split.unrank(c, key[k], r))
        pieces.append(self._neg_vp(key, i))
        return tuple(itertools.chain.from_iterable(pieces))


# ---------------------------------------------------------------------------
# held-out sampling


def force_site(vocab: Vocabulary, node: str, relation, rng: random.Random, attempts: int = 1000) -> tuple:
    """Premise/hypothesis tokens ``(mod_p, mod_h, head_p, head_h)`` whose
    modifier-head composition has ``relation``."""
    mod_slot, head_slot = SITE_SLOTS[node]
    mods = vocab.slot_domain(mod_slot)
    opens = vocab.open_words(mod_slot)
    heads = vocab.slot_domain(head_slot)
    if relation == EQ:
        m, h = rng.choice(mods), rng.choice(heads)
        return m, m, h, h
    if relation == FWD:
        return rng.choice(opens), EPSILON, *([rng.choice(heads)] * 2)
    if relation == REV:
        return EPSILON, rng.choice(opens), *([rng.choice(heads)] * 2)
    if relation == IND:
        for _ in range(attempts):
            mp, mh, hp, hh = rng.choice(mods), rng.choice(mods), rng.choice(heads), rng.choice(heads)
            if MODIFIER_SIGNATURES[modifier_joint(mp, mh).name](word_relation(hp, hh)) == IND:
                return mp, mh, hp, hh
        raise ExhaustedRejectionBudget((node, relation), attempts)
    raise ValueError(f"site relation {relation!r} cannot be forced")


def propose_pair(vocab: Vocabulary, sites: Sequence, rng: random.Random) -> tuple[Sentence, Sentence]:
    """Slot-wise proposal: site relations forced, closed-class slots uniform."""
    p: dict = {}
    h: dict = {}
    for node, rel in zip(SITE_NODES, sites):
        mod_slot, head_slot = SITE_SLOTS[node]
        p[mod_slot], h[mod_slot], p[head_slot], h[head_slot] = force_site(vocab, node, rel, rng)
    for slot in ("q_s", "neg", "q_o"):
        dom = vocab.slot_domain(slot)
        p[slot], h[slot] = rng.choice(dom), rng.choice(dom)
    return Sentence(**p), Sentence(**h)


def full_space_support(C: CompositionTree) -> dict:
    """Cell weights under slot-wise proposals: closed-class signatures
    uniform, each site relation fixed by the cell."""
    f = C.func
    weights = Counter()
    for s, n, av, qo, onp, qs in itertools.product(
        SITE_RELATIONS, C.dom["proj_neg"], SITE_RELATIONS, C.dom["proj_q_o"], SITE_RELATIONS, C.dom["proj_q_s"]
    ):
        vp = f["vp"][(av, qo, onp)]
        nv = f["neg_vp"][(n, vp)]
        root = f["root"][(qs, s, nv)]
        weights[(rel_to_label(root), s, av, onp)] += 1
    return dict(weights)


def sample_balanced_pair(vocab, tree, membership, rng: random.Random, cell, exclude=(), budget: int = 20_000, in_train: bool = False) -> PairExample:
    """One pair realizing ``cell`` = (label, subject NP, adverb-verb, object
    NP relations), accepted only if its train membership equals ``in_train``
    and it is not in ``exclude``."""
    label, *sites = cell
    for _ in range(budget):
        premise, hypothesis = propose_pair(vocab, sites, rng)
        x = pair_input(premise, hypothesis)
        if x in exclude:
            continue
        r = trace(tree, x, check=False)
        if rel_to_label(r["root"]) != label:
            continue
        if (x in membership) != in_train:
            continue
        return label_pair(premise, hypothesis, tree, check=False)
    raise ExhaustedRejectionBudget(cell, budget)


# ---------------------------------------------------------------------------
# records


def to_record(ex: PairExample, tag: str, idx: int) -> dict:
    return {
        "id": f"{tag}-{idx:07d}",
        "split": tag,
        "premise": str(ex.premise),
        "hypothesis": str(ex.hypothesis),
        "label": ex.label,
        "relation": str(ex.relation),
        "negations": negation_count(ex.premise, ex.hypothesis),
        "subtasks": [dict(s) for s in ex.subtasks],
    }


def dumps_record(rec: Mapping) -> str:
    return json.dumps(rec, ensure_ascii=False, sort_keys=True)


def record_input(rec: Mapping) -> tuple:
    return pair_input(Sentence.from_tokens(rec["premise"]), Sentence.from_tokens(rec["hypothesis"]))


def balance_stats(records: Sequence[Mapping]) -> dict:
    n = len(records)
    by_task = {t: node for t, node, _ in SUBTASKS}
    site_tasks = {node: task for task, node in by_task.items() if node in SITE_NODES}
    labels = Counter(r["label"] for r in records)
    out = {"n": n, "labels": {lab: labels[lab] / n if n else 0.0 for lab in LABELS}, "sites": {}}
    for node in SITE_NODES:
        task = site_tasks[node]
        cnt = Counter(next(s["label"] for s in r["subtasks"] if s["task"] == task) for r in records)
        out["sites"][node] = {str(rel): cnt[str(rel)] / n if n else 0.0 for rel in SITE_RELATIONS}
    out["distinct"] = len({(r["premise"], r["hypothesis"]) for r in records})
    return out


def balance_deviation(stats: Mapping) -> dict:
    lab = max(abs(v - 1 / 3) for v in stats["labels"].values())
    site = max(abs(v - 1 / 4) for per in stats["sites"].values() for v in per.values())
    return {"label": lab, "site": site}


def parity_violations(records: Iterable[Mapping]) -> list[str]:
    """Ids of contradiction records with an even negation count or
    entailment records with an odd one."""
    bad = []
    for r in records:
        odd = r["negations"] % 2 == 1
        if (r["label"] == CONTRADICTION and not odd) or (r["label"] == ENTAILMENT and odd):
            bad.append(r["id"])
    return bad


# ---------------------------------------------------------------------------
# generation


@dataclass
class Corpus:
    config: CorpusConfig
    tree: CompositionTree
    split: SymbolicSplit
    records: dict  # tag -> list of record dicts
    info: dict


def build_corpus(config: CorpusConfig, progress=None) -> Corpus:
    vocab = Vocabulary(config.n_open)
    tree = build_aligned_tree(vocab)
    split = symbolic_split(tree, config.ratio_value, config.seed)
    space = input_space_size(tree)
    heldout_space = space - split.train_size
    if heldout_space < config.dev + config.test:
        raise ValueError(f"only {heldout_space} held-out inputs for {config.dev + config.test} dev/test records")

    # train: the cover set first (makes the file fair), then balanced draws
    rng = random.Random(derive_seed(config.seed, "train"))
    cover = split.cover()
    if len(cover) > config.train:
        raise ValueError(f"train size {config.train} is below the fair cover size {len(cover)}")
    sampler = TrainSampler(split, config.pool_cap, random.Random(derive_seed(config.seed, "pool")))
    examples = [label_pair(*split_input(x), tree, check=False) for x in cover]
    have = Counter(example_cell(ex) for ex in examples)
    probs = rake(sampler.support, uniform_targets(have, config.train))
    for i, cell in enumerate(cell_schedule(probs, config.train - len(cover), rng)):
        examples.append(label_pair(*split_input(sampler.draw(cell, rng)), tree, check=False))
        if progress and i % 10000 == 0:
            progress("train", i)
    rng.shuffle(examples)
    records = {"train": [to_record(ex, "train", i) for i, ex in enumerate(examples)]}

    # dev/test: distinct inputs from the complement of the training set
    held_probs = rake(full_space_support(tree), uniform_targets())
    seen: set = set()
    for tag, size in (("dev", config.dev), ("test", config.test)):
        rng = random.Random(derive_seed(config.seed, tag))
        out = []
        for i, cell in enumerate(cell_schedule(held_probs, size, rng)):
            ex = sample_balanced_pair(vocab, tree, split, rng, cell, seen, config.rejection_budget)
            seen.add(ex.input)
            out.append(to_record(ex, tag, i))
            if progress and i % 10000 == 0:
                progress(tag, i)
        records[tag] = out

    info = {
        "input_space_size": str(space),
        "train_set_size": str(split.train_size),
        "cover_size": len(cover),
        "train_cells": len(sampler.support),
        "heldout_cells": len(held_probs),
    }
    return Corpus(config, tree, split, records, info)


def _file_digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_corpus(corpus: Corpus, out: str | os.PathLike) -> dict:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    for tag in SPLIT_TAGS:
        recs = corpus.records[tag]
        jpath, tpath = out / f"{tag}.jsonl", out / f"{tag}.tsv"
        with open(jpath, "w", encoding="utf-8", newline="\n") as fh:
            for r in recs:
                fh.write(dumps_record(r) + "\n")
        with open(tpath, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("premise\thypothesis\tlabel\n")
            for r in recs:
                fh.write(f"{r['premise']}\t{r['hypothesis']}\t{r['label']}\n")
        files[jpath.name] = _file_digest(jpath)
        files[tpath.name] = _file_digest(tpath)
    manifest = corpus_manifest(corpus)
    manifest["files"] = files
    with open(out / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    return manifest


def corpus_manifest(corpus: Corpus) -> dict:
    cfg = asdict(corpus.config)
    cfg.pop("out", None)
    train_inputs = [record_input(r) for r in corpus.records["train"]]
    audit = is_fair(corpus.tree, train_inputs)
    stats = {tag: balance_stats(corpus.records[tag]) for tag in SPLIT_TAGS}
    train_set = set(train_inputs)
    overlap = sum(record_input(r) in train_set for tag in ("dev", "test") for r in corpus.records[tag])
    return {
        "format": "fairnli-corpus 1",
        "version": __version__,
        "config": cfg,
        "seed": corpus.config.seed,
        "ratio": corpus.config.ratio,
        "sizes": {tag: len(corpus.records[tag]) for tag in SPLIT_TAGS},
        "tree_hash": tree_hash(corpus.tree),
        "fairness": {"fair": audit.fair, "unexposed": len(audit.unexposed), "distinct_train_inputs": len(train_set)},
        "heldout_overlap_with_train": overlap,
        "balance": stats,
        "balance_deviation": {tag: balance_deviation(s) for tag, s in stats.items()},
        "parity_violations": sum(len(parity_violations(corpus.records[tag])) for tag in SPLIT_TAGS),
        **corpus.info,
    }


def emit_corpus(config: CorpusConfig, out: str | os.PathLike | None = None, progress=None) -> dict:
    """Generate and write a corpus; returns the manifest."""
    out = out or config.out
    if out is None:
        raise ValueError("no output directory")
    return write_corpus(build_corpus(config, progress), out)


# ---------------------------------------------------------------------------
# verification


def load_records(path: str | os.PathLike) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def load_corpus(directory: str | os.PathLike) -> tuple[dict, dict]:
    d = Path(directory)
    with open(d / "manifest.json", encoding="utf-8") as fh:
        manifest = json.load(fh)
    return manifest, {tag: load_records(d / f"{tag}.jsonl") for tag in SPLIT_TAGS}


_SUBTASK_NODE = {task: node for task, node, _ in SUBTASKS}


def record_example(rec: Mapping, tree: CompositionTree) -> LabeledExample:
    """Labeled example carrying the record's own node labels.

    Projection nodes are lexical lookups of the aligned tokens; every other
    node label comes from the record, so a corrupted record changes what
    the learner memorizes.
    """
    x = record_input(rec)
    labels = {}
    for a in tree.tree.non_leaves:
        if a.startswith("proj_"):
            kids = tree.tree.children[a]
            pos = tree.tree.leaf_order
            labels[a] = tree.func[a][tuple(x[pos[c]] for c in kids)]
    by_task = {s["task"]: s["label"] for s in rec["subtasks"]}
    labels["root"] = rec["relation"]
    for task, node in _SUBTASK_NODE.items():
        if node in tree.tree.children and node != "root":
            labels[node] = by_task[task]
    for task, node in (("subject_noun", "rel_n_s"), ("verb", "rel_v"), ("object_noun", "rel_n_o")):
        labels[node] = by_task[task]
    return LabeledExample(x, labels)


def check_records(records: Iterable[Mapping], tree: CompositionTree) -> list[dict]:
    """Records whose stored labels differ from a fresh labeling."""
    bad = []
    for r in records:
        ex = label_pair(Sentence.from_tokens(r["premise"]), Sentence.from_tokens(r["hypothesis"]), tree)
        fresh = to_record(ex, r["split"], 0)
        diffs = [k for k in ("label", "relation", "negations", "subtasks") if fresh[k] != r[k]]
        if diffs:
            bad.append({"id": r["id"], "fields": diffs})
    return bad


def verify_corpus(directory, samples: int | None = None, max_universe: int | None = None, budget: int | None = None, seed: int | None = None) -> dict:
    """Fairness, baseline, oracle and parity checks on an emitted corpus."""
    from .oracle import OracleConfig, adjudicate, check_agreement

    manifest, records = load_corpus(directory)
    cfg = manifest["config"]
    tree = build_aligned_tree(Vocabulary(cfg["n_open"]))
    report: dict = {"tree_hash_matches": tree_hash(tree) == manifest["tree_hash"]}

    train = records["train"]
    audit = is_fair(tree, [record_input(r) for r in train])
    report["fairness"] = {"fair": audit.fair, "unexposed": audit.to_dict()["unexposed"]}

    try:
        learned = learn(tree.tree, [record_example(r, tree) for r in train])
        heldout = [record_example(r, tree) for r in records["test"]]
        ev = evaluate(learned, heldout)
        report["baseline"] = {k: ev[k] for k in ("n", "accuracy", "examples_with_unseen", "unseen_local_inputs")}
    except InconsistentLabels as exc:
        report["baseline"] = {"accuracy": None, "error": str(exc)}

    train_set = {record_input(r) for r in train}
    dev_test = [record_input(r) for tag in ("dev", "test") for r in records[tag]]
    report["disjoint"] = {
        "overlap_with_train": sum(x in train_set for x in dev_test),
        "duplicates": len(dev_test) - len(set(dev_test)),
    }

    all_records = [r for tag in SPLIT_TAGS for r in records[tag]]
    report["parity"] = {"violations": parity_violations(all_records)}
    report["labels"] = {"mismatches": check_records(all_records, tree)}

    samples = cfg.get("oracle_samples", 0) if samples is None else samples
    ocfg = OracleConfig(
        max_universe=max_universe or cfg.get("max_universe", 3),
        budget=budget or cfg.get("budget", 20_000),
        seed=manifest["seed"] if seed is None else seed,
    )
    rng = random.Random(derive_seed(ocfg.seed, "oracle"))
    chosen = rng.sample(all_records, min(samples, len(all_records)))
    inconsistent, unknown = [], 0
    for r in chosen:
        p, h = Sentence.from_tokens(r["premise"]), Sentence.from_tokens(r["hypothesis"])
        verdict = adjudicate(p, h, ocfg)
        unknown += verdict.kind == "Unknown"
        agreement = check_agreement(p, h, r["label"], verdict)
        if not agreement.consistent:
            inconsistent.append({"id": r["id"], **agreement.to_dict()})
    report["oracle"] = {
        "checked": len(chosen),
        "inconsistent": inconsistent,
        "unknown": unknown,
        "unknown_rate": unknown / len(chosen) if chosen else 0.0,
        "max_universe": ocfg.max_universe,
        "budget": ocfg.budget,
    }
    report["passed"] = bool(
        report["tree_hash_matches"]
        and audit.fair
        and report["baseline"].get("accuracy") == 1.0
        and not report["disjoint"]["overlap_with_train"]
        and not report["disjoint"]["duplicates"]
        and not report["parity"]["violations"]
        and not report["labels"]["mismatches"]
        and not inconsistent
    )
    return report


# ---------------------------------------------------------------------------
# unbalanced controls


def uniform_pair(vocab: Vocabulary, rng: random.Random) -> tuple[Sentence, Sentence]:
    p = [rng.choice(vocab.slot_domain(s)) for s in SLOTS]
    h = [rng.choice(vocab.slot_domain(s)) for s in SLOTS]
    return Sentence(*p), Sentence(*h)


def control_sample(vocab: Vocabulary, n: int, seed: int, mode: str = "none", tree: CompositionTree | None = None) -> dict:
    """Label shares without label balancing.

    ``none`` draws every slot uniformly; ``sites`` forces uniform site
    relations but does not balance labels.
    """
    tree = tree or build_aligned_tree(vocab)
    rng = random.Random(derive_seed(seed, f"control-{mode}"))
    labels = Counter()
    for _ in range(n):
        if mode == "none":
            p, h = uniform_pair(vocab, rng)
        elif mode == "sites":
            p, h = propose_pair(vocab, [rng.choice(SITE_RELATIONS) for _ in SITE_NODES], rng)
        else:
            raise ValueError(f"unknown control mode {mode!r}")
        labels[rel_to_label(trace(tree, pair_input(p, h), check=False)["root"])] += 1
    return {lab: labels[lab] / n for lab in LABELS}


def site_relation_distribution(n_open: int, node: str = "subj_np") -> dict:
    """Exact distribution of a site's relation when both sentences' modifier
    and head tokens are drawn uniformly."""
    vocab = Vocabulary(n_open)
    mod_slot, head_slot = SITE_SLOTS[node]
    mods = vocab.slot_domain(mod_slot)
    # modifier signature counts, and head relation counts (≡ for n of n^2 pairs)
    sig = Counter(modifier_joint(a, b).name for a, b in itertools.product(mods, repeat=2))
    heads = {EQ: n_open, IND: n_open * n_open - n_open}
    total = len(mods) ** 2 * n_open * n_open
    dist = Counter()
    for s, cs in sig.items():
        for r, cr in heads.items():
            dist[MODIFIER_SIGNATURES[s](r)] += cs * cr
    return {str(r): Fraction(c, total) for r, c in dist.items()}


def independence_chance(n_open: int, node: str = "subj_np") -> Fraction:
    return site_relation_distribution(n_open, node).get(str(IND), Fraction(0))


__all__ = [
    "CorpusConfig",
    "ExhaustedRejectionBudget",
    "TrainSampler",
    "sample_balanced_pair",
    "build_corpus",
    "emit_corpus",
    "write_corpus",
    "verify_corpus",
    "load_corpus",
    "control_sample",
    "independence_chance",
]
