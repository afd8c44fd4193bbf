"""Command-line interface.

Every subcommand prints one JSON document with a ``manifest`` section
(command, seed and the parameters that determine the output) followed by
its results.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .baseline import evaluate, label_examples, learn
from .comptree import dumps, loads, tree_hash
from .datagen import (
    SPLIT_TAGS,
    CorpusConfig,
    balance_deviation,
    balance_stats,
    emit_corpus,
    load_corpus,
    parity_violations,
    record_example,
    record_input,
    verify_corpus,
)
from .demos import WORKED_TEST, WORKED_TRAIN, format_prop, parse_prop, prop_tree
from .fairsplit import generate_fair_split, is_fair, write_manifest
from .fragment import Sentence, Vocabulary, build_aligned_tree, count_pair_space, label_pair
from .oracle import BACKEND, OracleConfig, adjudicate, check_agreement


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, indent=2, sort_keys=True, ensure_ascii=False, default=str)
    sys.stdout.write("\n")


def _base_manifest(args, **extra) -> dict:
    return {"command": args.command, "seed": args.seed, "version": __version__, **extra}


def cmd_gen_nli(args) -> int:
    cfg = CorpusConfig(
        n_open=args.n_open,
        ratio=args.ratio,
        train=args.train,
        dev=args.dev,
        test=args.test,
        seed=args.seed,
        max_universe=args.max_universe,
        budget=args.budget,
        oracle_samples=args.oracle_samples,
        pool_cap=args.pool_cap,
    )

    def progress(tag, i):
        if args.verbose:
            print(f"{tag}: {i}", file=sys.stderr)

    manifest = emit_corpus(cfg, args.out, progress)
    doc = {"manifest": {"command": args.command, "out": str(args.out), **manifest}}
    if args.verify:
        doc["verification"] = verify_corpus(args.out)
    _emit(doc)
    return 0 if not args.verify or doc["verification"]["passed"] else 1


def _read_inputs(path) -> list[tuple]:
    with open(path, encoding="utf-8") as fh:
        return [tuple(line.split()) for line in fh if line.strip() and not line.startswith("#")]


def cmd_gen_prop(args) -> int:
    C = prop_tree()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.ratio is None:
        train, test, source = list(WORKED_TRAIN), list(WORKED_TEST), "worked"
    else:
        split = generate_fair_split(C, args.ratio, args.seed)
        train, test, source = sorted(split.train), sorted(split.test), "generated"
    (out / "prop_tree.txt").write_text(dumps(C), encoding="utf-8")
    (out / "train.txt").write_text("".join(format_prop(x) + "\n" for x in train), encoding="utf-8")
    (out / "test.txt").write_text("".join(format_prop(x) + "\n" for x in test), encoding="utf-8")
    audit = is_fair(C, train)
    learned = learn(C.tree, label_examples(C, train))
    ev = evaluate(learned, label_examples(C, C.inputs()))
    manifest = _base_manifest(
        args, source=source, ratio=args.ratio, tree_hash=tree_hash(C), sizes={"train": len(train), "test": len(test)}, fair=audit.fair
    )
    write_manifest(out / "manifest.json", manifest)
    _emit({"manifest": manifest, "fairness": audit.to_dict(), "baseline_full_space": {k: ev[k] for k in ("n", "accuracy", "correct")}})
    return 0


def cmd_check_fair(args) -> int:
    if args.corpus:
        manifest, records = load_corpus(args.corpus)
        C = build_aligned_tree(Vocabulary(manifest["config"]["n_open"]))
        train = [record_input(r) for r in records["train"]]
        info = {"corpus": str(args.corpus), "tree_hash": tree_hash(C)}
    else:
        if not (args.tree and args.train):
            raise SystemExit("check-fair needs --corpus, or --tree with --train")
        C = loads(Path(args.tree).read_text(encoding="utf-8"))
        train = _read_inputs(args.train)
        if C.tree.root == "C2":
            train = [parse_prop(" ".join(x)) for x in train]
        info = {"tree": str(args.tree), "train": str(args.train), "tree_hash": tree_hash(C)}
    audit = is_fair(C, train)
    _emit({"manifest": _base_manifest(args, **info), "fairness": audit.to_dict()})
    return 0 if audit.fair else 1


def cmd_baseline_eval(args) -> int:
    manifest, records = load_corpus(args.corpus)
    C = build_aligned_tree(Vocabulary(manifest["config"]["n_open"]))
    learned = learn(C.tree, [record_example(r, C) for r in records["train"]])
    results = {}
    for tag in ("dev", "test"):
        ev = evaluate(learned, [record_example(r, C) for r in records[tag]])
        results[tag] = {k: ev[k] for k in ("n", "accuracy", "examples_with_unseen", "unseen_local_inputs")}
    _emit({"manifest": _base_manifest(args, corpus=str(args.corpus), tree_hash=manifest["tree_hash"]), "baseline": results, "entries": learned.entries()})
    return 0 if all(r["accuracy"] == 1.0 for r in results.values()) else 1


def cmd_oracle_verify(args) -> int:
    config = OracleConfig(max_universe=args.max_universe, budget=args.budget, seed=args.seed, properness=args.properness)
    manifest = _base_manifest(args, backend=BACKEND, max_universe=args.max_universe, budget=args.budget, properness=args.properness)
    if args.premise:
        vocab = Vocabulary(args.n_open)
        p, h = Sentence.from_tokens(args.premise), Sentence.from_tokens(args.hypothesis or "")
        ex = label_pair(p, h, build_aligned_tree(vocab))
        verdict = adjudicate(p, h, config)
        agreement = check_agreement(p, h, ex.label, verdict)
        _emit({"manifest": manifest, "label": ex.label, "relation": str(ex.relation), **agreement.to_dict()})
        return 0 if agreement.consistent else 1
    if not args.corpus:
        raise SystemExit("oracle-verify needs --corpus or --premise/--hypothesis")
    _, records = load_corpus(args.corpus)
    rows = [r for tag in SPLIT_TAGS for r in records[tag]]
    rng = random.Random(args.seed)
    chosen = rng.sample(rows, min(args.samples, len(rows)))
    report, unknown, bad = [], 0, 0
    for r in chosen:
        p, h = Sentence.from_tokens(r["premise"]), Sentence.from_tokens(r["hypothesis"])
        verdict = adjudicate(p, h, config)
        agreement = check_agreement(p, h, r["label"], verdict)
        unknown += verdict.kind == "Unknown"
        bad += not agreement.consistent
        entry = {"id": r["id"], "label": r["label"], "verdict": verdict.kind, "models_checked": verdict.models_checked, "consistent": agreement.consistent}
        if not agreement.consistent or args.witnesses:
            entry["detail"] = agreement.to_dict()
        report.append(entry)
    manifest["corpus"] = str(args.corpus)
    summary = {"checked": len(chosen), "inconsistent": bad, "unknown": unknown, "unknown_rate": unknown / len(chosen) if chosen else 0.0}
    _emit({"manifest": manifest, "summary": summary, "pairs": report})
    return 0 if bad == 0 else 1


def cmd_stats(args) -> int:
    manifest, records = load_corpus(args.corpus)
    out = {}
    for tag in SPLIT_TAGS:
        stats = balance_stats(records[tag])
        out[tag] = {**stats, "deviation": balance_deviation(stats), "parity_violations": parity_violations(records[tag])}
    _emit({"manifest": _base_manifest(args, corpus=str(args.corpus), corpus_seed=manifest["seed"], tree_hash=manifest["tree_hash"]), "stats": out})
    return 0


def cmd_count_space(args) -> int:
    vocab = Vocabulary(args.n_open)
    count = count_pair_space(vocab)
    _emit(
        {
            "manifest": _base_manifest(args, n_open=args.n_open),
            "sentences": vocab.sentence_count(),
            "pairs": str(count),
            "pairs_scientific": f"{count:.3e}",
        }
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fairnli", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=func)
        return p

    p = add("gen-nli", cmd_gen_nli, "generate a balanced NLI corpus over a fair split")
    p.add_argument("--n-open", type=int, default=100)
    p.add_argument("--ratio", default="0")
    p.add_argument("--train", type=int, default=500_000)
    p.add_argument("--dev", type=int, default=10_000)
    p.add_argument("--test", type=int, default=10_000)
    p.add_argument("--out", required=True)
    p.add_argument("--max-universe", type=int, default=3)
    p.add_argument("--budget", type=int, default=20_000)
    p.add_argument("--oracle-samples", type=int, default=200)
    p.add_argument("--pool-cap", type=int, default=64)
    p.add_argument("--verify", action="store_true", help="run all corpus checks after writing")
    p.add_argument("--verbose", action="store_true")

    p = add("gen-prop", cmd_gen_prop, "emit the propositional tree and a fair split")
    p.add_argument("--out", required=True)
    p.add_argument("--ratio", default=None, help="generate a split at this ratio instead of the fixed worked split")

    p = add("check-fair", cmd_check_fair, "audit a training set for fairness")
    p.add_argument("--corpus")
    p.add_argument("--tree", help="serialized composition tree")
    p.add_argument("--train", help="one input per line, leaf values separated by spaces")

    p = add("baseline-eval", cmd_baseline_eval, "train and evaluate the memorizing baseline on a corpus")
    p.add_argument("--corpus", required=True)

    p = add("oracle-verify", cmd_oracle_verify, "check corpus labels against the finite-model oracle")
    p.add_argument("--corpus")
    p.add_argument("--premise")
    p.add_argument("--hypothesis")
    p.add_argument("--n-open", type=int, default=4, help="vocabulary size for a single pair")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--max-universe", type=int, default=3)
    p.add_argument("--budget", type=int, default=20_000)
    p.add_argument("--properness", default="derived", choices=("derived", "proper", "lexical"))
    p.add_argument("--witnesses", action="store_true", help="include witness models for every pair")

    p = add("stats", cmd_stats, "label balance, site relation balance and parity report")
    p.add_argument("--corpus", required=True)

    p = add("count-space", cmd_count_space, "exact number of premise/hypothesis pairs")
    p.add_argument("--n-open", type=int, default=100)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
