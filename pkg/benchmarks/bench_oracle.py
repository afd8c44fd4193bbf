"""Compare the compiled and numpy oracle kernels on identical model batches.

    python benchmarks/bench_oracle.py [--models N] [--universe K] [--repeat R]
"""

import argparse
import random
import time

import numpy as np

from fairnli.datagen import SITE_NODES, SITE_RELATIONS, propose_pair
from fairnli.fragment import Vocabulary
from fairnli.oracle import _models, kernels


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--models", type=int, default=200_000)
    ap.add_argument("--universe", type=int, default=3)
    ap.add_argument("--pairs", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    nrng = np.random.default_rng(args.seed)
    vocab = Vocabulary(4)
    try:
        compiled = kernels("cython")
    except ImportError:
        compiled = None
        print("compiled kernel not built; timing numpy only")
    numpy_k = kernels("numpy")
    rows = []
    for _ in range(args.pairs):
        p, h = propose_pair(vocab, [rng.choice(SITE_RELATIONS) for _ in SITE_NODES], rng)
        lex = _models.pair_lexicon(p, h)
        U, B = _models.sample(lex, args.universe, args.models, nrng)
        sp, sh = lex.spec(p), lex.spec(h)
        t_np = best_time(lambda: numpy_k.eval_pair(U, B, args.universe, sp, sh), args.repeat)
        row = {"numpy": t_np}
        if compiled is not None:
            row["cython"] = best_time(lambda: compiled.eval_pair(U, B, args.universe, sp, sh), args.repeat)
            a, b = compiled.eval_pair(U, B, args.universe, sp, sh), numpy_k.eval_pair(U, B, args.universe, sp, sh)
            assert (a[0] == b[0]).all() and (a[1] == b[1]).all(), "kernels disagree"
        rows.append(row)
    n = args.models
    print(f"{args.pairs} pairs x {n} models, universe {args.universe}")
    for name in ("numpy", "cython"):
        if name in rows[0]:
            t = sum(r[name] for r in rows) / len(rows)
            print(f"{name:7s} {t * 1e3:9.2f} ms/pair  {n / t / 1e6:8.2f} M models/s")
    if compiled is not None:
        ratio = sum(r["numpy"] for r in rows) / sum(r["cython"] for r in rows)
        print(f"speedup {ratio:.1f}x")


if __name__ == "__main__":
    main()
