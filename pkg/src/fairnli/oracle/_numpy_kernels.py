"""Vectorised sentence evaluation over a batch of bitmask models."""

from __future__ import annotations

import numpy as np


def _quant(q: int, a: np.ndarray, b: np.ndarray, full: int) -> np.ndarray:
    if q in (0, 2):
        t = (a & b) != 0
    else:
        t = (a & ~b & full) == 0
    return ~t if q >= 2 else t


def eval_sentence(U: np.ndarray, B: np.ndarray, k: int, spec) -> np.ndarray:
    full = (1 << k) - 1
    fullk = (1 << (k * k)) - 1
    qs, adj_s, n_s, neg, adv, v, qo, adj_o, n_o = (int(t) for t in spec)
    subj = U[:, n_s] & (U[:, adj_s] if adj_s >= 0 else full)
    obj = U[:, n_o] & (U[:, adj_o] if adj_o >= 0 else full)
    rel = B[:, v] & (B[:, adv] if adv >= 0 else fullk)
    scope = np.zeros(U.shape[0], dtype=np.int64)
    for x in range(k):
        row = (rel >> (x * k)) & full
        t = _quant(qo, obj, row, full)
        if neg:
            t = ~t
        scope |= t.astype(np.int64) << x
    return _quant(qs, subj, scope, full)


def eval_pair(U: np.ndarray, B: np.ndarray, k: int, spec_p, spec_h) -> tuple[np.ndarray, np.ndarray]:
    return eval_sentence(U, B, k, spec_p), eval_sentence(U, B, k, spec_h)
