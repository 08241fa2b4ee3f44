"""Pure-Python (numpy) transcript accumulation.

``accumulate_law`` adds, for every oracle o and seed tuple t with weight
``weights[o, t]``, that weight to the cell (row, col) where

* row packs the probes (x_p, y_p), p = 0..P-1, as base-(N*M) digits, first
  probe most significant, each digit being x_p * M + y_p (0-based);
* col packs the answers z_p = act[o, seed_tuples[t, probe_slots[p]], x_p, y_p]
  as base-M digits in the same order.

Probes that share a seed slot see the same seed. ``out`` may be int64 or
object dtype (unbounded integers).
"""
import numpy as np


def _probe_digits(N, M, P, row_start, row_stop):
    rows = np.arange(row_start, row_stop, dtype=np.int64)
    digits = []
    rest = rows.copy()
    for _ in range(P):
        digits.append(rest % (N * M))
        rest //= N * M
    digits.reverse()
    return rows, [(d // M, d % M) for d in digits]


def accumulate_law(act, seed_tuples, weights, probe_slots, out, row_start=0, row_stop=-1):
    n_oracles, _, N, M = act.shape
    P = len(probe_slots)
    if row_stop < 0:
        row_stop = out.shape[0]
    rows, probes = _probe_digits(N, M, P, row_start, row_stop)
    for o in range(n_oracles):
        for t in range(seed_tuples.shape[0]):
            w = weights[o, t]
            if w == 0:
                continue
            col = np.zeros(len(rows), dtype=np.int64)
            for p, (xs, ys) in enumerate(probes):
                col = col * M + act[o, seed_tuples[t, probe_slots[p]], xs, ys]
            out[rows, col] += w
