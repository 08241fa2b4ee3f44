"""Kernel selection: the compiled extension when importable, else numpy.

Set ``RANDORACLE_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels_py

_compiled = None
if os.environ.get("RANDORACLE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

# largest total weight the int64 path accepts
INT64_SAFE = 1 << 62


def backends() -> dict:
    out = {"python": _kernels_py.accumulate_law}
    if _compiled is not None:
        out["compiled"] = _compiled.accumulate_law
    return out


def accumulate_law(act, seed_tuples, weights, probe_slots, n_rows, n_cols,
                   total_weight: int, workers: int = 1, backend: str | None = None):
    """Run the transcript accumulation, returning the (n_rows, n_cols) count table.

    ``total_weight`` bounds every cell; beyond the int64-safe range the
    object-dtype fallback is used regardless of ``backend``.
    """
    act = np.ascontiguousarray(act, dtype=np.int32)
    seed_tuples = np.ascontiguousarray(seed_tuples, dtype=np.int32)
    probe_slots = np.ascontiguousarray(probe_slots, dtype=np.int32)
    if total_weight >= INT64_SAFE:
        out = np.zeros((n_rows, n_cols), dtype=object)
        w = np.asarray(weights, dtype=object)
        _kernels_py.accumulate_law(act, seed_tuples, w, probe_slots, out)
        return out
    fn = backends()[backend or BACKEND]
    w = np.ascontiguousarray(np.asarray(weights, dtype=np.int64))
    out = np.zeros((n_rows, n_cols), dtype=np.int64)
    workers = max(1, min(workers, n_rows))
    if workers == 1:
        fn(act, seed_tuples, w, probe_slots, out)
        return out
    bounds = np.linspace(0, n_rows, workers + 1).astype(int)
    # disjoint row ranges: the merge is order-independent
    with ThreadPoolExecutor(workers) as pool:
        list(pool.map(lambda ab: fn(act, seed_tuples, w, probe_slots, out, int(ab[0]), int(ab[1])),
                      zip(bounds[:-1], bounds[1:])))
    return out
