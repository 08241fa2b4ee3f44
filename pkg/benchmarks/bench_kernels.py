"""Compare the compiled transcript-law kernel against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from randoracle import kernels
from randoracle.separations import inv_cyc_problem, parity_problem, simon_problem
from randoracle.uselessness import pairwise_law, transcript_law

CASES = {
    "weak inv-cyc N=6 k=2": (lambda: inv_cyc_problem(6), lambda p, b: transcript_law(p, 2, backend=b)),
    "weak parity N=4 k=3": (lambda: parity_problem(4), lambda p, b: transcript_law(p, 3, backend=b)),
    "pairwise simon n=3": (lambda: simon_problem(3), lambda p, b: pairwise_law(p, 1, backend=b)),
}


def best_of(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    available = kernels.backends()
    if "compiled" not in available:
        print("compiled extension not built; only the python backend is available")
    print(f"{'case':<24} {'backend':<9} {'seconds':>9} {'speedup':>8}")
    for name, (make, build) in CASES.items():
        problem = make()
        problem.action_table  # build the cached table outside the timing
        base = None
        laws = {}
        for backend in ("python", "compiled"):
            if backend not in available:
                continue
            t, laws[backend] = best_of(lambda: build(problem, backend), args.repeat)
            base = base or t
            print(f"{name:<24} {backend:<9} {t:9.4f} {base / t:7.1f}x")
        if len(laws) == 2:
            a, b = laws["python"], laws["compiled"]
            assert all(np.array_equal(a.tables[j], b.tables[j]) for j in a.tables), name


if __name__ == "__main__":
    main()
