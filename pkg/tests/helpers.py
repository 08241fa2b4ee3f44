"""Shared generators and a brute-force transcript-law oracle for tests."""
import itertools
from fractions import Fraction

import numpy as np

from randoracle.core import Permutation
from randoracle.oracle import IID, SHARED, OracleProblem, RandomizedOracle, group_shift


def brute_law(problem, k, slots=None, seed_tuple=None):
    """{class: {(x, y, z): Pr}} by direct enumeration, 1-based."""
    slots = tuple(range(k)) if slots is None else slots
    N, M, P = problem.N, problem.M, len(slots)
    if seed_tuple is None:
        joint = list(problem.joint_at(k).items())
    else:
        joint = [(tuple(seed_tuple), Fraction(1))]
    out = {}
    for j in problem.class_labels:
        law = {}
        for i, wp in problem.members(j):
            o = problem.oracles[i]
            for rs, wr in joint:
                for xs in itertools.product(range(1, N + 1), repeat=P):
                    for ys in itertools.product(range(1, M + 1), repeat=P):
                        zs = tuple(o.action(x, rs[s])(y) for x, y, s in zip(xs, ys, slots))
                        key = (xs, ys, zs)
                        law[key] = law.get(key, 0) + wp * wr
        out[j] = law
    return out


def brute_useless(problem, k, slots=None, seed_tuple=None):
    laws = brute_law(problem, k, slots, seed_tuple)
    first, *rest = laws.values()
    return all(other == first for other in rest)


def random_problem(seed, shifted=None):
    rng = np.random.default_rng(seed)
    N, M = int(rng.integers(1, 4)), int(rng.integers(2, 4))
    if shifted is None:
        shifted = bool(rng.integers(2))
    S = M if shifted else int(rng.integers(1, 4))
    n_classes = int(rng.integers(2, 4))
    raw = np.ones(S, dtype=int) if shifted else rng.integers(1, 4, S)
    ws = [Fraction(int(w), int(raw.sum())) for w in raw]
    oracles, classes = [], []
    for c in range(n_classes):
        for _ in range(int(rng.integers(1, 3))):
            base = [Permutation.from_indices(rng.permutation(M).tolist()) for _ in range(N)]
            if shifted:
                acts = [[group_shift(M, r, "mod").compose(b) for b in base] for r in range(S)]
            else:
                acts = [[Permutation.from_indices(rng.permutation(M).tolist()) for _ in range(N)]
                        for _ in range(S)]
            oracles.append(RandomizedOracle(N, M, tuple(range(S)), ws, acts))
            classes.append(f"C{c}")
    prior = rng.integers(1, 5, len(oracles))
    prior = [Fraction(int(p), int(prior.sum())) for p in prior]
    joint = IID if rng.integers(3) else SHARED
    return OracleProblem.build(oracles, classes, prior, joint)
