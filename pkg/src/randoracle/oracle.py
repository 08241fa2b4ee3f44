"""Randomized permutation oracles, oracle problems, and oracle transforms.

An oracle acts on a control x in [N] and a target y in [M] by a permutation
``pi_{x,r}`` that depends on an internal seed r. All oracles of a problem
share one seed space and one per-query seed marginal; the problem's
:class:`JointSeeds` model says how the k seeds of k queries are correlated.
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Hashable, Mapping, Sequence

import numpy as np

from .config import caps, check_cap
from .core.gf2n import FieldElement
from .core.perms import Permutation, from_index, to_index
from .errors import CapExceeded, ConfigurationError, ContractViolation


# -- tuple <-> single label encoding ------------------------------------------

def encode_tuple(values: Sequence[int], base: int) -> int:
    """Pack a tuple over [base]^k into one label of [base^k] (first entry most significant)."""
    index = 0
    for v in values:
        index = index * base + to_index(v)
    return from_index(index)


def decode_tuple(label: int, base: int, length: int) -> tuple[int, ...]:
    index = to_index(label)
    out = []
    for _ in range(length):
        index, digit = divmod(index, base)
        out.append(from_index(digit))
    return tuple(reversed(out))


def product_permutation(perms: Sequence[Permutation]) -> Permutation:
    """Act with ``perms[i]`` on the i-th coordinate of [M]^k, packed into [M^k]."""
    M = perms[0].M
    k = len(perms)
    images = []
    for ys in itertools.product(range(1, M + 1), repeat=k):
        images.append(encode_tuple([p.images[to_index(y)] for p, y in zip(perms, ys)], M))
    return Permutation(tuple(images))


def _fractions(weights) -> tuple[Fraction, ...]:
    return tuple(Fraction(w) for w in weights)


def _check_distribution(weights: Sequence[Fraction], what: str) -> None:
    if any(w <= 0 for w in weights):
        raise ContractViolation(f"{what}: weights must be positive")
    total = sum(weights, Fraction(0))
    if total != 1:
        raise ContractViolation(f"{what}: weights sum to {total}, not 1 (deficit {1 - total})")


def _uniform(n: int) -> tuple[Fraction, ...]:
    return (Fraction(1, n),) * n


def _cumulative(weights: Sequence[Fraction]) -> tuple[int, list[int]]:
    denom = math.lcm(*(w.denominator for w in weights))
    return denom, list(itertools.accumulate(int(w * denom) for w in weights))


def _sample_index(weights: Sequence[Fraction], rng: np.random.Generator, table=None) -> int:
    """Exact draw: uniform integer in [0, lcm of denominators) against the cumulative counts."""
    denom, cumulative = table or _cumulative(weights)
    return bisect.bisect_right(cumulative, int(rng.integers(denom)))


# -- oracles ------------------------------------------------------------------

@dataclass(frozen=True)
class RandomizedOracle:
    """A family ``pi_{x,r}`` with the per-query seed marginal ``weights``.

    ``actions[s][x - 1]`` is the permutation applied for seed ``seeds[s]``.
    """

    N: int
    M: int
    seeds: tuple[Hashable, ...]
    weights: tuple[Fraction, ...]
    actions: tuple[tuple[Permutation, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "seeds", tuple(self.seeds))
        object.__setattr__(self, "weights", _fractions(self.weights))
        object.__setattr__(self, "actions", tuple(tuple(row) for row in self.actions))
        if not self.seeds:
            raise ContractViolation("an oracle needs at least one seed")
        if len(set(self.seeds)) != len(self.seeds):
            raise ContractViolation("seed labels must be distinct")
        if len(self.weights) != len(self.seeds) or len(self.actions) != len(self.seeds):
            raise ContractViolation("seeds, weights and actions must have equal length")
        _check_distribution(self.weights, "per-query seed distribution")
        for row in self.actions:
            if len(row) != self.N:
                raise ContractViolation(f"each seed needs an action for all N={self.N} controls")
            for p in row:
                if p.M != self.M:
                    raise ContractViolation(f"action on [{p.M}] but target space is [{self.M}]")

    @classmethod
    def from_function(cls, N, M, seeds, weights, fn: Callable[[int, Any], Permutation], name=""):
        seeds = tuple(seeds)
        actions = tuple(tuple(fn(x, r) for x in range(1, N + 1)) for r in seeds)
        return cls(N, M, seeds, weights, actions, name)

    @classmethod
    def deterministic(cls, perms: Sequence[Permutation], name=""):
        """One seed; ``perms[x - 1]`` acts for control x."""
        return cls(len(perms), perms[0].M, (0,), (Fraction(1),), (tuple(perms),), name)

    @cached_property
    def _seed_position(self) -> dict:
        return {r: i for i, r in enumerate(self.seeds)}

    def seed_index(self, r) -> int:
        try:
            return self._seed_position[r]
        except KeyError:
            raise ContractViolation(f"{r!r} is not a seed of this oracle") from None

    def action(self, x: int, r) -> Permutation:
        if not 1 <= x <= self.N:
            raise ContractViolation(f"control {x} outside [1..{self.N}]")
        return self.actions[self.seed_index(r)][x - 1]

    @property
    def is_deterministic(self) -> bool:
        return len(self.seeds) == 1

    @cached_property
    def _sampling_table(self):
        return _cumulative(self.weights)

    def sample_seed(self, rng: np.random.Generator):
        return self.seeds[_sample_index(self.weights, rng, self._sampling_table)]

    @cached_property
    def table(self) -> np.ndarray:
        """0-based images as an int32 array of shape (seeds, N, M)."""
        out = np.empty((len(self.seeds), self.N, self.M), dtype=np.int32)
        for s, row in enumerate(self.actions):
            for x, p in enumerate(row):
                out[s, x] = p.indices()
        return out


@dataclass(frozen=True)
class SampledOracle:
    """An oracle whose seed space is too large to enumerate; it can only be sampled."""

    N: int
    M: int
    sampler: Callable[[np.random.Generator], Any] = field(compare=False)
    action_fn: Callable[[int, Any], Permutation] = field(compare=False)
    name: str = ""

    is_deterministic = False

    def sample_seed(self, rng):
        return self.sampler(rng)

    def action(self, x, r):
        return self.action_fn(x, r)


# -- seed correlations --------------------------------------------------------

@dataclass(frozen=True)
class SeedDistribution:
    """Joint law of the seed tuple (r_1, ..., r_k)."""

    support: tuple[tuple, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(tuple(t) for t in self.support))
        object.__setattr__(self, "weights", _fractions(self.weights))
        if not self.support:
            raise ContractViolation("empty seed distribution")
        if len(self.support) != len(self.weights):
            raise ContractViolation("support and weights differ in length")
        if len(set(self.support)) != len(self.support):
            raise ContractViolation("support entries must be distinct")
        if len({len(t) for t in self.support}) != 1:
            raise ContractViolation("all seed tuples need the same length")
        _check_distribution(self.weights, "seed distribution")

    @property
    def k(self) -> int:
        return len(self.support[0])

    def items(self):
        return zip(self.support, self.weights)

    @classmethod
    def iid(cls, seeds, weights, k):
        support, ws = [], []
        for combo in itertools.product(range(len(seeds)), repeat=k):
            support.append(tuple(seeds[i] for i in combo))
            ws.append(math.prod((weights[i] for i in combo), start=Fraction(1)))
        return cls(tuple(support), tuple(ws))

    @classmethod
    def shared(cls, seeds, weights, k):
        return cls(tuple((r,) * k for r in seeds), tuple(weights))

    @classmethod
    def from_mapping(cls, table: Mapping[tuple, Any]):
        return cls(tuple(table), tuple(Fraction(w) for w in table.values()))


@dataclass(frozen=True)
class JointSeeds:
    """How seeds are drawn across the k queries of one run.

    ``iid``: independent draws from the per-query marginal. ``shared``: one
    draw reused by all queries. ``explicit``: a table per k, or a ``rule``
    returning the table for any k.
    """

    kind: str = "iid"
    tables: tuple[tuple[int, SeedDistribution], ...] = ()
    rule: Callable[[int], SeedDistribution] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("iid", "shared", "explicit"):
            raise ConfigurationError(f"unknown seed model {self.kind!r}")
        if self.kind == "explicit" and not (self.tables or self.rule):
            raise ConfigurationError("explicit seed model needs tables or a rule")

    @classmethod
    def explicit(cls, tables: Mapping[int, SeedDistribution] | None = None, rule=None):
        return cls("explicit", tuple(sorted((tables or {}).items())), rule)

    def at(self, k: int, seeds, weights) -> SeedDistribution:
        if k < 1:
            raise ContractViolation("k must be at least 1")
        if self.kind == "iid":
            return SeedDistribution.iid(seeds, weights, k)
        if self.kind == "shared":
            return SeedDistribution.shared(seeds, weights, k)
        for kk, dist in self.tables:
            if kk == k:
                return dist
        if self.rule is not None:
            return self.rule(k)
        raise ContractViolation(f"explicit seed model has no table for k={k}")


IID = JointSeeds("iid")
SHARED = JointSeeds("shared")


# -- problems -----------------------------------------------------------------

def align_seed_spaces(oracles: Sequence[RandomizedOracle]) -> tuple[RandomizedOracle, ...]:
    """Re-express oracles with different seed spaces on one uniform space Z_D.

    Common seed r in [0, D) selects the native seed whose cumulative weight
    interval contains r/D (inverse-CDF coupling). The law of pi_{x,r} under the
    marginal is unchanged for every oracle.
    """
    denom = math.lcm(*(w.denominator for o in oracles for w in o.weights))
    aligned = []
    for o in oracles:
        cumulative = list(itertools.accumulate(int(w * denom) for w in o.weights))
        pick = [bisect.bisect_right(cumulative, r) for r in range(denom)]
        aligned.append(RandomizedOracle(
            o.N, o.M, tuple(range(denom)), _uniform(denom),
            tuple(o.actions[s] for s in pick), o.name,
        ))
    return tuple(aligned)


@dataclass(frozen=True)
class OracleProblem:
    """Oracles partitioned into labelled classes, with a prior over oracles."""

    oracles: tuple[RandomizedOracle, ...]
    classes: tuple[str, ...]
    prior: tuple[Fraction, ...]
    joint: JointSeeds = IID

    def __post_init__(self):
        object.__setattr__(self, "oracles", tuple(self.oracles))
        object.__setattr__(self, "classes", tuple(str(c) for c in self.classes))
        object.__setattr__(self, "prior", _fractions(self.prior))
        if not self.oracles:
            raise ContractViolation("a problem needs at least one oracle")
        if not len(self.oracles) == len(self.classes) == len(self.prior):
            raise ContractViolation("oracles, classes and prior must have equal length")
        _check_distribution(self.prior, "prior")
        first = self.oracles[0]
        for o in self.oracles[1:]:
            if (o.N, o.M) != (first.N, first.M):
                raise ContractViolation("all oracles must share N and M")
            if o.seeds != first.seeds or o.weights != first.weights:
                raise ContractViolation(
                    "all oracles must share one seed space; build with OracleProblem.build"
                )

    @classmethod
    def build(cls, oracles, classes, prior=None, joint: JointSeeds = IID):
        """Construct a problem, aligning seed spaces when the oracles' differ.

        ``prior`` defaults to uniform over oracles.
        """
        oracles = tuple(oracles)
        if prior is None:
            prior = _uniform(len(oracles))
        spaces = {(o.seeds, o.weights) for o in oracles}
        if len(spaces) > 1:
            if joint.kind == "explicit":
                raise ContractViolation("explicit seed tables need oracles on a common seed space")
            oracles = align_seed_spaces(oracles)
        return cls(oracles, tuple(classes), tuple(prior), joint)

    @classmethod
    def from_classes(cls, class_members: Mapping[str, Sequence[RandomizedOracle]],
                     class_prior: Mapping[str, Any] | None = None, joint: JointSeeds = IID):
        """Uniform within each class; ``class_prior`` defaults to uniform over classes."""
        labels = list(class_members)
        if class_prior is None:
            class_prior = {c: Fraction(1, len(labels)) for c in labels}
        oracles, classes, prior = [], [], []
        for c in labels:
            members = class_members[c]
            if not members:
                raise ContractViolation(f"class {c!r} has no oracles")
            for o in members:
                oracles.append(o)
                classes.append(c)
                prior.append(Fraction(class_prior[c]) / len(members))
        return cls.build(oracles, classes, prior, joint)

    @property
    def N(self) -> int:
        return self.oracles[0].N

    @property
    def M(self) -> int:
        return self.oracles[0].M

    @property
    def seeds(self):
        return self.oracles[0].seeds

    @property
    def seed_weights(self):
        return self.oracles[0].weights

    @property
    def is_deterministic(self) -> bool:
        return len(self.seeds) == 1

    @property
    def class_labels(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(self.classes))

    def class_prior(self, j: str) -> Fraction:
        return sum((p for c, p in zip(self.classes, self.prior) if c == j), Fraction(0))

    def members(self, j: str) -> list[tuple[int, Fraction]]:
        """(oracle index, weight conditional on class j)."""
        total = self.class_prior(j)
        if not total:
            raise ContractViolation(f"unknown class {j!r}")
        return [(i, p / total) for i, (c, p) in enumerate(zip(self.classes, self.prior)) if c == j]

    def joint_at(self, k: int) -> SeedDistribution:
        return self.joint.at(k, self.seeds, self.seed_weights)

    def with_class_prior(self, class_prior: Mapping[str, Any]) -> "OracleProblem":
        """Reweight classes, keeping each class's internal distribution."""
        new = []
        for c, p in zip(self.classes, self.prior):
            new.append(Fraction(class_prior[c]) * p / self.class_prior(c))
        return OracleProblem(self.oracles, self.classes, tuple(new), self.joint)

    @cached_property
    def action_table(self) -> np.ndarray:
        """int32 array (oracles, seeds, N, M) of 0-based images."""
        return np.stack([o.table for o in self.oracles])


# -- constructors -------------------------------------------------------------

def make_shift_oracle(perm_class: Sequence[Permutation], name="") -> RandomizedOracle:
    """Per query draw sigma uniformly from ``perm_class``; add sigma(x) to the target mod N."""
    perm_class = tuple(perm_class)
    if not perm_class:
        raise ContractViolation("the permutation class must be nonempty")
    N = perm_class[0].M
    if any(p.M != N for p in perm_class):
        raise ContractViolation("all permutations must act on the same [N]")
    return RandomizedOracle.from_function(
        N, N, perm_class, _uniform(len(perm_class)),
        lambda x, sigma: Permutation.cyclic_shift(N, sigma(x)), name,
    )


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and m & (m - 1) == 0


def group_shift(M: int, v: int, group: str = "xor") -> Permutation:
    """Target permutation adding the group element v (0-based) on [M]."""
    if group == "xor":
        if not _is_power_of_two(M):
            raise ConfigurationError(f"XOR needs a power-of-two target size, got {M}")
        return Permutation.from_indices([t ^ v for t in range(M)])
    if group == "mod":
        return Permutation.from_indices([(t + v) % M for t in range(M)])
    raise ConfigurationError(f"unknown target group {group!r}")


def make_standard_xor_oracle(functions: Sequence[Mapping[int, int] | Sequence[int]], M0: int,
                             weights=None, seeds=None, group="xor", name="") -> RandomizedOracle:
    """Standard-model oracle y -> y XOR f(x), with f drawn per query from ``functions``.

    Each function maps controls 1..N to group elements in range(M0) (bit strings
    as integers). ``functions`` doubles as the seed space.
    """
    funcs = []
    for f in functions:
        if isinstance(f, Mapping):
            f = [f[x] for x in sorted(f)]
        funcs.append(tuple(int(v) for v in f))
    if not funcs:
        raise ContractViolation("need at least one function")
    N = len(funcs[0])
    if any(len(f) != N for f in funcs):
        raise ContractViolation("functions must share a domain")
    if any(not 0 <= v < M0 for f in funcs for v in f):
        raise ContractViolation(f"function values must lie in range({M0})")
    if weights is None:
        weights = _uniform(len(funcs))
    if seeds is None:
        seeds = tuple(range(len(funcs))) if len(set(funcs)) < len(funcs) else tuple(funcs)
    by_seed = dict(zip(seeds, funcs))
    return RandomizedOracle.from_function(
        N, M0, seeds, weights, lambda x, r: group_shift(M0, by_seed[r][x - 1], group), name,
    )


def _bits(a, n: int) -> int:
    if isinstance(a, int):
        return a
    return int("".join(str(int(b)) for b in a), 2)


def dot2(u: int, v: int) -> int:
    return bin(u & v).count("1") & 1


def simon_functions(n: int, a: int) -> list[tuple[int, ...]]:
    """Every f on Z_2^n constant and distinct on the cosets {x, x XOR a}."""
    reps = [x for x in range(1 << n) if x < x ^ a]
    out = []
    for values in itertools.permutations(range(1 << n), len(reps)):
        f = [0] * (1 << n)
        for x, v in zip(reps, values):
            f[x] = f[x ^ a] = v
        out.append(tuple(f))
    return out


def simon_seed_count(n: int) -> int:
    return math.perm(1 << n, 1 << (n - 1))


def _sample_simon_function(n, a):
    reps = [x for x in range(1 << n) if x < x ^ a]

    def sample(rng):
        values = rng.permutation(1 << n)[: len(reps)]
        f = [0] * (1 << n)
        for x, v in zip(reps, values):
            f[x] = f[x ^ a] = int(v)
        return tuple(f)

    return sample


SEED_ENUMERATION_LIMIT = 10**5


def make_simon_oracle(n: int, a, mode: str = "auto", name=""):
    """Simon oracle with a fresh uniformly random valid f drawn at every call.

    Controls and targets are [2^n]; label v stands for the bit string v - 1.
    ``mode`` is "enumerate", "sampled" or "auto" (enumerate when small).
    """
    a = _bits(a, n)
    if not 1 <= n <= caps.simon_degree:
        raise ContractViolation(f"Simon degree must be in 1..{caps.simon_degree}")
    if a == 0:
        raise ContractViolation("the hidden shift a must be nonzero")
    if not 0 < a < 1 << n:
        raise ContractViolation(f"a={a} is not an element of Z_2^{n}")
    count = simon_seed_count(n)
    if mode == "auto":
        mode = "enumerate" if count <= SEED_ENUMERATION_LIMIT else "sampled"
    q = 1 << n
    act = lambda x, f: group_shift(q, f[x - 1], "xor")
    if mode == "sampled":
        return SampledOracle(q, q, _sample_simon_function(n, a), act, name or f"simon[a={a}]")
    if count > SEED_ENUMERATION_LIMIT:
        raise CapExceeded(f"{count} Simon seeds exceed the enumeration limit")
    funcs = simon_functions(n, a)
    return RandomizedOracle.from_function(q, q, funcs, _uniform(len(funcs)), act,
                                          name or f"simon[a={a}]")


def hls_permutation(n: int, s: FieldElement, x: int, pi: Permutation) -> Permutation:
    """y -> pi(y + s*x) on [2^n], labels read as field elements (label - 1)."""
    xs = FieldElement(n, to_index(x))
    return Permutation(tuple(
        pi.images[(FieldElement(n, to_index(y)) + s * xs).bits] for y in range(1, (1 << n) + 1)
    ))


def make_hls_oracle(n: int, s: FieldElement | int, mode: str = "auto", name=""):
    """Hidden-linear-structure oracle y -> pi(y + s x) with pi uniform in S_q per query."""
    if isinstance(s, int):
        s = FieldElement(n, s)
    if s.n != n:
        raise ContractViolation("s lives in the wrong field")
    q = 1 << n
    if mode == "auto":
        mode = "enumerate" if q <= caps.enumeration else "sampled"
    act = lambda x, pi: hls_permutation(n, s, x, pi)
    if mode == "sampled":
        sampler = lambda rng: Permutation.from_indices(rng.permutation(q).tolist())
        return SampledOracle(q, q, sampler, act, name or f"hls[s={s.bits}]")
    check_cap("enumeration", q, "HLS seed degree q")
    seeds = tuple(Permutation(p) for p in itertools.permutations(range(1, q + 1)))
    return RandomizedOracle.from_function(q, q, seeds, _uniform(len(seeds)), act,
                                          name or f"hls[s={s.bits}]")


# -- transforms ---------------------------------------------------------------

def xor_lift(problem: OracleProblem, group: str = "xor") -> OracleProblem:
    """Replace each oracle by (x, y, z) -> (x, y, z XOR pi_{x,r}(y)).

    The lifted control is the pair (x, y) packed into [N*M].
    """
    M = problem.M
    lifted = []
    for o in problem.oracles:
        actions = []
        for row in o.actions:
            actions.append(tuple(
                group_shift(M, to_index(p.images[to_index(y)]), group)
                for p in row for y in range(1, M + 1)
            ))
        lifted.append(RandomizedOracle(o.N * M, M, o.seeds, o.weights, tuple(actions),
                                       f"lift({o.name})"))
    return OracleProblem(tuple(lifted), problem.classes, problem.prior, problem.joint)


def _check_state_dim(N: int, M: int, k: int, what: str) -> None:
    dim = (N * M * M) ** k
    if dim > caps.state_dim:
        raise CapExceeded(f"{what}: encoding dimension (N*M^2)^k = {dim} exceeds "
                          f"state_dim cap {caps.state_dim}")


def amplify(problem: OracleProblem, k: int) -> OracleProblem:
    """One oracle per class i; each call draws pi from C_i and a seed tuple from R^k afresh,

    then answers k base queries packed into one: controls [N^k], targets [M^k].
    """
    if k < 1:
        raise ContractViolation("k must be at least 1")
    _check_state_dim(problem.N, problem.M, k, "amplify")
    N, M = problem.N, problem.M
    joint = problem.joint_at(k)
    oracles = []
    labels = problem.class_labels
    for j in labels:
        members = problem.members(j)
        if not members:
            raise ContractViolation(f"class {j!r} is empty")
        seeds, weights, actions = [], [], []
        for idx, w_pi in members:
            o = problem.oracles[idx]
            for rs, w_r in joint.items():
                seeds.append((idx, rs))
                weights.append(w_pi * w_r)
                row = []
                for xs in itertools.product(range(1, N + 1), repeat=k):
                    row.append(product_permutation([o.action(x, r) for x, r in zip(xs, rs)]))
                actions.append(tuple(row))
        oracles.append(RandomizedOracle(N ** k, M ** k, tuple(seeds), tuple(weights),
                                        tuple(actions), f"amp[{j}]"))
    return OracleProblem.build(oracles, labels, [problem.class_prior(j) for j in labels], IID)


@dataclass(frozen=True)
class BatchedProblem:
    """One query answers T independent queries to ``base`` (independent seeds).

    Kept symbolic: :meth:`materialize` builds the explicit problem when it fits
    the caps.
    """

    base: OracleProblem
    T: int

    @property
    def N(self):
        return self.base.N ** self.T

    @property
    def M(self):
        return self.base.M ** self.T

    @property
    def classes(self):
        return self.base.classes

    @property
    def class_labels(self):
        return self.base.class_labels

    @property
    def prior(self):
        return self.base.prior

    def materialize(self) -> OracleProblem:
        base, T = self.base, self.T
        _check_state_dim(base.N, base.M, T, f"repeat_batch(T={T})")
        joint = SeedDistribution.iid(base.seeds, base.seed_weights, T)
        oracles = []
        for o in base.oracles:
            actions = []
            for rs in joint.support:
                actions.append(tuple(
                    product_permutation([o.action(x, r) for x, r in zip(xs, rs)])
                    for xs in itertools.product(range(1, base.N + 1), repeat=T)
                ))
            oracles.append(RandomizedOracle(self.N, self.M, joint.support, joint.weights,
                                            tuple(actions), f"batch{T}({o.name})"))
        return OracleProblem(tuple(oracles), base.classes, base.prior, IID)


def repeat_batch(problem: OracleProblem, T: int) -> BatchedProblem:
    if T < 1:
        raise ContractViolation("T must be at least 1")
    return BatchedProblem(problem, T)
