"""Exact uselessness deciders.

Classical kinds compare class-conditional transcript laws Pr_j(z | x, y):
queries are useless exactly when that law does not depend on the class j,
which needs no conditioning on zero-probability events. The quantum kind
compares the class-averaged encodings sigma_j entrywise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .config import check_cap
from .encoding import class_encoding
from .errors import ContractViolation, DefectError
from .oracle import BatchedProblem, OracleProblem, SeedDistribution
from .quantum import DensityMatrix

KINDS = ("weak", "strong", "pairwise", "quantum")


@dataclass(frozen=True)
class QueryTuple:
    """A non-adaptive query tuple, 1-based: control x_i and target y_i for each query."""

    x: tuple[int, ...]
    y: tuple[int, ...]


@dataclass(frozen=True)
class Witness:
    """Evidence that queries are useful.

    Classical kinds: the transcript (queries, z) whose probability differs
    between class ``j`` and ``reference``. Quantum: the first sigma entry
    (row, col) that differs.
    """

    j: str
    reference: str
    p_j: Fraction
    p_reference: Fraction
    queries: QueryTuple | None = None
    z: tuple[int, ...] | None = None
    seed: tuple | None = None
    entry: tuple[int, int] | None = None
    note: str = ""


@dataclass(frozen=True)
class UselessnessVerdict:
    kind: str
    k: int
    useless: bool
    witness: Witness | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractViolation(f"unknown uselessness kind {self.kind!r}")
        if self.useless != (self.witness is None):
            raise ContractViolation("a verdict carries a witness exactly when it is 'useful'")

    @property
    def classical_queries(self) -> int:
        return 2 * self.k if self.kind == "pairwise" else self.k


# -- transcript laws ----------------------------------------------------------

def _decode(index: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        index, d = divmod(index, base)
        out.append(d)
    return out[::-1]


@dataclass
class TranscriptLaw:
    """Exact class-conditional laws of z given the probes (x, y).

    ``tables[j][row, col]`` equals ``denominator * Pr_j(z | x, y)``. Rows pack
    the probes (x_p, y_p) in base N*M, columns pack z_p in base M, first probe
    most significant. Probes with equal ``probe_slots`` entries share a seed.
    """

    N: int
    M: int
    probe_slots: tuple[int, ...]
    tables: dict[str, np.ndarray]
    denominator: int
    seed: tuple | None = None

    @property
    def classes(self) -> tuple[str, ...]:
        return tuple(self.tables)

    @property
    def n_probes(self) -> int:
        return len(self.probe_slots)

    def row_of(self, x: Sequence[int], y: Sequence[int]) -> int:
        r = 0
        for xi, yi in zip(x, y):
            r = r * (self.N * self.M) + (xi - 1) * self.M + (yi - 1)
        return r

    def col_of(self, z: Sequence[int]) -> int:
        c = 0
        for zi in z:
            c = c * self.M + (zi - 1)
        return c

    def queries_of(self, row: int) -> QueryTuple:
        digits = _decode(row, self.N * self.M, self.n_probes)
        return QueryTuple(tuple(d // self.M + 1 for d in digits), tuple(d % self.M + 1 for d in digits))

    def z_of(self, col: int) -> tuple[int, ...]:
        return tuple(d + 1 for d in _decode(col, self.M, self.n_probes))

    def probability(self, j: str, x, y, z) -> Fraction:
        return Fraction(int(self.tables[j][self.row_of(x, y), self.col_of(z)]), self.denominator)

    def distribution(self, j: str, x, y) -> dict[tuple[int, ...], Fraction]:
        row = self.tables[j][self.row_of(x, y)]
        return {self.z_of(c): Fraction(int(row[c]), self.denominator) for c in np.flatnonzero(row)}

    def check_normalized(self) -> None:
        for j, t in self.tables.items():
            if not np.all(t.sum(axis=1) == self.denominator):
                raise DefectError(f"transcript law of class {j!r} is not normalized")

    def first_difference(self, seed=None) -> Witness | None:
        """Class-major, then row-major first cell where a class departs from the first class."""
        labels = self.classes
        ref = self.tables[labels[0]]
        for j in labels[1:]:
            cells = np.argwhere(self.tables[j] != ref)
            if len(cells):
                row, col = (int(v) for v in cells[0])
                return Witness(
                    j, labels[0],
                    Fraction(int(self.tables[j][row, col]), self.denominator),
                    Fraction(int(ref[row, col]), self.denominator),
                    queries=self.queries_of(row), z=self.z_of(col), seed=seed,
                )
        return None

    def product(self, other: "TranscriptLaw") -> "TranscriptLaw":
        """Law of independent concatenation: probes of ``self`` followed by ``other``'s."""
        if (self.N, self.M, self.classes) != (other.N, other.M, other.classes):
            raise ContractViolation("laws must share N, M and classes")
        offset = max(self.probe_slots) + 1
        tables = {}
        for j in self.classes:
            a, b = self.tables[j], other.tables[j]
            if self.denominator * other.denominator >= kernels.INT64_SAFE:
                a, b = a.astype(object), b.astype(object)
            tables[j] = np.kron(a, b)
        return TranscriptLaw(self.N, self.M,
                             self.probe_slots + tuple(s + offset for s in other.probe_slots),
                             tables, self.denominator * other.denominator)

    def equals(self, other: "TranscriptLaw") -> bool:
        """Equality of the represented probabilities (denominators may differ)."""
        if self.classes != other.classes:
            return False
        for j in self.classes:
            a, b = self.tables[j], other.tables[j]
            if a.shape != b.shape:
                return False
            if not np.array_equal(a.astype(object) * other.denominator,
                                  b.astype(object) * self.denominator):
                return False
        return True


def transcript_law(problem: OracleProblem, k: int, probe_slots: Sequence[int] | None = None,
                   seed_tuple: tuple | None = None, workers: int = 1,
                   backend: str | None = None) -> TranscriptLaw:
    """Exact Pr_j(z | x, y) for every class j and every probe tuple.

    Seed tuples are drawn from the problem's joint law at ``k``; with
    ``seed_tuple`` given they are fixed instead and only the oracle draw is
    averaged. ``probe_slots`` maps probes to seed slots (default one probe
    per slot).
    """
    if k < 1:
        raise ContractViolation("k must be at least 1")
    slots = tuple(range(k)) if probe_slots is None else tuple(int(s) for s in probe_slots)
    if not slots or min(slots) < 0 or max(slots) >= k:
        raise ContractViolation(f"probe slots must lie in range({k})")
    N, M, P = problem.N, problem.M, len(slots)
    labels = problem.class_labels
    n_rows, n_cols = (N * M) ** P, M ** P
    check_cap("transcript_cells", n_rows * n_cols * len(labels), "transcript-law cells")

    if seed_tuple is None:
        joint = problem.joint_at(k)
    else:
        if len(seed_tuple) != k:
            raise ContractViolation(f"seed tuple must have length {k}")
        joint = SeedDistribution((tuple(seed_tuple),), (Fraction(1),))
    index = problem.oracles[0].seed_index
    seed_tuples = np.array([[index(r) for r in rs] for rs in joint.support], dtype=np.int32)

    per_class = {j: problem.members(j) for j in labels}
    # products w_pi * w_r have denominators dividing denom_pi * denom_r
    denom_pi = math.lcm(*(w.denominator for j in labels for _, w in per_class[j]))
    denom_r = math.lcm(*(w.denominator for w in joint.weights))
    denom = denom_pi * denom_r
    r_int = [int(w * denom_r) for w in joint.weights]

    act = problem.action_table
    tables = {}
    for j in labels:
        idx = [i for i, _ in per_class[j]]
        pi_int = [int(w * denom_pi) for _, w in per_class[j]]
        w = np.array([[a * b for b in r_int] for a in pi_int],
                     dtype=object if denom >= kernels.INT64_SAFE else np.int64)
        tables[j] = kernels.accumulate_law(act[idx], seed_tuples, w, slots, n_rows, n_cols,
                                           denom, workers=workers, backend=backend)
    return TranscriptLaw(N, M, slots, tables, denom,
                         None if seed_tuple is None else tuple(seed_tuple))


# -- classical deciders -------------------------------------------------------

def _single_oracle_classes(problem: OracleProblem) -> bool:
    return all(len(problem.members(j)) == 1 for j in problem.class_labels)


def weak_classical_useless(problem: OracleProblem | BatchedProblem, k: int, workers: int = 1,
                           backend: str | None = None) -> UselessnessVerdict:
    """Do k non-adaptive queries, seeds unseen, leave the class law unchanged?"""
    if isinstance(problem, BatchedProblem):
        return _weak_batched(problem, k, workers, backend)
    law = transcript_law(problem, k, workers=workers, backend=backend)
    return UselessnessVerdict("weak", k, *_verdict(law.first_difference()))


def _verdict(witness):
    return witness is None, witness


def _weak_batched(batched: BatchedProblem, k: int, workers, backend) -> UselessnessVerdict:
    base = batched.base
    if k < 1:
        raise ContractViolation("k must be at least 1")
    if base.joint.kind == "iid" and _single_oracle_classes(base):
        # one oracle per class and independent seeds: the law of all k*T base
        # answers is a product of single-query laws, and each factor is a
        # marginal of the product, so the verdict is the single-query one
        law = transcript_law(base, 1, workers=workers, backend=backend)
        w = law.first_difference()
        if w is not None:
            w = Witness(w.j, w.reference, w.p_j, w.p_reference, w.queries, w.z,
                        note=f"marginal of one component of a {batched.T}-fold batch")
        return UselessnessVerdict("weak", k, w is None, w)
    return weak_classical_useless(batched.materialize(), k, workers, backend)


def strong_classical_useless(problem: OracleProblem, k: int, workers: int = 1,
                             backend: str | None = None) -> UselessnessVerdict:
    """As the weak check, but for every seed tuple in the support held fixed and known."""
    joint = problem.joint_at(k)
    for rs in joint.support:
        law = transcript_law(problem, k, seed_tuple=rs, workers=workers, backend=backend)
        w = law.first_difference(seed=rs)
        if w is not None:
            return UselessnessVerdict("strong", k, False, w)
    return UselessnessVerdict("strong", k, True)


def pairwise_law(problem: OracleProblem, k_pairs: int, workers: int = 1,
                 backend: str | None = None) -> TranscriptLaw:
    """Law of 2k probes (x, x') where probe i and probe k+i share seed r_i."""
    slots = tuple(range(k_pairs)) * 2
    return transcript_law(problem, k_pairs, probe_slots=slots, workers=workers, backend=backend)


def pairwise_classical_useless(problem: OracleProblem, k_pairs: int, workers: int = 1,
                               backend: str | None = None) -> UselessnessVerdict:
    """Do k pairs of queries, each pair sharing one seed, leave the class law unchanged?"""
    law = pairwise_law(problem, k_pairs, workers, backend)
    return UselessnessVerdict("pairwise", k_pairs, *_verdict(law.first_difference()))


# -- quantum ------------------------------------------------------------------

def sigma(problem: OracleProblem, j: str, k: int) -> DensityMatrix:
    """Class-averaged k-query encoding E_{pi in C_j} rho^k_pi (exact)."""
    if j not in problem.class_labels:
        raise ContractViolation(f"unknown class {j!r}")
    return class_encoding(problem, j, k)


def sigmas(problem: OracleProblem, k: int) -> dict[str, DensityMatrix]:
    return {j: sigma(problem, j, k) for j in problem.class_labels}


def _sigma_witness(mats: dict[str, DensityMatrix]) -> Witness | None:
    labels = list(mats)
    ref = mats[labels[0]]
    for j in labels[1:]:
        diff = mats[j].matrix.first_difference(ref.matrix)
        if diff is not None:
            key, a, b = diff
            return Witness(j, labels[0], a, b, entry=key)
    return None


def quantum_useless(problem: OracleProblem, k: int) -> UselessnessVerdict:
    """Useless exactly when every class yields the same sigma_j."""
    if k == 0:
        return UselessnessVerdict("quantum", 0, True)
    w = _sigma_witness(sigmas(problem, k))
    return UselessnessVerdict("quantum", k, w is None, w)


@dataclass
class EquivalenceReport:
    k: int
    quantum: UselessnessVerdict
    pairwise: UselessnessVerdict
    entries_checked: int

    @property
    def consistent(self) -> bool:
        return self.quantum.useless == self.pairwise.useless


def _sigma_positions(N: int, M: int, k: int):
    """For each (row, col) of the pairwise table, the matching sigma entry (i, i')."""
    P = 2 * k
    nm = N * M
    rows = np.arange(nm ** P, dtype=np.int64)
    cols = np.arange(M ** P, dtype=np.int64)
    rd = [(rows // nm ** (P - 1 - p)) % nm for p in range(P)]
    cd = [(cols // M ** (P - 1 - p)) % M for p in range(P)]
    slot = nm * M

    def side(start):
        i = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for p in range(start, start + k):
            i = i * slot + (rd[p][:, None] * M + cd[p][None, :])
        return i

    return side(0), side(k)


def check_equivalence_theorem(problem: OracleProblem, k: int, workers: int = 1) -> EquivalenceReport:
    """Check that k quantum queries are useless iff k seed-sharing pairs are.

    Also checks entrywise that sigma_j[(x,y,z), (x',y',z')] equals
    (NM)^-k Pr_j(z, z' | x, y, x', y') with pairs sharing seeds. Raises
    :class:`DefectError` on any mismatch.
    """
    N, M = problem.N, problem.M
    mats = sigmas(problem, k)
    law = pairwise_law(problem, k, workers)
    scale = law.denominator * (N * M) ** k
    ii, jj = _sigma_positions(N, M, k)
    checked = 0
    for c, rho in mats.items():
        table = law.tables[c]
        nonzero = np.argwhere(table != 0)
        if len(nonzero) != rho.matrix.nnz():
            raise DefectError(f"class {c!r}: sigma has {rho.matrix.nnz()} nonzeros, "
                              f"pairwise law has {len(nonzero)}")
        for r, col in nonzero:
            v = rho.matrix[(int(ii[r, col]), int(jj[r, col]))] * scale
            if v != int(table[r, col]):
                raise DefectError(f"class {c!r}: sigma entry disagrees with the transcript law "
                                  f"at probes {law.queries_of(int(r))}, z={law.z_of(int(col))}")
        checked += len(nonzero)
    qw = _sigma_witness(mats)
    pw = law.first_difference()
    report = EquivalenceReport(k, UselessnessVerdict("quantum", k, qw is None, qw),
                               UselessnessVerdict("pairwise", k, pw is None, pw), checked)
    if not report.consistent:
        raise DefectError(f"quantum verdict {report.quantum.useless} but pairwise verdict "
                          f"{report.pairwise.useless} at k={k}")
    return report


# -- unbounded error ----------------------------------------------------------

@dataclass
class UnboundedErrorReport:
    model: str
    k: int
    verdict: UselessnessVerdict
    baseline: Fraction
    complexity_exceeds_k: bool | None
    notes: list[str] = field(default_factory=list)


def unbounded_error_link(problem: OracleProblem, k: int, model: str = "classical",
                         generalized: bool = False) -> UnboundedErrorReport:
    """Lower-bound unbounded-error query complexity from uselessness under a balanced prior.

    If k queries are useless when both classes have prior 1/2, no k-query
    algorithm beats guessing, so the complexity exceeds k. A 'useful' verdict
    alone decides nothing (another prior might still make k queries useless),
    reported as ``None``.
    """
    labels = problem.class_labels
    if len(labels) != 2 and not generalized:
        raise ContractViolation(f"need exactly two classes, got {len(labels)}; "
                                "pass generalized=True for the baseline-only report")
    if model not in ("classical", "quantum"):
        raise ContractViolation(f"unknown model {model!r}")
    balanced = problem.with_class_prior({j: Fraction(1, len(labels)) for j in labels})
    if k == 0:
        verdict = UselessnessVerdict("quantum" if model == "quantum" else "weak", 0, True)
    elif model == "classical":
        verdict = weak_classical_useless(balanced, k)
    else:
        verdict = quantum_useless(balanced, k)
    baseline = max(balanced.class_prior(j) for j in labels)
    notes = []
    if len(labels) != 2:
        notes.append("more than two classes: uselessness is strictly stronger than "
                     "failing to beat the baseline, so only the baseline is informative")
    exceeds = True if verdict.useless and len(labels) == 2 else None
    return UnboundedErrorReport(model, k, verdict, baseline, exceeds, notes)
