import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randoracle import kernels
from randoracle.core import Permutation
from randoracle.errors import ContractViolation
from randoracle.oracle import IID, SHARED, OracleProblem, RandomizedOracle, group_shift
from randoracle.quantum import helstrom_advantage
from randoracle.separations import inv_cyc_problem, parity_problem
from helpers import brute_law, brute_useless, random_problem
from randoracle.uselessness import (
    check_equivalence_theorem,
    pairwise_classical_useless,
    pairwise_law,
    quantum_useless,
    sigmas,
    strong_classical_useless,
    transcript_law,
    unbounded_error_link,
    weak_classical_useless,
)

BACKENDS = sorted(kernels.backends())


problems = st.integers(0, 10**6).map(random_problem)


@pytest.mark.parametrize("backend", BACKENDS)
@settings(max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_transcript_law_matches_brute_force(backend, seed):
    problem = random_problem(seed)
    for k in (1, 2):
        law = transcript_law(problem, k, backend=backend)
        law.check_normalized()
        brute = brute_law(problem, k)
        for j, table in brute.items():
            for (xs, ys, zs), p in table.items():
                assert law.probability(j, xs, ys, zs) == p
            assert np.count_nonzero(law.tables[j]) == sum(1 for p in table.values() if p)


@settings(max_examples=60)
@given(problems)
def test_deciders_match_brute_force(problem):
    for k in (1, 2):
        assert weak_classical_useless(problem, k).useless == brute_useless(problem, k)
    assert pairwise_classical_useless(problem, 1).useless == brute_useless(problem, 1, (0, 0))
    strong = all(brute_useless(problem, 1, seed_tuple=rs) for rs in problem.joint_at(1).support)
    assert strong_classical_useless(problem, 1).useless == strong


@settings(max_examples=40)
@given(problems)
def test_hierarchy(problem):
    for k in (1, 2):
        weak = weak_classical_useless(problem, k).useless
        if strong_classical_useless(problem, k).useless:
            assert weak
        if pairwise_classical_useless(problem, k if problem.N * problem.M <= 4 else 1).useless:
            assert weak_classical_useless(problem, 1).useless
        if not weak:
            assert not strong_classical_useless(problem, k).useless


def test_aligned_seed_spaces_match_brute_force():
    # distinct native seed laws force quantile alignment onto a common space
    a = RandomizedOracle(1, 2, (0, 1), (Fraction(1, 3), Fraction(2, 3)),
                         ([Permutation((1, 2))], [Permutation((2, 1))]))
    b = RandomizedOracle(1, 2, (0, 1), (Fraction(1, 2), Fraction(1, 2)),
                         ([Permutation((2, 1))], [Permutation((1, 2))]))
    problem = OracleProblem.build([a, b], ["a", "b"])
    assert len(problem.seeds) == 6
    for k in (1, 2):
        law = transcript_law(problem, k)
        for j, table in brute_law(problem, k).items():
            for (xs, ys, zs), p in table.items():
                assert law.probability(j, xs, ys, zs) == p
    assert weak_classical_useless(problem, 1).useless is False


def test_shifted_family_is_weakly_useless():
    for seed in range(20):
        problem = random_problem(seed, shifted=True)
        if problem.joint.kind == "iid":
            assert weak_classical_useless(problem, 2).useless
        assert weak_classical_useless(problem, 1).useless


@given(st.integers(0, 10**6))
def test_deterministic_kinds_coincide(seed):
    rng = np.random.default_rng(seed)
    N, M = int(rng.integers(1, 3)), int(rng.integers(2, 4))
    oracles = [RandomizedOracle.deterministic(
        [Permutation.from_indices(rng.permutation(M).tolist()) for _ in range(N)])
        for _ in range(3)]
    problem = OracleProblem.build(oracles, ["a", "a", "b"])
    for k in (1, 2):
        w = weak_classical_useless(problem, k).useless
        assert strong_classical_useless(problem, k).useless == w
    assert pairwise_classical_useless(problem, 1).useless == weak_classical_useless(problem, 2).useless


@settings(max_examples=30)
@given(problems)
def test_verdicts_invariant_under_class_prior(problem):
    labels = problem.class_labels
    base = [weak_classical_useless(problem, 1).useless,
            strong_classical_useless(problem, 1).useless,
            pairwise_classical_useless(problem, 1).useless,
            quantum_useless(problem, 1).useless]
    for weights in ([1] * len(labels), [1] + [5] * (len(labels) - 1), list(range(1, len(labels) + 1))):
        total = sum(weights)
        p = problem.with_class_prior({j: Fraction(w, total) for j, w in zip(labels, weights)})
        got = [weak_classical_useless(p, 1).useless, strong_classical_useless(p, 1).useless,
               pairwise_classical_useless(p, 1).useless, quantum_useless(p, 1).useless]
        assert got == base


@settings(max_examples=60)
@given(problems)
def test_quantum_iff_pairwise_with_trace_identity(problem):
    report = check_equivalence_theorem(problem, 1)
    assert report.consistent
    assert report.entries_checked > 0
    assert report.quantum.useless == brute_useless(problem, 1, (0, 0))


def test_equivalence_at_two_pairs():
    for seed in range(6):
        problem = random_problem(seed)
        if (problem.N * problem.M) ** 4 * problem.M ** 4 > 2 * 10**5:
            continue
        assert check_equivalence_theorem(problem, 2).consistent


@settings(max_examples=30)
@given(problems)
def test_helstrom_zero_iff_quantum_useless(problem):
    labels = problem.class_labels[:2]
    two = problem if len(problem.class_labels) == 2 else None
    if two is None:
        return
    mats = sigmas(problem, 1)
    adv = helstrom_advantage(mats[labels[0]], mats[labels[1]])
    assert (adv < 1e-9) == quantum_useless(problem, 1).useless


@settings(max_examples=40)
@given(problems)
def test_witness_is_a_real_difference(problem):
    v = weak_classical_useless(problem, 2)
    if v.useless:
        assert v.witness is None
        return
    w = v.witness
    laws = brute_law(problem, 2)
    key = (w.queries.x, w.queries.y, w.z)
    assert laws[w.j].get(key, 0) == w.p_j
    assert laws[w.reference].get(key, 0) == w.p_reference
    assert w.p_j != w.p_reference


def test_strong_witness_names_seed():
    problem = inv_cyc_problem(4)
    v = strong_classical_useless(problem, 1)
    assert not v.useless and v.witness.seed is not None
    assert not brute_useless(problem, 1, seed_tuple=v.witness.seed)


def test_quantum_zero_queries_useless():
    assert quantum_useless(inv_cyc_problem(4), 0).useless


def test_transcript_law_argument_checks():
    problem = inv_cyc_problem(4)
    with pytest.raises(ContractViolation):
        transcript_law(problem, 0)
    with pytest.raises(ContractViolation):
        transcript_law(problem, 1, probe_slots=(1,))
    with pytest.raises(ContractViolation):
        transcript_law(problem, 2, seed_tuple=(0,))


def test_law_product_is_iid_concatenation():
    rng = np.random.default_rng(3)
    oracles = [RandomizedOracle(2, 3, (0, 1), (Fraction(1, 4), Fraction(3, 4)),
                                [[Permutation.from_indices(rng.permutation(3).tolist())
                                  for _ in range(2)] for _ in range(2)])
               for _ in range(2)]
    problem = OracleProblem.build(oracles, ["a", "b"])
    one = transcript_law(problem, 1)
    assert one.product(one).equals(transcript_law(problem, 2))
    # a class mixing oracles correlates its queries, so the product is wrong there
    mixed = parity_problem(2)
    one = transcript_law(mixed, 1)
    assert not one.product(one).equals(transcript_law(mixed, 2))


def test_pairwise_slots():
    law = pairwise_law(inv_cyc_problem(4), 1)
    assert law.probe_slots == (0, 0)


def test_unbounded_error_link():
    problem = inv_cyc_problem(4)
    rep = unbounded_error_link(problem, 1)
    assert rep.verdict.useless and rep.complexity_exceeds_k is True
    assert rep.baseline == Fraction(1, 2)
    rep = unbounded_error_link(problem, 1, model="quantum")
    assert not rep.verdict.useless and rep.complexity_exceeds_k is None
    assert unbounded_error_link(problem, 0, model="quantum").complexity_exceeds_k is True
    with pytest.raises(ContractViolation):
        unbounded_error_link(problem, 1, model="other")


def test_unbounded_error_needs_two_classes():
    o = [RandomizedOracle.deterministic([Permutation((2, 1))]),
         RandomizedOracle.deterministic([Permutation((1, 2))])]
    problem = OracleProblem.build(o * 2, ["a", "b", "c", "c"])
    with pytest.raises(ContractViolation):
        unbounded_error_link(problem, 1)
    rep = unbounded_error_link(problem, 1, generalized=True)
    assert rep.complexity_exceeds_k is None and rep.notes
    assert rep.baseline == Fraction(1, 3)


@settings(max_examples=40)
@given(problems)
def test_strong_at_twice_k_implies_pairwise(problem):
    # with IID seeds every repeated tuple (r, r) is in the support of the 2-query law
    if problem.joint.kind != "iid":
        return
    if strong_classical_useless(problem, 2).useless:
        assert pairwise_classical_useless(problem, 1).useless


def test_strong_at_equal_k_does_not_imply_pairwise():
    P = parity_problem(2)
    assert strong_classical_useless(P, 1).useless
    assert not pairwise_classical_useless(P, 1).useless
