import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from randoracle.core import Permutation, SparseRationalMatrix, all_permutations, pair_fixing_count
from randoracle.errors import ContractViolation
from randoracle.oracle import RandomizedOracle, dot2, make_shift_oracle, make_simon_oracle, simon_functions
from randoracle.quantum import (
    DensityMatrix,
    Povm,
    PureState,
    apply_hadamard,
    apply_oracle_unitary,
    computational_basis_povm,
    flat_index,
    helstrom_advantage,
    measure,
    rank2,
    register_values,
    run_inv_cyc_algorithm,
    simon_distribution,
    simon_measurements,
    simon_query,
    simon_solve,
    swap_test_povm,
    swap_test_probability,
)


def test_flat_index_layout():
    dims = (2, 3, 4)
    for i, values in enumerate(itertools.product(range(1, 3), range(1, 4), range(1, 5))):
        assert flat_index(values, dims) == i
        assert register_values(i, dims) == values


def test_pure_state_exact_probabilities():
    s = PureState((2, 2), {0: 1, 3: -2})
    assert s.probabilities() == {0: Fraction(1, 5), 3: Fraction(4, 5)}
    assert s.same_ray(PureState((2, 2), {0: -3, 3: 6}))
    assert not s.same_ray(PureState((2, 2), {0: 1, 3: 2}))
    with pytest.raises(ContractViolation):
        PureState((2,), {0: 0})
    with pytest.raises(ContractViolation):
        PureState((2,), {2: 1})


@given(st.integers(2, 4), st.integers(0, 10**6))
def test_oracle_unitary_preserves_norm(N, seed):
    rng = np.random.default_rng(seed)
    perms = [Permutation.from_indices(rng.permutation(N).tolist()) for _ in range(N)]
    o = RandomizedOracle.deterministic(perms)
    coeffs = {i: int(c) for i, c in enumerate(rng.integers(-3, 4, N * N)) if c}
    if not coeffs:
        coeffs = {0: 1}
    s = PureState((N, N), coeffs)
    t = apply_oracle_unitary(s, o, 0)
    assert t.norm2 == s.norm2
    assert sorted(t.coeffs.values()) == sorted(s.coeffs.values())


def test_hadamard_exact_matches_float():
    s = PureState((4, 2), {0: 1, 3: 2, 6: -1})
    exact = apply_hadamard(s, 0)
    flt = apply_hadamard(s.to_float(), 0)
    ev = exact.to_vector()
    assert np.allclose(np.abs(ev), np.abs(flt.vector))
    assert np.isclose(abs(np.vdot(ev, flt.vector)), 1)


def test_hadamard_needs_power_of_two():
    with pytest.raises(ContractViolation):
        apply_hadamard(PureState.basis((3,), (1,)), 0)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_swap_test_closed_form_for_every_permutation(N):
    for p in all_permutations(N):
        o = make_shift_oracle([p])
        rho = run_inv_cyc_algorithm(o).p_symmetric
        # through an explicit density matrix as well
        from randoracle.quantum import inv_cyc_state
        state = inv_cyc_state(o, p)
        via_rho = swap_test_probability(state.density())
        expected = (1 + Fraction(pair_fixing_count(p), N)) / 2
        assert rho == via_rho == expected


def test_swap_povm_is_valid_and_matches_probability():
    dims = (2, 2)
    povm = swap_test_povm(dims)
    s = PureState(dims, {1: 1, 2: 1})
    assert measure(povm, s)["symmetric"] == 1
    s = PureState(dims, {1: 1, 2: -1})
    assert measure(povm, s)["antisymmetric"] == 1
    s = PureState(dims, {0: 1, 1: 1})
    assert measure(povm, s)["symmetric"] == swap_test_probability(s)


def test_povm_rejects_bad_effects():
    with pytest.raises(ContractViolation):
        Povm((SparseRationalMatrix(2, {(0, 0): 1}),), ("a",))
    with pytest.raises(ContractViolation):
        Povm((SparseRationalMatrix(1, {(0, 0): 2}), SparseRationalMatrix(1, {(0, 0): -1})),
             ("a", "b"))
    assert len(computational_basis_povm(3).effects) == 3


def test_partial_trace_of_product():
    a = PureState((2,), {0: 1, 1: 1})
    b = PureState((3,), {2: 1})
    rho = a.tensor(b).density()
    assert rho.partial_trace([0]) == a.density()
    assert rho.partial_trace([1]) == b.density()


def test_helstrom():
    zero = PureState.basis((2,), (1,)).density()
    one = PureState.basis((2,), (2,)).density()
    assert helstrom_advantage(zero, one) == pytest.approx(0.5)
    assert helstrom_advantage(zero, zero) == 0.0
    mixed = DensityMatrix.maximally_mixed((2,))
    assert helstrom_advantage(zero, mixed) == pytest.approx(0.25)


def test_sampled_mode_needs_seed():
    o = make_shift_oracle([Permutation((2, 1, 4, 3))])
    with pytest.raises(ContractViolation):
        run_inv_cyc_algorithm(o, "sampled", trials=10)
    r1 = run_inv_cyc_algorithm(o, "sampled", trials=50, rng_seed=4)
    r2 = run_inv_cyc_algorithm(o, "sampled", trials=50, rng_seed=4)
    assert r1.guesses == r2.guesses == {"INV": 50, "CYC": 0}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_simon_query_circuit_matches_closed_form(n):
    for a in range(1, 1 << n):
        for f in simon_functions(n, a)[:40]:
            dist = simon_query(n, f)
            assert dist == simon_distribution(n, f)
            assert sum(dist.values()) == 1
            assert all(dot2(v, a) == 0 for v in dist)


def test_rank2():
    assert rank2([0b01, 0b10, 0b11]) == 2
    assert rank2([0]) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_simon_solver_recovers_a(n):
    for a in range(1, 1 << n, 3):
        res = simon_solve(make_simon_oracle(n, a), rng_seed=a)
        assert res.success and res.a_recovered == a
        assert res.queries_used <= 50 * n


def test_simon_solver_reports_cap():
    res = simon_solve(make_simon_oracle(3, 5), rng_seed=0, max_queries=1)
    assert not res.success and res.a_recovered is None


def test_simon_measurements_are_reproducible():
    o = make_simon_oracle(3, 6)
    assert simon_measurements(o, 30, 9) == simon_measurements(o, 30, 9)


@given(st.integers(0, 10**6), st.integers(2, 3))
def test_swap_of_identical_copies_is_symmetric(seed, d):
    rng = np.random.default_rng(seed)
    c = {i: int(v) for i, v in enumerate(rng.integers(-3, 4, d)) if v} or {0: 1}
    psi = PureState((d,), c)
    assert swap_test_probability(psi.tensor(psi)) == 1


@given(st.integers(0, 10**6))
def test_measurement_is_a_distribution(seed):
    rng = np.random.default_rng(seed)
    c = {i: int(v) for i, v in enumerate(rng.integers(-3, 4, 4)) if v} or {1: 1}
    s = PureState((2, 2), c)
    for povm in (swap_test_povm((2, 2)), computational_basis_povm(4)):
        out = measure(povm, s)
        assert sum(out.values()) == 1
        assert all(0 <= p <= 1 for p in out.values())


@given(st.integers(0, 10**6))
def test_helstrom_of_identical_states_is_zero(seed):
    rng = np.random.default_rng(seed)
    o = RandomizedOracle(2, 2, (0, 1), (Fraction(1, 3), Fraction(2, 3)),
                         [[Permutation.from_indices(rng.permutation(2).tolist()) for _ in range(2)]
                          for _ in range(2)])
    from randoracle.encoding import encode_k
    rho = encode_k(o, 1).state
    assert helstrom_advantage(rho, rho, Fraction(1, 2), Fraction(1, 2)) == 0
