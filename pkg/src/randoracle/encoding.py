"""Oracle encodings |psi_{pi,r}> and their heralded retrieval.

Register layout per query slot is (X, Y, Z) with dims (N, M, M); the flat
offset of |x, y, z> is ((x-1) M + (y-1)) M + (z-1), slots ordered by query.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .config import caps
from .core.sparse import SparseRationalMatrix
from .errors import CapExceeded, ContractViolation
from .oracle import RandomizedOracle, SeedDistribution, OracleProblem
from .quantum import DensityMatrix, PureState, apply_oracle_unitary


def slot_dims(N: int, M: int, k: int = 1) -> tuple[int, ...]:
    return (N, M, M) * k


def check_encoding_size(N: int, M: int, k: int) -> int:
    dim = (N * M * M) ** k
    if dim > caps.state_dim:
        raise CapExceeded(f"encoding dimension (N*M^2)^k = {dim} exceeds cap {caps.state_dim}")
    return dim


def _support(oracle: RandomizedOracle, r) -> tuple[int, ...]:
    """Offsets where |psi_{pi,r}> is nonzero (all amplitudes equal)."""
    N, M = oracle.N, oracle.M
    s = oracle.seed_index(r)
    table = oracle.table[s]
    return tuple(((x * M) + y) * M + int(table[x, y]) for x in range(N) for y in range(M))


def encode_pure(oracle: RandomizedOracle, r) -> PureState:
    """(1/sqrt(NM)) sum_{x,y} |x>|y>|pi_{x,r}(y)>."""
    return PureState(slot_dims(oracle.N, oracle.M), {i: 1 for i in _support(oracle, r)})


def prepare_by_query(oracle: RandomizedOracle, r) -> PureState:
    """Build the encoding with one oracle call on (1/sqrt(NM)) sum |x, y, y>."""
    N, M = oracle.N, oracle.M
    start = PureState(slot_dims(N, M), {(x * M + y) * M + y: 1 for x in range(N) for y in range(M)})
    return apply_oracle_unitary(start, oracle, r, control_reg=0, target_reg=2)


@dataclass(frozen=True)
class EncodingState:
    N: int
    M: int
    k: int
    state: DensityMatrix

    @property
    def register_dims(self):
        return self.state.register_dims

    def reduced_xy(self) -> DensityMatrix:
        """Partial trace over every Z register."""
        keep = [i for i in range(3 * self.k) if i % 3 != 2]
        return self.state.partial_trace(keep)


def mixture_of_encodings(parts, N: int, M: int, k: int) -> SparseRationalMatrix:
    """sum_w w * (psi_{r_1} x ... x psi_{r_k}) over parts (weight, oracle, seed tuple)."""
    dim = check_encoding_size(N, M, k)
    slot = N * M * M
    grouped: Counter = Counter()
    for w, oracle, rs in parts:
        grouped[tuple(_support(oracle, r) for r in rs)] += Fraction(w)
    denom = math.lcm(*(w.denominator for w in grouped.values())) if grouped else 1
    counts: dict[tuple[int, int], int] = {}
    for supports, w in grouped.items():
        iw = int(w * denom)
        offsets = []
        for combo in itertools.product(*supports):
            i = 0
            for c in combo:
                i = i * slot + c
            offsets.append(i)
        for i in offsets:
            for j in offsets:
                counts[(i, j)] = counts.get((i, j), 0) + iw
    return SparseRationalMatrix.from_integer_counts(dim, counts, denom * (N * M) ** k)


def encode_k(oracle: RandomizedOracle, k: int, joint: SeedDistribution | None = None) -> EncodingState:
    """rho^k = E_{r ~ R^k} [psi_{r_1} x ... x psi_{r_k}]; IID over the oracle's marginal by default."""
    if joint is None:
        joint = SeedDistribution.iid(oracle.seeds, oracle.weights, k)
    if joint.k != k:
        raise ContractViolation(f"seed tuples have length {joint.k}, expected {k}")
    matrix = mixture_of_encodings(((w, oracle, rs) for rs, w in joint.items()),
                                  oracle.N, oracle.M, k)
    return EncodingState(oracle.N, oracle.M, k, DensityMatrix(slot_dims(oracle.N, oracle.M, k), matrix))


def class_encoding(problem: OracleProblem, j: str, k: int) -> DensityMatrix:
    """sigma_j = E_{pi in C_j} rho^k_pi under the problem's joint seed law."""
    joint = problem.joint_at(k)
    parts = ((w_pi * w_r, problem.oracles[i], rs)
             for i, w_pi in problem.members(j) for rs, w_r in joint.items())
    matrix = mixture_of_encodings(parts, problem.N, problem.M, k)
    return DensityMatrix(slot_dims(problem.N, problem.M, k), matrix)


# -- heralded retrieval -------------------------------------------------------

@dataclass
class HeraldResult:
    success_probability: Fraction | float
    output: PureState | None  # state on X (x Z) given success


def heralded_apply(encoding: PureState, inp: PureState, N: int, M: int) -> HeraldResult:
    """Apply the Kraus pair {A, sqrt(I - A^dag A)} to encoding (x) input,

    A = sum_x |x><x, x| (x) M^{-1/2} sum_y <y, y|, contracting X with X' and Y with Y'.
    Only the success branch is computed; its output lives on X (x) Z.
    """
    if encoding.register_dims != (N, M, M) or inp.register_dims != (N, M):
        raise ContractViolation(
            f"need an (N, M, M) encoding and an (N, M) input, got "
            f"{encoding.register_dims} and {inp.register_dims}"
        )
    if encoding.is_exact and inp.is_exact:
        out: dict[int, Fraction] = {}
        for i, c in encoding.coeffs.items():
            xy, z = divmod(i, M)
            a = inp.coeffs.get(xy)
            if a:
                x = xy // M
                out[x * M + z] = out.get(x * M + z, 0) + c * a
        out = {i: v for i, v in out.items() if v}
        norm2 = sum((v * v for v in out.values()), Fraction(0))
        p = norm2 / (M * encoding.norm2 * inp.norm2)
        return HeraldResult(p, PureState((N, M), out) if out else None)
    e = encoding.to_vector().reshape(N, M, M)
    a = inp.to_vector().reshape(N, M)
    out = (e * a[:, :, None]).sum(axis=1) / math.sqrt(M)
    p = float((abs(out) ** 2).sum())
    return HeraldResult(p, PureState((N, M), vector=out) if p > 1e-300 else None)


def heralded_channel(encoding: PureState, rho_in: SparseRationalMatrix, N: int, M: int) -> SparseRationalMatrix:
    """Unnormalized success-branch output A (psi psi^dag (x) rho_in) A^dag on X (x) Z.

    Linear in ``rho_in``, so it may be fed any operator (e.g. matrix units).
    """
    if not encoding.is_exact:
        raise ContractViolation("exact encoding required")
    if rho_in.dim != N * M:
        raise ContractViolation("input operator must act on X' (x) Y'")
    by_xy: dict[int, list[tuple[int, Fraction]]] = {}
    for i, c in encoding.coeffs.items():
        xy, z = divmod(i, M)
        by_xy.setdefault(xy, []).append((z, c))
    scale = Fraction(1, M) / encoding.norm2
    acc: dict[tuple[int, int], Fraction] = {}
    for (a, b), v in rho_in.items():
        xa, xb = a // M, b // M
        for za, ca in by_xy.get(a, ()):
            for zb, cb in by_xy.get(b, ()):
                key = (xa * M + za, xb * M + zb)
                acc[key] = acc.get(key, 0) + scale * ca * cb * v
    return SparseRationalMatrix(N * M, acc)


def oracle_channel(oracle: RandomizedOracle, r, rho_in: SparseRationalMatrix) -> SparseRationalMatrix:
    """U rho U^dag for the seed-r oracle unitary on (N, M)."""
    M = oracle.M
    image = {}
    for x in range(oracle.N):
        p = oracle.table[oracle.seed_index(r), x]
        for y in range(M):
            image[x * M + y] = x * M + int(p[y])
    return SparseRationalMatrix(rho_in.dim, {(image[i], image[j]): v for (i, j), v in rho_in.items()})


def chained_success(encodings: Sequence[PureState], inp: PureState, N: int, M: int,
                    between=None) -> HeraldResult:
    """Run sequential heralded queries, optionally applying ``between(i, state)`` after query i."""
    state = inp
    p_total = Fraction(1) if inp.is_exact else 1.0
    for i, enc in enumerate(encodings):
        res = heralded_apply(enc, state, N, M)
        p_total *= res.success_probability
        if res.output is None:
            return HeraldResult(p_total, None)
        state = res.output if between is None else between(i, res.output)
    return HeraldResult(p_total, state)


@dataclass
class SimulationReport:
    equal: bool
    success_probability: Fraction
    direct: DensityMatrix
    simulated: DensityMatrix


def verify_encoding_simulation(oracle: RandomizedOracle, k: int, inputs: Sequence[PureState] | None = None,
                               joint: SeedDistribution | None = None) -> SimulationReport:
    """Compare k direct queries with k heralded retrievals from rho^k (seeds latent).

    ``inputs`` holds one (N, M) input state per query slot; uniform by default.
    """
    N, M = oracle.N, oracle.M
    if inputs is None:
        inputs = [PureState.uniform((N, M))] * k
    if len(inputs) != k:
        raise ContractViolation("need one input state per query")
    if joint is None:
        joint = SeedDistribution.iid(oracle.seeds, oracle.weights, k)
    dims = (N, M) * k
    direct_parts, sim_parts = [], []
    p_success = None
    for rs, w in joint.items():
        direct = sim = None
        p = Fraction(1)
        for r, inp in zip(rs, inputs):
            d_out = apply_oracle_unitary(inp, oracle, r)
            res = heralded_apply(encode_pure(oracle, r), inp, N, M)
            p *= res.success_probability
            direct = d_out if direct is None else direct.tensor(d_out)
            sim = res.output if sim is None else sim.tensor(res.output)
        if p_success is None:
            p_success = p
        elif p != p_success:
            raise ContractViolation("heralding probability depended on the seed")
        direct_parts.append((w, direct.density()))
        sim_parts.append((w, sim.density()))
    d = DensityMatrix.mixture(dims, direct_parts)
    s = DensityMatrix.mixture(dims, sim_parts)
    return SimulationReport(d == s, p_success, d, s)
