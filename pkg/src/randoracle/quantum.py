"""Finite-dimensional quantum simulation with exact rational bookkeeping.

Exact pure states hold an unnormalized real rational coefficient vector c;
the amplitude of basis state i is c_i / |c|. Uniform superpositions,
permutation images and Hadamard transforms all stay in this form, so every
probability computed here is an exact fraction. Float mode uses a dense
complex vector instead.

Basis states carry one 1-based value per register; the flat offset packs the
registers with the first one most significant.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

import numpy as np

from .core.perms import from_index, to_index
from .core.sparse import SparseRationalMatrix
from .errors import ContractViolation
from .oracle import RandomizedOracle, SampledOracle, dot2, make_standard_xor_oracle


# -- index arithmetic ---------------------------------------------------------

def flat_index(values: Sequence[int], dims: Sequence[int]) -> int:
    """Offset of the basis state with register values ``values`` (1-based)."""
    index = 0
    for v, d in zip(values, dims):
        if not 1 <= v <= d:
            raise ContractViolation(f"register value {v} outside [1..{d}]")
        index = index * d + to_index(v)
    return index


def register_values(index: int, dims: Sequence[int]) -> tuple[int, ...]:
    out = []
    for d in reversed(dims):
        index, digit = divmod(index, d)
        out.append(from_index(digit))
    return tuple(reversed(out))


def _digit_arrays(dims):
    total = math.prod(dims)
    idx = np.arange(total, dtype=np.int64)
    digits = []
    for d in reversed(dims):
        digits.append(idx % d)
        idx = idx // d
    return digits[::-1]


def _pack(digits, dims):
    out = np.zeros_like(digits[0])
    for dg, d in zip(digits, dims):
        out = out * d + dg
    return out


def swap_map(dims: Sequence[int], regs_a: Sequence[int], regs_b: Sequence[int]) -> np.ndarray:
    """Flat-index image of every basis state under the swap of register groups a and b."""
    if [dims[i] for i in regs_a] != [dims[i] for i in regs_b]:
        raise ContractViolation("swapped registers must have equal dimensions")
    if set(regs_a) & set(regs_b):
        raise ContractViolation("swapped register groups overlap")
    digits = _digit_arrays(dims)
    swapped = list(digits)
    for a, b in zip(regs_a, regs_b):
        swapped[a], swapped[b] = digits[b], digits[a]
    return _pack(swapped, dims)


# -- states -------------------------------------------------------------------

class PureState:
    """A normalized pure state on registers of the given dimensions."""

    __slots__ = ("register_dims", "coeffs", "vector", "_norm2")

    def __init__(self, register_dims, coeffs: Mapping[int, object] | None = None,
                 vector: np.ndarray | None = None):
        self.register_dims = tuple(int(d) for d in register_dims)
        if (coeffs is None) == (vector is None):
            raise ContractViolation("give exactly one of coeffs (exact) or vector (float)")
        dim = self.dim
        if coeffs is not None:
            clean = {}
            for i, c in coeffs.items():
                if not 0 <= i < dim:
                    raise ContractViolation(f"basis offset {i} outside dimension {dim}")
                c = Fraction(c)
                if c:
                    clean[int(i)] = c
            if not clean:
                raise ContractViolation("the zero vector is not a state")
            self.coeffs = clean
            self.vector = None
            self._norm2 = sum(c * c for c in clean.values())
        else:
            vector = np.asarray(vector, dtype=complex).reshape(-1)
            if vector.shape[0] != dim:
                raise ContractViolation("vector length does not match register dimensions")
            norm = np.linalg.norm(vector)
            if norm == 0:
                raise ContractViolation("the zero vector is not a state")
            self.coeffs = None
            self.vector = vector / norm
            self._norm2 = None

    # constructors
    @classmethod
    def basis(cls, register_dims, values):
        return cls(register_dims, {flat_index(values, register_dims): 1})

    @classmethod
    def uniform(cls, register_dims, over: Sequence[int] | None = None, fixed=None):
        """Uniform superposition over the registers ``over``; others fixed to ``fixed``."""
        dims = tuple(register_dims)
        over = range(len(dims)) if over is None else tuple(over)
        fixed = dict(fixed or {})
        coeffs = {}
        for combo in itertools.product(*(range(1, dims[i] + 1) for i in over)):
            values = [fixed.get(i, 1) for i in range(len(dims))]
            for i, v in zip(over, combo):
                values[i] = v
            coeffs[flat_index(values, dims)] = 1
        return cls(dims, coeffs)

    # properties
    @property
    def dim(self) -> int:
        return math.prod(self.register_dims)

    @property
    def is_exact(self) -> bool:
        return self.coeffs is not None

    @property
    def norm2(self) -> Fraction:
        """Squared norm of the stored (unnormalized) coefficients."""
        return self._norm2

    def norm_squared(self):
        """Squared norm of the state itself: exactly 1 in exact mode."""
        if self.is_exact:
            return sum((c * c for c in self.coeffs.values()), Fraction(0)) / self._norm2
        return float(np.vdot(self.vector, self.vector).real)

    def probability(self, index: int):
        if self.is_exact:
            c = self.coeffs.get(index)
            return c * c / self._norm2 if c else Fraction(0)
        return float(abs(self.vector[index]) ** 2)

    def probabilities(self) -> dict:
        if self.is_exact:
            return {i: c * c / self._norm2 for i, c in sorted(self.coeffs.items())}
        p = np.abs(self.vector) ** 2
        return {int(i): float(p[i]) for i in np.flatnonzero(p > 0)}

    def to_vector(self) -> np.ndarray:
        if not self.is_exact:
            return self.vector.copy()
        out = np.zeros(self.dim, dtype=complex)
        scale = 1 / math.sqrt(self._norm2)
        for i, c in self.coeffs.items():
            out[i] = float(c) * scale
        return out

    def to_float(self) -> "PureState":
        return PureState(self.register_dims, vector=self.to_vector())

    def same_ray(self, other: "PureState") -> bool:
        """Exact equality of the normalized states (real coefficients, up to sign)."""
        if not (self.is_exact and other.is_exact):
            raise ContractViolation("exact comparison needs exact states")
        if self.register_dims != other.register_dims or self.coeffs.keys() != other.coeffs.keys():
            return False
        i0 = next(iter(self.coeffs))
        ratio = other.coeffs[i0] / self.coeffs[i0]
        return all(other.coeffs[i] == ratio * c for i, c in self.coeffs.items())

    def overlap_squared(self, other: "PureState"):
        if self.is_exact and other.is_exact:
            ip = sum((c * other.coeffs.get(i, 0) for i, c in self.coeffs.items()), Fraction(0))
            return ip * ip / (self._norm2 * other._norm2)
        return float(abs(np.vdot(self.to_vector(), other.to_vector())) ** 2)

    def tensor(self, other: "PureState") -> "PureState":
        dims = self.register_dims + other.register_dims
        if self.is_exact and other.is_exact:
            d = other.dim
            return PureState(dims, {i * d + j: a * b for i, a in self.coeffs.items()
                                    for j, b in other.coeffs.items()})
        return PureState(dims, vector=np.kron(self.to_vector(), other.to_vector()))

    def map_basis(self, image: np.ndarray) -> "PureState":
        """Apply the basis permutation ``|i> -> |image[i]>``."""
        if self.is_exact:
            return PureState(self.register_dims, {int(image[i]): c for i, c in self.coeffs.items()})
        out = np.zeros_like(self.vector)
        out[image] = self.vector
        return PureState(self.register_dims, vector=out)

    def density(self) -> "DensityMatrix":
        if self.is_exact:
            return DensityMatrix(self.register_dims,
                                 SparseRationalMatrix.outer(self.coeffs, self.dim, 1 / self._norm2))
        v = self.vector
        return DensityMatrix(self.register_dims, np.outer(v, v.conj()))

    def __repr__(self):
        mode = "exact" if self.is_exact else "float"
        return f"PureState(dims={self.register_dims}, {mode})"


class DensityMatrix:
    """A state on registers; exact (sparse rational) or float (dense complex)."""

    __slots__ = ("register_dims", "matrix")

    def __init__(self, register_dims, matrix):
        self.register_dims = tuple(register_dims)
        dim = math.prod(self.register_dims)
        if isinstance(matrix, SparseRationalMatrix):
            if matrix.dim != dim:
                raise ContractViolation("matrix dimension does not match registers")
        else:
            matrix = np.asarray(matrix, dtype=complex)
            if matrix.shape != (dim, dim):
                raise ContractViolation("matrix dimension does not match registers")
        self.matrix = matrix

    @property
    def dim(self):
        return math.prod(self.register_dims)

    @property
    def is_exact(self):
        return isinstance(self.matrix, SparseRationalMatrix)

    @classmethod
    def mixture(cls, register_dims, parts: Sequence[tuple[object, "DensityMatrix"]]):
        acc = None
        for w, rho in parts:
            term = rho.matrix.scale(w) if rho.is_exact else rho.matrix * float(w)
            acc = term if acc is None else acc + term
        return cls(register_dims, acc)

    @classmethod
    def maximally_mixed(cls, register_dims):
        d = math.prod(register_dims)
        return cls(register_dims, SparseRationalMatrix.identity(d).scale(Fraction(1, d)))

    def trace(self):
        if self.is_exact:
            return self.matrix.trace()
        return complex(np.trace(self.matrix))

    def to_dense(self) -> np.ndarray:
        if self.is_exact:
            return self.matrix.to_dense(float).astype(complex)
        return self.matrix

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        if self.register_dims != other.register_dims:
            return False
        if self.is_exact and other.is_exact:
            return self.matrix == other.matrix
        return bool(np.allclose(self.to_dense(), other.to_dense(), atol=1e-12))

    def __hash__(self):
        return hash((self.register_dims, self.matrix)) if self.is_exact else id(self)

    def validate(self, tol=1e-9) -> None:
        """Hermitian, unit trace, positive semidefinite (PSD by eigenvalues)."""
        if self.is_exact:
            if not self.matrix.is_symmetric():
                raise ContractViolation("density matrix is not Hermitian")
            if self.matrix.trace() != 1:
                raise ContractViolation(f"trace is {self.matrix.trace()}, not 1")
        else:
            m = self.matrix
            if not np.allclose(m, m.conj().T, atol=tol):
                raise ContractViolation("density matrix is not Hermitian")
            if abs(np.trace(m) - 1) > tol:
                raise ContractViolation("trace is not 1")
        if self.dim <= 4096 and np.linalg.eigvalsh(self.to_dense()).min() < -tol:
            raise ContractViolation("density matrix is not positive semidefinite")

    def partial_trace(self, keep: Sequence[int]) -> "DensityMatrix":
        """Trace out every register not listed in ``keep``."""
        dims = self.register_dims
        keep = tuple(keep)
        kept_dims = tuple(dims[i] for i in keep)
        drop = [i for i in range(len(dims)) if i not in keep]
        if not self.is_exact:
            t = self.matrix.reshape(dims + dims)
            n = len(dims)
            letters = "abcdefghijklmnopqrstuvwxyz"
            row = [letters[i] for i in range(n)]
            col = [letters[n + i] if i in keep else letters[i] for i in range(n)]
            out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
            res = np.einsum("".join(row) + "".join(col) + "->" + out, t)
            d = math.prod(kept_dims)
            return DensityMatrix(kept_dims, res.reshape(d, d))
        acc = {}
        for (i, j), v in self.matrix.items():
            vi, vj = register_values(i, dims), register_values(j, dims)
            if any(vi[d] != vj[d] for d in drop):
                continue
            key = (flat_index([vi[d] for d in keep], kept_dims),
                   flat_index([vj[d] for d in keep], kept_dims))
            acc[key] = acc.get(key, 0) + v
        return DensityMatrix(kept_dims, SparseRationalMatrix(math.prod(kept_dims), acc))


# -- oracle application ------------------------------------------------------

def oracle_basis_map(oracle, r, dims, control_reg: int, target_reg: int) -> np.ndarray:
    """Flat-index image of each basis state under |x>|y> -> |x>|pi_{x,r}(y)>."""
    if dims[control_reg] != oracle.N or dims[target_reg] != oracle.M:
        raise ContractViolation(
            f"register dims ({dims[control_reg]}, {dims[target_reg]}) do not match "
            f"oracle (N={oracle.N}, M={oracle.M})"
        )
    if control_reg == target_reg:
        raise ContractViolation("control and target must be different registers")
    table = np.array([oracle.action(x, r).indices() for x in range(1, oracle.N + 1)],
                     dtype=np.int64)
    digits = _digit_arrays(dims)
    new = list(digits)
    new[target_reg] = table[digits[control_reg], digits[target_reg]]
    return _pack(new, dims)


def apply_oracle_unitary(state: PureState, oracle, r, control_reg: int = 0,
                         target_reg: int = 1) -> PureState:
    """Apply the seed-r oracle unitary to the chosen control and target registers."""
    return state.map_basis(oracle_basis_map(oracle, r, state.register_dims, control_reg, target_reg))


def apply_hadamard(state: PureState, reg: int) -> PureState:
    """Hadamard transform on register ``reg`` of dimension 2^n (bit strings = value - 1)."""
    d = state.register_dims[reg]
    if d & (d - 1):
        raise ContractViolation("Hadamard needs a power-of-two register")
    dims = state.register_dims
    if state.is_exact:
        acc: dict[int, Fraction] = {}
        stride = math.prod(dims[reg + 1:])
        for i, c in state.coeffs.items():
            x = (i // stride) % d
            base = i - x * stride
            for v in range(d):
                key = base + v * stride
                acc[key] = acc.get(key, 0) + (-c if dot2(v, x) else c)
        # unnormalized Walsh transform: the squared norm grows by d, kept implicit
        return PureState(dims, acc)
    h = np.array([[(-1) ** dot2(v, x) for x in range(d)] for v in range(d)]) / math.sqrt(d)
    t = state.vector.reshape(dims)
    t = np.moveaxis(np.tensordot(h, t, axes=([1], [reg])), 0, reg)
    return PureState(dims, vector=t.reshape(-1))


# -- swap test, POVMs, discrimination -----------------------------------------

def _trace_with_swap(rho: DensityMatrix, regs_a, regs_b):
    image = swap_map(rho.register_dims, regs_a, regs_b)
    if rho.is_exact:
        return sum((v for (i, j), v in rho.matrix.items() if image[i] == j), Fraction(0))
    return float(np.real(np.sum(rho.matrix[np.arange(rho.dim), image])))


def _default_halves(state):
    n = len(state.register_dims)
    if n % 2:
        raise ContractViolation("default swap needs an even number of registers")
    return tuple(range(n // 2)), tuple(range(n // 2, n))


def swap_test_probability(state: DensityMatrix | PureState, regs_a=None, regs_b=None):
    """Probability of the symmetric outcome, (1 + tr(rho F)) / 2."""
    if regs_a is None:
        regs_a, regs_b = _default_halves(state)
    if isinstance(state, PureState):
        image = swap_map(state.register_dims, regs_a, regs_b)
        if state.is_exact:
            ip = sum((c * state.coeffs.get(int(image[i]), 0) for i, c in state.coeffs.items()),
                     Fraction(0))
            return (1 + ip / state.norm2) / 2
        v = state.vector
        return float((1 + np.real(np.vdot(v, v[image]))) / 2)
    return (1 + _trace_with_swap(state, regs_a, regs_b)) / 2


@dataclass(frozen=True)
class Povm:
    effects: tuple
    labels: tuple[Hashable, ...]

    def __post_init__(self):
        if len(self.effects) != len(self.labels) or not self.effects:
            raise ContractViolation("need one label per effect")
        exact = all(isinstance(e, SparseRationalMatrix) for e in self.effects)
        dim = self.effects[0].dim if exact else np.asarray(self.effects[0]).shape[0]
        if exact:
            total = self.effects[0]
            for e in self.effects[1:]:
                total = total + e
            if total != SparseRationalMatrix.identity(dim):
                raise ContractViolation("POVM effects do not sum to the identity")
        else:
            total = sum(np.asarray(e, dtype=complex) for e in self.effects)
            if not np.allclose(total, np.eye(dim), atol=1e-9):
                raise ContractViolation("POVM effects do not sum to the identity")
        for e, label in zip(self.effects, self.labels):
            dense = e.to_dense(float) if exact else np.asarray(e, dtype=complex)
            if dim <= 4096 and np.linalg.eigvalsh(dense).min() < -1e-9:
                raise ContractViolation(f"effect {label!r} is not positive semidefinite")

    @property
    def dim(self):
        e = self.effects[0]
        return e.dim if isinstance(e, SparseRationalMatrix) else np.asarray(e).shape[0]


def swap_test_povm(register_dims, regs_a=None, regs_b=None) -> Povm:
    n = len(register_dims)
    if regs_a is None:
        regs_a, regs_b = tuple(range(n // 2)), tuple(range(n // 2, n))
    image = swap_map(register_dims, regs_a, regs_b)
    d = math.prod(register_dims)
    half = Fraction(1, 2)
    sym, anti = {}, {}
    for i in range(d):
        j = int(image[i])
        for target, sign in ((sym, 1), (anti, -1)):
            target[(i, i)] = target.get((i, i), 0) + half
            target[(j, i)] = target.get((j, i), 0) + sign * half
    return Povm((SparseRationalMatrix(d, sym), SparseRationalMatrix(d, anti)),
                ("symmetric", "antisymmetric"))


def computational_basis_povm(dim: int) -> Povm:
    return Povm(tuple(SparseRationalMatrix(dim, {(i, i): 1}) for i in range(dim)),
                tuple(range(dim)))


def measure(povm: Povm, rho: DensityMatrix | PureState) -> dict:
    """Outcome distribution {label: tr(M_s rho)}."""
    if isinstance(rho, PureState):
        rho = rho.density()
    if povm.dim != rho.dim:
        raise ContractViolation("POVM and state dimensions differ")
    out = {}
    for e, label in zip(povm.effects, povm.labels):
        if isinstance(e, SparseRationalMatrix) and rho.is_exact:
            p = sum((v * rho.matrix[(j, i)] for (i, j), v in e.items()), Fraction(0))
        else:
            dense_e = e.to_dense(float) if isinstance(e, SparseRationalMatrix) else np.asarray(e)
            p = float(np.real(np.trace(dense_e @ rho.to_dense())))
        out[label] = p
    return out


def trace_norm(matrix: np.ndarray) -> float:
    return float(np.abs(np.linalg.eigvalsh(matrix)).sum())


def helstrom_advantage(sigma0: DensityMatrix, sigma1: DensityMatrix, p0=Fraction(1, 2),
                       p1=Fraction(1, 2)) -> float:
    """Optimal two-state success probability minus the prior-guessing baseline."""
    if sigma0.dim != sigma1.dim:
        raise ContractViolation("states have different dimensions")
    if Fraction(p0) + Fraction(p1) != 1:
        raise ContractViolation("priors must sum to 1")
    p0, p1 = float(p0), float(p1)
    diff = p0 * sigma0.to_dense() - p1 * sigma1.to_dense()
    success = 0.5 * (p0 + p1) + 0.5 * trace_norm((diff + diff.conj().T) / 2)
    adv = success - max(p0, p1)
    return 0.0 if abs(adv) < 1e-9 else adv


# -- algorithms ---------------------------------------------------------------

@dataclass
class SwapTestReport:
    """Outcome of the swap-test distinguisher on one oracle."""

    mode: str
    p_symmetric: Fraction | float
    guesses: dict
    trials: int = 0
    rng_seed: int | None = None


def inv_cyc_state(oracle: RandomizedOracle, r) -> PureState:
    """(1/sqrt N) sum_x |x, sigma(x)>: uniform control, target at the additive zero (label N)."""
    N = oracle.N
    start = PureState.uniform((N, N), over=(0,), fixed={1: N})
    return apply_oracle_unitary(start, oracle, r)


def run_inv_cyc_algorithm(oracle: RandomizedOracle, mode: str = "exact", trials: int = 0,
                          rng_seed: int | None = None) -> SwapTestReport:
    """Prepare the uniform control, query once, swap-test; symmetric means INV."""
    if oracle.N != oracle.M:
        raise ContractViolation("the distinguisher needs a shift oracle with M = N")
    per_seed = {r: swap_test_probability(inv_cyc_state(oracle, r)) for r in oracle.seeds}
    if mode == "exact":
        p = sum((w * per_seed[r] for r, w in zip(oracle.seeds, oracle.weights)), Fraction(0))
        return SwapTestReport("exact", p, {"INV": p, "CYC": 1 - p})
    if mode != "sampled":
        raise ContractViolation(f"unknown mode {mode!r}")
    if rng_seed is None:
        raise ContractViolation("sampled mode needs an rng seed")
    rng = np.random.default_rng(rng_seed)
    sym = 0
    for _ in range(trials):
        p = per_seed[oracle.sample_seed(rng)]
        sym += int(rng.integers(p.denominator)) < p.numerator
    freq = sym / trials if trials else float("nan")
    return SwapTestReport("sampled", freq, {"INV": sym, "CYC": trials - sym}, trials, rng_seed)


def _xor_function(oracle, r) -> tuple[int, ...]:
    """f(x) for an XOR oracle: the image of target bit string 0."""
    return tuple(to_index(oracle.action(x, r).images[0]) for x in range(1, oracle.N + 1))


def simon_query(n: int, f: Sequence[int]) -> dict[int, Fraction]:
    """Exact distribution of the measured control after H^n, O_f, H^n on |0>|0>."""
    q = 1 << n
    if len(f) != q:
        raise ContractViolation("f must be a table over Z_2^n")
    oracle = make_standard_xor_oracle([f], q)
    state = PureState.uniform((q, q), over=(0,), fixed={1: 1})
    state = apply_hadamard(apply_oracle_unitary(state, oracle, oracle.seeds[0]), 0)
    dist: dict[int, Fraction] = {}
    for i, p in state.probabilities().items():
        v = i // q
        dist[v] = dist.get(v, 0) + p
    return dict(sorted(dist.items()))


def simon_distribution(n: int, f: Sequence[int]) -> dict[int, Fraction]:
    """Same law as :func:`simon_query` from the closed form

    Pr(v) = q^-2 sum_w |sum_{x: f(x) = w} (-1)^(v.x)|^2.
    """
    q = 1 << n
    xs = np.arange(q)
    f = np.asarray(f)
    signs = np.array([[1 - 2 * dot2(v, x) for x in range(q)] for v in range(q)])
    counts = np.zeros(q, dtype=np.int64)
    for w in np.unique(f):
        counts += signs[:, xs[f == w]].sum(axis=1) ** 2
    return {v: Fraction(int(c), q * q) for v, c in enumerate(counts) if c}


def _nullspace_vector(rows: list[int], n: int) -> int | None:
    """The unique nonzero a with a.v = 0 for all v, when rows span n-1 dimensions."""
    pivots: dict[int, int] = {}  # reduced row echelon form, keyed by pivot bit
    for v in rows:
        for b, r in pivots.items():
            if v >> b & 1:
                v ^= r
        if not v:
            continue
        top = v.bit_length() - 1
        for b, r in list(pivots.items()):
            if r >> top & 1:
                pivots[b] = r ^ v
        pivots[top] = v
    if len(pivots) != n - 1:
        return None
    free = next(b for b in range(n) if b not in pivots)
    a = 1 << free
    for bit, r in pivots.items():
        if r >> free & 1:
            a |= 1 << bit
    return a


def rank2(rows: Sequence[int]) -> int:
    basis: list[int] = []
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


@dataclass
class SimonResult:
    a_recovered: int | None
    queries_used: int
    success: bool
    vectors: list[int]


def _simon_dims(oracle) -> int:
    q = oracle.N
    n = q.bit_length() - 1
    if 1 << n != q or oracle.M != q:
        raise ContractViolation("not a Simon oracle on Z_2^n")
    return n


def _simon_sampler(oracle, rng: np.random.Generator, n: int):
    """Yield measured vectors, one fresh oracle call (and fresh f) each."""
    cache: dict = {}
    while True:
        f = _xor_function(oracle, oracle.sample_seed(rng))
        if f not in cache:
            dist = simon_distribution(n, f)
            denom = math.lcm(*(p.denominator for p in dist.values()))
            cache[f] = (list(dist), np.cumsum([int(p * denom) for p in dist.values()]), denom)
        outcomes, cumulative, denom = cache[f]
        yield outcomes[int(np.searchsorted(cumulative, rng.integers(denom), side="right"))]


def simon_measurements(oracle, count: int, rng_seed: int) -> list[int]:
    """``count`` independent query outcomes (bit strings as integers)."""
    n = _simon_dims(oracle)
    sampler = _simon_sampler(oracle, np.random.default_rng(rng_seed), n)
    return [next(sampler) for _ in range(count)]


def simon_solve(oracle: RandomizedOracle | SampledOracle, rng_seed: int,
                max_queries: int | None = None) -> SimonResult:
    """Sample vectors orthogonal to a (fresh f every call) until they span a's complement."""
    n = _simon_dims(oracle)
    cap = 50 * n if max_queries is None else max_queries
    sampler = _simon_sampler(oracle, np.random.default_rng(rng_seed), n)
    vectors: list[int] = []
    for used in range(1, cap + 1):
        vectors.append(next(sampler))
        if rank2(vectors) == n - 1:
            return SimonResult(_nullspace_vector(vectors, n), used, True, vectors)
    return SimonResult(None, cap, False, vectors)
