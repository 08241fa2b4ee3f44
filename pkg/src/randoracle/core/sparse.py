"""Square sparse matrices with exact rational entries.

Zero entries are never stored, so two matrices are equal exactly when their
entry dictionaries are equal.
"""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import numpy as np

from ..errors import ContractViolation


class SparseRationalMatrix:
    __slots__ = ("dim", "_entries")

    def __init__(self, dim: int, entries: Mapping[tuple[int, int], object] | Iterable = ()):
        if dim <= 0:
            raise ContractViolation("dimension must be positive")
        self.dim = dim
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, j), v in items:
            if not (0 <= i < dim and 0 <= j < dim):
                raise ContractViolation(f"entry ({i}, {j}) outside a {dim}x{dim} matrix")
            v = Fraction(v)
            if v:
                acc[(i, j)] = acc.get((i, j), 0) + v
        self._entries = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, dim, entries):
        m = cls.__new__(cls)
        m.dim = dim
        m._entries = entries
        return m

    @classmethod
    def identity(cls, dim):
        return cls._raw(dim, {(i, i): Fraction(1) for i in range(dim)})

    @classmethod
    def outer(cls, coeffs: Mapping[int, object], dim: int, scale=1):
        """``scale * |c><c|`` for a real sparse coefficient vector ``c``."""
        scale = Fraction(scale)
        entries = {}
        for i, a in coeffs.items():
            for j, b in coeffs.items():
                v = scale * a * b
                if v:
                    entries[(i, j)] = v
        return cls._raw(dim, entries)

    @classmethod
    def from_integer_counts(cls, dim, counts: Mapping[tuple[int, int], int], denominator: int):
        return cls._raw(dim, {k: Fraction(v, denominator) for k, v in counts.items() if v})

    # -- access --

    def __getitem__(self, key):
        return self._entries.get(key, Fraction(0))

    def items(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        """Nonzero entries in row-major order."""
        for key in sorted(self._entries):
            yield key, self._entries[key]

    def nnz(self) -> int:
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, SparseRationalMatrix):
            return NotImplemented
        return self.dim == other.dim and self._entries == other._entries

    def __hash__(self):
        return hash((self.dim, frozenset(self._entries.items())))

    def __repr__(self):
        return f"SparseRationalMatrix(dim={self.dim}, nnz={self.nnz()})"

    # -- arithmetic --

    def _check(self, other):
        if self.dim != other.dim:
            raise ContractViolation(f"dimension mismatch {self.dim} vs {other.dim}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._entries)
        for k, v in other._entries.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return SparseRationalMatrix._raw(self.dim, out)

    def __neg__(self):
        return SparseRationalMatrix._raw(self.dim, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return SparseRationalMatrix._raw(self.dim, {})
        return SparseRationalMatrix._raw(self.dim, {k: c * v for k, v in self._entries.items()})

    def __matmul__(self, other):
        self._check(other)
        rows = defaultdict(list)
        for (k, j), v in other._entries.items():
            rows[k].append((j, v))
        out: dict[tuple[int, int], Fraction] = {}
        for (i, k), a in self._entries.items():
            for j, b in rows.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + a * b
        return SparseRationalMatrix._raw(self.dim, {k: v for k, v in out.items() if v})

    def kron(self, other):
        d = other.dim
        out = {}
        for (i, j), a in self._entries.items():
            for (k, l), b in other._entries.items():
                out[(i * d + k, j * d + l)] = a * b
        return SparseRationalMatrix._raw(self.dim * d, out)

    def transpose(self):
        return SparseRationalMatrix._raw(self.dim, {(j, i): v for (i, j), v in self._entries.items()})

    def trace(self) -> Fraction:
        return sum((v for (i, j), v in self._entries.items() if i == j), Fraction(0))

    def is_symmetric(self) -> bool:
        # real entries: Hermitian <=> symmetric
        return all(self._entries.get((j, i)) == v for (i, j), v in self._entries.items())

    def to_dense(self, dtype=float) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=dtype)
        for (i, j), v in self._entries.items():
            out[i, j] = v if dtype is object else float(v)
        return out

    def first_difference(self, other):
        """Row-major first entry where the two matrices differ, or None."""
        self._check(other)
        for key in sorted(set(self._entries) | set(other._entries)):
            if self[key] != other[key]:
                return key, self[key], other[key]
        return None
