"""Permutations of [M] = {1, ..., M} and the enumerations the oracles need.

Domain values are 1-based. Array offsets are 0-based; the only place the
two meet is :func:`to_index` / :func:`from_index`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from ..config import check_cap
from ..errors import ContractViolation, EmptySetError


def to_index(value: int) -> int:
    """Map an element of [M] to its 0-based array offset."""
    return value - 1


def from_index(index: int) -> int:
    """Inverse of :func:`to_index`."""
    return index + 1


@dataclass(frozen=True)
class Permutation:
    """A bijection of [M], stored as its image table ``images[y-1] = p(y)``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ContractViolation(f"{images} is not a permutation of [1..{len(images)}]")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, M: int) -> "Permutation":
        return cls(tuple(range(1, M + 1)))

    @classmethod
    def from_indices(cls, offsets: Sequence[int]) -> "Permutation":
        return cls(tuple(from_index(i) for i in offsets))

    @classmethod
    def cyclic_shift(cls, M: int, v: int) -> "Permutation":
        """y -> ((y - 1 + v) mod M) + 1."""
        return cls(tuple((y - 1 + v) % M + 1 for y in range(1, M + 1)))

    @property
    def M(self) -> int:
        return len(self.images)

    def __len__(self) -> int:
        return len(self.images)

    def __call__(self, y: int) -> int:
        return permutation_apply(self, y)

    def indices(self) -> tuple[int, ...]:
        """0-based image table, for array code."""
        return tuple(to_index(v) for v in self.images)

    def compose(self, other: "Permutation") -> "Permutation":
        """``self ∘ other``: apply ``other`` first."""
        if other.M != self.M:
            raise ContractViolation("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[to_index(v)] for v in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.M
        for y, v in enumerate(self.images, start=1):
            inv[to_index(v)] = y
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.M + 1):
            if start in seen:
                continue
            cycle = []
            y = start
            while y not in seen:
                seen.add(y)
                cycle.append(y)
                y = self.images[to_index(y)]
            out.append(tuple(cycle))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def is_identity(self) -> bool:
        return all(v == y for y, v in enumerate(self.images, start=1))

    def is_involution(self) -> bool:
        return self.compose(self).is_identity()

    def is_fixed_point_free(self) -> bool:
        return all(v != y for y, v in enumerate(self.images, start=1))

    def is_full_cycle(self) -> bool:
        return self.cycle_type() == (self.M,)

    def __str__(self):
        return "(" + " ".join(map(str, self.images)) + ")"


def permutation_apply(p: Permutation, y: int) -> int:
    if not 1 <= y <= p.M:
        raise ContractViolation(f"{y} is outside [1..{p.M}]")
    return p.images[to_index(y)]


def pair_fixing_count(p: Permutation) -> int:
    """Number of ordered pairs (x, y) with p(x) = y and p(y) = x."""
    return sum(1 for x in range(1, p.M + 1) if p(p(x)) == x)


def all_permutations(M: int) -> Iterator[Permutation]:
    check_cap("enumeration", M, "permutation degree M")
    for images in itertools.permutations(range(1, M + 1)):
        yield Permutation(images)


def _matchings(items: tuple[int, ...]) -> Iterator[list[tuple[int, int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        remaining = rest[:i] + rest[i + 1:]
        for tail in _matchings(remaining):
            yield [(first, partner)] + tail


def enumerate_fixed_point_free_involutions(M: int) -> list[Permutation]:
    """All involutions of [M] without fixed points, built from perfect matchings.

    There are (M-1)!! of them.
    """
    if M <= 0:
        raise ContractViolation("M must be positive")
    if M % 2:
        raise EmptySetError(f"no fixed-point-free involution exists on an odd set (M={M})")
    check_cap("enumeration", M, "permutation degree M")
    out = []
    for matching in _matchings(tuple(range(1, M + 1))):
        images = [0] * M
        for a, b in matching:
            images[a - 1] = b
            images[b - 1] = a
        out.append(Permutation(tuple(images)))
    return sorted(out, key=lambda p: p.images)


def enumerate_full_cycles(M: int) -> list[Permutation]:
    """All M-cycles of [M]; there are (M-1)! of them."""
    if M < 2:
        raise ContractViolation("full cycles need M >= 2")
    check_cap("enumeration", M, "permutation degree M")
    out = []
    for tail in itertools.permutations(range(2, M + 1)):
        order = (1,) + tail
        images = [0] * M
        for a, b in zip(order, order[1:] + order[:1]):
            images[a - 1] = b
        out.append(Permutation(tuple(images)))
    return sorted(out, key=lambda p: p.images)


def double_factorial(m: int) -> int:
    return math.prod(range(m, 0, -2)) if m > 0 else 1
