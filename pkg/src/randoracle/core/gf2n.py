"""Arithmetic in GF(2^n) for small n, with fixed reduction polynomials."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ContractViolation

# bit i set <=> x^i present
IRREDUCIBLE = {
    1: 0b11,      # x + 1
    2: 0b111,     # x^2 + x + 1
    3: 0b1011,    # x^3 + x + 1
    4: 0b10011,   # x^4 + x + 1
}


def _check_degree(n: int) -> None:
    if n not in IRREDUCIBLE:
        raise ContractViolation(f"GF(2^{n}) is not supported (degrees {sorted(IRREDUCIBLE)})")


def poly_mulmod(a: int, b: int, n: int) -> int:
    """Carry-less product of the bit-polynomials a, b reduced mod the degree-n polynomial."""
    _check_degree(n)
    modulus = IRREDUCIBLE[n]
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a >> n & 1:
            a ^= modulus
    return acc


@dataclass(frozen=True)
class FieldElement:
    n: int
    bits: int

    def __post_init__(self):
        _check_degree(self.n)
        if not 0 <= self.bits < (1 << self.n):
            raise ContractViolation(f"{self.bits} is not an element of GF(2^{self.n})")

    @classmethod
    def zero(cls, n):
        return cls(n, 0)

    @classmethod
    def one(cls, n):
        return cls(n, 1)

    @classmethod
    def elements(cls, n):
        return [cls(n, b) for b in range(1 << n)]

    def __add__(self, other):
        return gf_add(self, other)

    __sub__ = __add__

    def __mul__(self, other):
        return gf_mul(self, other)

    def __pow__(self, e: int):
        result = FieldElement.one(self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self):
        if self.bits == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^n)")
        # a^(q-2) = a^-1
        return self ** ((1 << self.n) - 2)

    def __bool__(self):
        return self.bits != 0


def _same_field(a: FieldElement, b: FieldElement) -> None:
    if a.n != b.n:
        raise ContractViolation(f"mismatched field degrees {a.n} and {b.n}")


def gf_add(a: FieldElement, b: FieldElement) -> FieldElement:
    _same_field(a, b)
    return FieldElement(a.n, a.bits ^ b.bits)


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _same_field(a, b)
    return FieldElement(a.n, poly_mulmod(a.bits, b.bits, a.n))
