import itertools

import pytest

from randoracle.core import IRREDUCIBLE, FieldElement, gf_add, gf_mul
from randoracle.errors import ContractViolation


def slow_mul(a, b, n):
    """Schoolbook carry-less product followed by long division."""
    prod = 0
    for i in range(n):
        if b >> i & 1:
            prod ^= a << i
    mod = IRREDUCIBLE[n]
    for shift in range(2 * n - 2, n - 1, -1):
        if prod >> shift & 1:
            prod ^= mod << (shift - n)
    return prod


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_modulus_is_irreducible(n):
    mod = IRREDUCIBLE[n]
    assert mod.bit_length() == n + 1
    # no factor of degree 1..n/2
    for d in range(1, n // 2 + 1):
        for f in range(1 << d, 1 << (d + 1)):
            r = mod
            while r.bit_length() >= f.bit_length():
                r ^= f << (r.bit_length() - f.bit_length())
            assert r != 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_multiplication_table(n):
    for a, b in itertools.product(range(1 << n), repeat=2):
        assert (FieldElement(n, a) * FieldElement(n, b)).bits == slow_mul(a, b, n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_field_axioms(n):
    els = FieldElement.elements(n)
    zero, one = FieldElement.zero(n), FieldElement.one(n)
    for a in els:
        assert a + a == zero
        assert a * one == a
        if a:
            assert a * a.inverse() == one
        for b in els:
            assert a * b == b * a
            for c in els[:4]:
                assert a * (b + c) == a * b + a * c


def test_multiplicative_group_is_cyclic_of_order_q_minus_1():
    x = FieldElement(4, 0b10)
    powers = {(x ** e).bits for e in range(15)}
    assert len(powers) == 15


def test_known_products():
    assert (FieldElement(2, 0b10) * FieldElement(2, 0b10)).bits == 0b11
    assert gf_add(FieldElement(3, 0b101), FieldElement(3, 0b011)).bits == 0b110


def test_mismatched_fields():
    with pytest.raises(ContractViolation):
        gf_mul(FieldElement(2, 1), FieldElement(3, 1))
    with pytest.raises(ContractViolation):
        FieldElement(2, 4)


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        FieldElement.zero(3).inverse()
