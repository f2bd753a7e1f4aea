import pytest
from math import comb, gcd

from nilmassey.coeff import (
    ModulusContext,
    Residue,
    binomial,
    integer_binomial,
    invert,
)
from nilmassey.errors import ContextMismatch, NonUnit, PrecisionViolation


def ext_euclid_inverse(a, m):
    """Independent oracle: extended Euclid."""
    old_r, r = a, m
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    assert old_r == 1
    return old_s % m


def test_context_validation():
    with pytest.raises(ValueError):
        ModulusContext(6, 1)
    with pytest.raises(ValueError):
        ModulusContext(5, 0)
    with pytest.raises(ValueError):
        ModulusContext(3, 21)  # 3^21 > 2^31
    assert ModulusContext(5, 3).modulus == 125


def test_invert_examples():
    ctx = ModulusContext(5, 1)
    assert invert(ctx.residue(2)) == ctx.residue(3)  # 2*3 = 6 = 1 mod 5
    assert invert(ctx.residue(1)) == ctx.residue(1)
    with pytest.raises(NonUnit):
        invert(ModulusContext(5, 2).residue(5))


def test_invert_against_euclid_oracle():
    for ell, k in ((5, 1), (7, 2), (11, 3)):
        ctx = ModulusContext(ell, k)
        for a in range(1, ctx.modulus):
            if a % ell == 0:
                continue
            assert invert(ctx.residue(a)).value == ext_euclid_inverse(a, ctx.modulus)


def test_invert_involution():
    ctx = ModulusContext(7, 2)
    for a in range(1, 49):
        if a % 7:
            r = ctx.residue(a)
            assert invert(invert(r)) == r


def test_binomial_examples():
    ctx5 = ModulusContext(5, 1)
    assert binomial(ctx5.residue(4), 2) == 1  # 4*3/2 = 6 = 1 mod 5
    assert binomial(ctx5.residue(3), 0) == 1
    assert binomial(ctx5.residue(1), 2) == 0


def test_binomial_precision_violation():
    ctx = ModulusContext(5, 1)
    with pytest.raises(PrecisionViolation):
        binomial(ctx.residue(3), 5)
    ctx.require_unit_factorials(4)
    with pytest.raises(PrecisionViolation):
        ctx.require_unit_factorials(5)


def test_binomial_pascal_identity():
    ctx = ModulusContext(7, 2)
    for c in range(49):
        rc = ctx.residue(c)
        for m in range(1, 5):
            lhs = binomial(rc, m)
            rhs = binomial(ctx.residue(c - 1), m) + binomial(ctx.residue(c - 1), m - 1)
            assert lhs == rhs


def test_binomial_matches_integer_binomial():
    ctx = ModulusContext(11, 2)
    for c in range(0, 30):
        for m in range(0, 6):
            assert binomial(ctx.residue(c), m).value == comb(c, m) % ctx.modulus


def test_integer_binomial_negative():
    assert integer_binomial(-1, 3) == -1
    assert integer_binomial(-2, 3) == -4
    assert integer_binomial(-1, 2) == 1
    for e in range(-6, 7):
        for m in range(0, 6):
            # Pascal over Z
            assert integer_binomial(e, m) == integer_binomial(e - 1, m) + (
                integer_binomial(e - 1, m - 1) if m else 0
            ) + (0 if m else 1) - (0 if m else integer_binomial(e - 1, 0))


def test_residue_arithmetic_and_context_mixing():
    ctx = ModulusContext(5, 2)
    other = ModulusContext(7, 1)
    a = ctx.residue(23)
    b = ctx.residue(8)
    assert (a + b).value == 6
    assert (a - b).value == 15
    assert (a * b).value == (23 * 8) % 25
    assert (-a).value == 2
    assert (a**2).value == (23 * 23) % 25
    assert a + 2 == ctx.residue(0)
    assert 2 + a == ctx.residue(0)
    with pytest.raises(ContextMismatch):
        a + other.residue(1)
    assert a.is_unit
    assert not ctx.residue(10).is_unit


def test_residue_negative_power_uses_inverse():
    ctx = ModulusContext(7, 1)
    a = ctx.residue(3)
    assert a ** (-1) == invert(a)
    assert (a ** (-2)) * (a**2) == 1
