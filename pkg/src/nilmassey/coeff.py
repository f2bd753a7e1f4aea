"""Exact arithmetic in Z/ell^k.

Every higher layer routes its coefficients through this module so the working
precision stays explicit: a computation at (ell, k) is the image of the
corresponding pro-l statement under reduction mod ell^k.  The modulus is kept
below 2**31 so that int64 kernels never overflow as long as products are
reduced before they are accumulated twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import ContextMismatch, NonUnit, PrecisionViolation

MODULUS_LIMIT = 2**31


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ModulusContext:
    """Working precision: coefficients live in Z/ell^k.

    ell must stay larger than every nilpotency degree n used with this
    context, so that each m! with m <= n is a unit.
    """

    ell: int
    k: int

    def __post_init__(self):
        if not _is_prime(self.ell):
            raise ValueError(f"ell = {self.ell} is not prime")
        if self.k < 1:
            raise ValueError("precision exponent k must be >= 1")
        if self.ell**self.k >= MODULUS_LIMIT:
            raise ValueError(f"ell^k must stay below {MODULUS_LIMIT}")

    @property
    def modulus(self) -> int:
        return self.ell**self.k

    def residue(self, value) -> "Residue":
        return Residue(value, self)

    def zero(self) -> "Residue":
        return Residue(0, self)

    def one(self) -> "Residue":
        return Residue(1, self)

    def require_unit_factorials(self, n: int) -> None:
        """Fail unless m! is a unit for every m <= n, i.e. n < ell."""
        if n >= self.ell:
            raise PrecisionViolation(
                f"{n}! is divisible by ell = {self.ell}; "
                f"need ell > n for this operation"
            )


class Residue:
    """Canonical representative of an element of Z/ell^k."""

    __slots__ = ("value", "ctx")

    def __init__(self, value, ctx: ModulusContext):
        object.__setattr__(self, "value", int(value) % ctx.modulus)
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, val):  # pragma: no cover - guard
        raise AttributeError("Residue is immutable")

    def _lift(self, other) -> "Residue":
        if isinstance(other, Residue):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{other.ctx} vs {self.ctx}")
            return other
        if isinstance(other, int):
            return Residue(other, self.ctx)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.value + o.value, self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.value - o.value, self.ctx)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(o.value - self.value, self.ctx)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return Residue(self.value * o.value, self.ctx)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.ctx)

    def __pow__(self, e: int):
        if e < 0:
            return pow(invert(self), -e)
        return Residue(pow(self.value, e, self.ctx.modulus), self.ctx)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.ctx.modulus
        return (
            isinstance(other, Residue)
            and self.ctx == other.ctx
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.value, self.ctx))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.ctx.ell}^{self.ctx.k})"

    @property
    def is_unit(self) -> bool:
        return self.value % self.ctx.ell != 0


def invert(a: Residue) -> Residue:
    """Multiplicative inverse in Z/ell^k; the input must be a unit."""
    if gcd(a.value, a.ctx.ell) != 1:
        raise NonUnit(f"{a.value} is divisible by ell = {a.ctx.ell}")
    return Residue(pow(a.value, -1, a.ctx.modulus), a.ctx)


def binomial(c: Residue, m: int) -> Residue:
    """C(c, m) = c(c-1)...(c-m+1) / m! for a residue c.

    Continuous extension of the integer binomial coefficient; requires m! to
    be a unit, i.e. m < ell.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    ctx = c.ctx
    ctx.require_unit_factorials(m)
    mod = ctx.modulus
    num = 1
    fact = 1
    for i in range(m):
        num = num * ((c.value - i) % mod) % mod
        fact = fact * (i + 1) % mod
    return Residue(num, ctx) * invert(Residue(fact, ctx))


def integer_binomial(e: int, m: int) -> int:
    """C(e, m) for any integer e (negative included), exactly over Z."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    num = 1
    for i in range(m):
        num *= e - i
    fact = 1
    for i in range(2, m + 1):
        fact *= i
    assert num % fact == 0
    return num // fact
