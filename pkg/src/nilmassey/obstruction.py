"""Section obstructions for the thrice-punctured line, and the abelianized
Kummer formulas feeding them.

The Galois side is not modeled: the user supplies (G, chi, f) directly as a
MonodromyAction.  For each order-n monomial index with a single 2, the
canonical defining system of a twisted cocycle is built and its Massey
product tested for vanishing; a section surviving to class n+1 passes every
one of these tests.

Kummer classes are formal multiplicative expressions: a rational coefficient
times a product of opaque symbols with integer exponents.  Numeric inputs
fold exactly; symbolic inputs stay atomic (the relation engine is limited to
explicit products and inverses).  A separate, explicit step assigns residue
values to symbols and produces honest 1-cocycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .actions import MonodromyAction
from .cohomology import Cochain, GModule, TwistedCocycle, coboundary
from .errors import BadPoint, ConfigError, DegenerateConfiguration
from .groups import Character
from .massey import DefiningSystem, canonical_system, massey_value, validate, vanishes


def single_two_indices(n: int):
    """The n monomial indices J: {1..n} -> {1, 2} taking the value 2 once."""
    if n < 2:
        raise ValueError("need n >= 2")
    return [tuple(2 if i == i0 else 1 for i in range(n)) for i0 in range(n)]


@dataclass
class JReport:
    J: tuple
    system: DefiningSystem
    system_valid: bool
    value: Optional[Cochain]
    vanishes: bool
    witness: Optional[Cochain]


@dataclass
class ObstructionReport:
    reports: list
    obstructed: bool

    @property
    def verdict(self) -> str:
        return "obstructed" if self.obstructed else "unobstructed"


def section_obstructions(x: TwistedCocycle, action: MonodromyAction) -> ObstructionReport:
    """Per-J vanishing tests over all single-2 indices of order n."""
    if x.action is not action:
        raise ConfigError("the cocycle does not carry the supplied action")
    from .cohomology import is_coboundary

    reports = []
    obstructed = False
    for J in single_two_indices(action.n):
        system = canonical_system(x, J)
        ok = bool(validate(system))
        value = massey_value(system) if ok else None
        if value is not None:
            van, witness = is_coboundary(value)
        else:
            van, witness = False, None
        if not van:
            obstructed = True
        reports.append(JReport(J, system, ok, value, van, witness))
    return ObstructionReport(reports, obstructed)


# ---------------------------------------------------------------------------
# formal multiplicative expressions


@dataclass(frozen=True)
class MultExpr:
    """rational * prod symbol^exponent, in a free multiplicative group."""

    rational: Fraction = Fraction(1)
    atoms: tuple = ()  # sorted tuple of (symbol, exponent), exponents nonzero

    @classmethod
    def from_value(cls, v) -> "MultExpr":
        if isinstance(v, MultExpr):
            return v
        if isinstance(v, str):
            return cls(Fraction(1), ((v, 1),))
        if isinstance(v, (int, Fraction)):
            if v == 0:
                raise BadPoint("0 has no class in the multiplicative group")
            return cls(Fraction(v), ())
        raise TypeError(f"cannot interpret {v!r} as a multiplicative expression")

    def __mul__(self, other: "MultExpr") -> "MultExpr":
        other = MultExpr.from_value(other)
        exps = dict(self.atoms)
        for s, e in other.atoms:
            exps[s] = exps.get(s, 0) + e
        atoms = tuple(sorted((s, e) for s, e in exps.items() if e))
        return MultExpr(self.rational * other.rational, atoms)

    def inverse(self) -> "MultExpr":
        return MultExpr(1 / self.rational, tuple(sorted((s, -e) for s, e in self.atoms)))

    def __pow__(self, e: int) -> "MultExpr":
        if e < 0:
            return self.inverse() ** (-e)
        out = MultExpr()
        for _ in range(e):
            out = out * self
        return out

    @property
    def is_numeric(self) -> bool:
        return not self.atoms

    def __str__(self):
        parts = []
        if self.rational != 1 or not self.atoms:
            parts.append(str(self.rational))
        for s, e in self.atoms:
            parts.append(s if e == 1 else f"{s}^{e}")
        return "*".join(parts)


def sym(name: str) -> MultExpr:
    return MultExpr.from_value(name)


def num(q) -> MultExpr:
    return MultExpr.from_value(Fraction(q))


def neg(x) -> MultExpr:
    """-x: folds for numerics, contributes the unit -1 for symbols."""
    x = MultExpr.from_value(x)
    return MultExpr(-x.rational, x.atoms)


def one_minus(x) -> MultExpr:
    """1 - x: folds for numerics; an opaque derived symbol otherwise."""
    x = MultExpr.from_value(x)
    if x.is_numeric:
        if x.rational == 1:
            raise BadPoint("1 - x vanishes at x = 1")
        return MultExpr(1 - x.rational, ())
    return MultExpr(Fraction(1), ((f"1-({x})", 1),))


def difference(a, b) -> MultExpr:
    """a - b as a multiplicative atom; folds when both are numeric."""
    a = MultExpr.from_value(a)
    b = MultExpr.from_value(b)
    if a.is_numeric and b.is_numeric:
        if a.rational == b.rational:
            raise DegenerateConfiguration(f"difference {a} - {b} vanishes")
        return MultExpr(a.rational - b.rational, ())
    return MultExpr(Fraction(1), ((f"({a})-({b})", 1),))


# ---------------------------------------------------------------------------
# point descriptors and the abelianized Kummer formulas


@dataclass(frozen=True)
class RationalPoint:
    """A point of the line punctured at 0, 1 and infinity."""

    x: Union[int, Fraction, str, MultExpr]


@dataclass(frozen=True)
class TangentialPoint:
    """Tangent vector a + v*eps at a puncture a in {0, 1}."""

    a: int
    v: Union[int, Fraction, str, MultExpr]


@dataclass(frozen=True)
class IotaTangentialPoint:
    """Image of 0 + v*eps under the inversion z -> 1/z."""

    v: Union[int, Fraction, str, MultExpr]


def kappa_ab(point):
    """Abelianized Kummer pair of a rational base point.

    rational x        -> (x, 1-x)
    1 + v*eps         -> (1, -v)
    0 + v*eps         -> (v, 1)
    iota(0 + v*eps)   -> (1/v, -1/v)
    """
    if isinstance(point, RationalPoint):
        x = MultExpr.from_value(point.x)
        if x.is_numeric and x.rational in (0, 1):
            raise BadPoint(f"rational point x = {x.rational} hits a puncture")
        return (x, one_minus(x))
    if isinstance(point, TangentialPoint):
        v = MultExpr.from_value(point.v)
        if v.is_numeric and v.rational == 0:
            raise BadPoint("zero tangent scale")
        if point.a == 1:
            return (num(1), neg(v))
        if point.a == 0:
            return (v, num(1))
        raise BadPoint(f"tangential base points sit at 0 or 1, not {point.a}")
    if isinstance(point, IotaTangentialPoint):
        v = MultExpr.from_value(point.v)
        if v.is_numeric and v.rational == 0:
            raise BadPoint("zero tangent scale")
        return (v.inverse(), neg(v).inverse())
    raise TypeError(f"unknown point descriptor {point!r}")


def f_ab_coefficients(a, v, i: int, j: int) -> MultExpr:
    """Abelianized coordinates of the path-twisting cocycles for the line
    punctured at infinity and a_1, ..., a_m with tangent scales v_1, ..., v_m:

        (f_i)^ab_j = v_i / (a_1 - a_i)       if j == i
                     (a_i - a_1) / v_1       if j == 1
                     (a_i - a_j)/(a_1 - a_j) otherwise

    Indices are 1-based and i != 1 (f_1 is trivial by the base-point choice).
    """
    m = len(a)
    if len(v) != m:
        raise DegenerateConfiguration("need one tangent scale per branch point")
    if not (1 <= i <= m and 1 <= j <= m):
        raise DegenerateConfiguration(f"indices ({i}, {j}) outside 1..{m}")
    if i == 1:
        raise DegenerateConfiguration("i = 1 is the base point itself")
    numeric = [MultExpr.from_value(t) for t in a]
    for s in range(m):
        for t in range(s + 1, m):
            if numeric[s].is_numeric and numeric[t].is_numeric and numeric[s].rational == numeric[t].rational:
                raise DegenerateConfiguration(f"branch points {s + 1} and {t + 1} coincide")
    scales = [MultExpr.from_value(t) for t in v]
    for s, sc in enumerate(scales):
        if sc.is_numeric and sc.rational == 0:
            raise DegenerateConfiguration(f"tangent scale {s + 1} vanishes")
    ai, a1 = numeric[i - 1], numeric[0]
    if j == i:
        return scales[i - 1] * difference(a1, ai).inverse()
    if j == 1:
        return difference(ai, a1) * scales[0].inverse()
    aj = numeric[j - 1]
    return difference(ai, aj) * difference(a1, aj).inverse()


@dataclass(frozen=True)
class CorollaryTarget:
    """Pair (X, Y) whose order-n single-Y Massey products vanish, together
    with the base point it came from."""

    X: MultExpr
    Y: MultExpr
    kind: str
    source: str

    def negated(self):
        """(-(X), -(Y)) in additive notation: the pair of inverses."""
        return (self.X.inverse(), self.Y.inverse())


def vanishing_corollary_targets(kind: str, x) -> CorollaryTarget:
    """Targets of the vanishing corollary.

    kind = "rational":        (x^-1, (1-x)^-1), from the point x
    kind = "tangential-iota": (x, -x),          from iota(0 + x*eps)
    """
    xe = MultExpr.from_value(x)
    if kind == "rational":
        if xe.is_numeric and xe.rational in (0, 1):
            raise BadPoint(f"x = {xe.rational} hits a puncture")
        return CorollaryTarget(
            xe.inverse(), one_minus(xe).inverse(), kind, f"kappa_ab(rational {xe})"
        )
    if kind == "tangential-iota":
        if xe.is_numeric and xe.rational == 0:
            raise BadPoint("zero tangent scale")
        return CorollaryTarget(xe, neg(xe), kind, f"kappa_ab(iota(0 + ({xe})*eps))")
    raise ValueError(f"unknown corollary kind {kind!r}")


# ---------------------------------------------------------------------------
# concretization: from formal pairs to honest cocycles


def _prime_factors(n: int):
    out = {}
    n = abs(n)
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def concretize(expr: MultExpr, assignment: dict, chi: Character) -> int:
    """Generator value of the 1-cocycle attached to a formal expression.

    The stand-in for the Kummer map is additive in the exponents: each symbol
    (and each prime factor of the rational part) must be assigned a residue.
    Units +-1 contribute 0 (the coefficients have odd residue characteristic).
    """
    mod = chi.ctx.modulus
    total = 0
    for s, e in expr.atoms:
        if s not in assignment:
            raise ConfigError(f"no assignment for symbol {s!r}")
        total = (total + e * int(assignment[s])) % mod
    q = expr.rational
    for prime, mult in _prime_factors(q.numerator):
        key = str(prime)
        if key not in assignment:
            raise ConfigError(f"no assignment for prime {key}")
        total = (total + mult * int(assignment[key])) % mod
    for prime, mult in _prime_factors(q.denominator):
        key = str(prime)
        if key not in assignment:
            raise ConfigError(f"no assignment for prime {key}")
        total = (total - mult * int(assignment[key])) % mod
    return total


@dataclass
class AbelianizedClassPair:
    """Pair of 1-cocycles G -> A(chi), the abelianized section data."""

    x1: Cochain
    x2: Cochain

    def __post_init__(self):
        for c in (self.x1, self.x2):
            if c.degree != 1 or c.module.rank != 1 or c.module.power != 1:
                raise ConfigError("components must be 1-cochains into A(chi)")
            if not coboundary(c).is_zero():
                raise ConfigError("components must satisfy the twisted 1-cocycle law")

    @classmethod
    def from_generator_values(cls, chi: Character, t1: int, t2: int) -> "AbelianizedClassPair":
        G = chi.group
        if G.cyclic_generator is None:
            raise ConfigError("generator values need a cyclic group")
        module = GModule.character_module(chi, 1)
        mod = chi.ctx.modulus
        cochains = []
        for t in (t1, t2):
            vals = np.zeros((G.order, 1), dtype=np.int64)
            g = G.identity
            acc = 0
            for _ in range(G.order):
                vals[g, 0] = acc
                # c(g * sigma) = c(g) + chi(g) * t
                acc = (acc + chi.value_int(g) * int(t)) % mod
                g = G.mult(g, G.cyclic_generator)
            if acc % mod != 0:
                raise ConfigError(
                    f"generator value {t} violates the cocycle closure condition"
                )
            cochains.append(Cochain(module, 1, vals))
        return cls(cochains[0], cochains[1])

    def to_twisted_cocycle(self, action: MonodromyAction) -> TwistedCocycle:
        """Level-2 twisted cocycle 1 + x1(g) z1 + x2(g) z2 (requires n = 2)."""
        if action.n != 2:
            raise ConfigError("direct conversion targets class-2 actions")
        from .magnus import TruncatedSeries

        values = {}
        for g in action.group:
            s = TruncatedSeries.one(2, 1, action.ctx)
            s.blocks[1][0] = int(self.x1.values[g, 0])
            s.blocks[1][1] = int(self.x2.values[g, 0])
            values[g] = s
        return TwistedCocycle(action, values)
