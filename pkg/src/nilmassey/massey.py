"""Defining systems and Massey products.

A defining system of order n is a family T_{ij} of 1-cochains into A(chi^{j-i})
for 1 <= i < j <= n+1, (i, j) != (1, n+1), satisfying

    D T_{ij} = sum_{p=i+1}^{j-1} T_{ip} u T_{pj}

(for j = i+1 the empty sum: the T_{i,i+1} are cocycles).  The product relative
to T is sum_{p=2}^{n} T_{1p} u T_{p,n+1}, a 2-cocycle into A(chi^n).  A Massey
product is always carried together with its defining system; there is no
"the" Massey product value here.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np

from .actions import CharacterAction, MonodromyAction
from .cohomology import Cochain, GModule, TwistedCocycle, cup, coboundary, is_coboundary
from .errors import (
    BadGenerator,
    ContextMismatch,
    InvalidDefiningSystem,
    UnsupportedJ,
)
from .groups import Character
from .magnus import LieBasis
from .unipotent import phi_J


def system_index_pairs(n: int):
    """All (i, j) with 1 <= i < j <= n+1 except the corner (1, n+1)."""
    return [
        (i, j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 2)
        if (i, j) != (1, n + 1)
    ]


class DefiningSystem:
    """Family of 1-cochains indexed by matrix positions, with its order n."""

    __slots__ = ("n", "chi", "cochains")

    def __init__(self, n: int, chi: Character, cochains: dict):
        needed = set(system_index_pairs(n))
        if set(cochains) != needed:
            missing = needed - set(cochains)
            extra = set(cochains) - needed
            raise InvalidDefiningSystem(f"bad index set: missing {missing}, extra {extra}")
        for (i, j), c in cochains.items():
            if c.degree != 1:
                raise InvalidDefiningSystem(f"T_{(i, j)} is not a 1-cochain")
            if c.module.chi != chi or c.module.power != j - i or c.module.rank != 1:
                raise ContextMismatch(f"T_{(i, j)} must land in A(chi^{j - i})")
        self.n = n
        self.chi = chi
        self.cochains = dict(cochains)

    def __getitem__(self, pair) -> Cochain:
        return self.cochains[pair]

    def first_cochains(self):
        """The cochains T_{i,i+1} representing the product's arguments."""
        return [self.cochains[(i, i + 1)] for i in range(1, self.n + 1)]

    @classmethod
    def zero(cls, n: int, chi: Character) -> "DefiningSystem":
        cochains = {
            (i, j): Cochain.zero(GModule.character_module(chi, j - i), 1)
            for (i, j) in system_index_pairs(n)
        }
        return cls(n, chi, cochains)


class ValidationReport(NamedTuple):
    ok: bool
    failing_pair: Optional[tuple]
    detail: str

    def __bool__(self):
        return self.ok


def validate(system: DefiningSystem) -> ValidationReport:
    """Check every defining-system identity; report the first failure."""
    for (i, j) in system_index_pairs(system.n):
        lhs = coboundary(system[(i, j)])
        rhs = Cochain.zero(lhs.module, 2)
        for p in range(i + 1, j):
            rhs = rhs + cup(system[(i, p)], system[(p, j)])
        if lhs != rhs:
            kind = "cocycle condition" if j == i + 1 else "compatibility identity"
            return ValidationReport(False, (i, j), f"{kind} fails at T_{(i, j)}")
    return ValidationReport(True, None, "")


def massey_value(system: DefiningSystem) -> Cochain:
    """sum_{p=2}^{n} T_{1p} u T_{p,n+1}: the product relative to the system."""
    report = validate(system)
    if not report:
        raise InvalidDefiningSystem(report.detail)
    n = system.n
    out = None
    for p in range(2, n + 1):
        term = cup(system[(1, p)], system[(p, n + 1)])
        out = term if out is None else out + term
    return out


def canonical_system(x: TwistedCocycle, J) -> DefiningSystem:
    """Matrix defining system { -a_ij(phi_J(x(g))) } of a twisted cocycle.

    For the character action any J of degree n works; for the monodromy
    action only indices taking the value 2 exactly once keep phi_J
    equivariant, so everything else is refused.  T_{i,i+1} equals minus the
    J(i)-th abelianized coordinate of x.
    """
    action = x.action
    J = tuple(J)
    n = action.n
    if len(J) != n:
        raise ValueError(f"J has degree {len(J)}, the action has class {n}")
    if any(not 1 <= v <= action.r for v in J):
        raise BadGenerator(f"monomial index {J} outside 1..{action.r}")
    if isinstance(action, MonodromyAction):
        if sum(1 for v in J if v == 2) != 1:
            raise UnsupportedJ(
                "the monodromy action supports only indices with a single 2"
            )
    elif not isinstance(action, CharacterAction):
        raise TypeError(f"unsupported action type {type(action)}")

    G = action.group
    mats = {g: phi_J(x.value(g), J, action.r, action.ctx) for g in G}
    cochains = {}
    for (i, j) in system_index_pairs(n):
        module = GModule.character_module(action.chi, j - i)
        vals = np.zeros((G.order, 1), dtype=np.int64)
        for g in G:
            vals[g, 0] = (-mats[g].entry(i, j)).value
        cochains[(i, j)] = Cochain(module, 1, vals)
    return DefiningSystem(n, action.chi, cochains)


def vanishes(system: DefiningSystem) -> bool:
    """True iff the product relative to the system is a coboundary."""
    ok, _ = is_coboundary(massey_value(system))
    return ok


def mu_pushforward(delta: Cochain, basis: LieBasis, J) -> Cochain:
    """Push a Lie-coordinate 2-cochain forward along the Magnus coefficient
    of the monomial J: pair coordinates with the expansion column at J."""
    from .magnus import monomial_rank

    J = tuple(J)
    if len(J) != basis.n:
        raise ValueError(f"J has degree {len(J)}, basis has degree {basis.n}")
    col = basis.matrix[:, monomial_rank(J, basis.r)]
    mod = basis.ctx.modulus
    chi = delta.module.chi
    out_module = GModule.character_module(chi, basis.n)
    acc = np.zeros(delta.values.shape[:-1], dtype=np.int64)
    for i in range(len(col)):
        acc = (acc + delta.values[..., i] * int(col[i])) % mod
    return Cochain(out_module, delta.degree, acc[..., None])
