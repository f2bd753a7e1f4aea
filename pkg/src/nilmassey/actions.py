"""Group actions on free nilpotent quotients, given on generators.

Two shapes occur: the pure character action g(gamma_i) = gamma_i^chi(g), and
the two-generator monodromy action

    g(gamma_1) = gamma_1^chi(g)
    g(gamma_2) = f(g)^-1 gamma_2^chi(g) f(g)

with f a cocycle valued in the commutator subgroup.  Actions are applied to
series through substitution, so an endomorphism determined on generators
extends to the whole truncated algebra.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError, ContextMismatch, NotTwistedCocycle
from .groups import Character, FiniteGroup
from .magnus import (
    TruncatedSeries,
    conjugate,
    from_hall_coordinates,
    hall_basis,
    invert_group,
    power,
    substitute,
    witt_number,
)


class CharacterAction:
    """g(gamma_i) = gamma_i^chi(g) on the quotient of class n."""

    def __init__(self, chi: Character, r: int, n: int):
        if n < 1:
            raise ConfigError("nilpotency degree n must be >= 1")
        chi.ctx.require_unit_factorials(n)
        self.chi = chi
        self.group = chi.group
        self.ctx = chi.ctx
        self.r = r
        self.n = n
        self._images = {}

    def images(self, g: int, N: int):
        key = (g, N)
        if key not in self._images:
            self._images[key] = tuple(
                power(TruncatedSeries.generator(self.r, N, self.ctx, i), self.chi.value(g))
                for i in range(1, self.r + 1)
            )
        return self._images[key]

    def apply(self, g: int, series: TruncatedSeries) -> TruncatedSeries:
        return substitute(series, self.images(g, series.N))


class MonodromyAction:
    """Character action on gamma_1, f-conjugated character action on gamma_2.

    f maps group elements to series at degree bound n with constant term 1
    and no linear part (values in the commutator subgroup).  The cocycle law
    f(gh) = f(g) * g(f(h)) and the action axiom are verified on construction.
    """

    def __init__(self, chi: Character, f, n: int, check: bool = True):
        if n < 2:
            raise ConfigError("monodromy actions need n >= 2")
        chi.ctx.require_unit_factorials(n)
        self.chi = chi
        self.group = chi.group
        self.ctx = chi.ctx
        self.r = 2
        self.n = n
        self.f = dict(f)
        self._images = {}
        for g in self.group:
            if g not in self.f:
                raise ConfigError(f"f has no value at group element {g}")
            val = self.f[g]
            if val.r != 2 or val.N != n or val.ctx != self.ctx:
                raise ContextMismatch("f values must be series with r=2, N=n over the run context")
            if not val.is_group_like or val.blocks[1].any():
                raise NotTwistedCocycle("f values must lie in the commutator subgroup")
        if check:
            self._validate()

    def _validate(self):
        G = self.group
        for g in G:
            for h in G:
                lhs = self.f[G.mult(g, h)]
                rhs = self.f[g] * self.apply(g, self.f[h])
                if lhs != rhs:
                    raise NotTwistedCocycle(f"f violates the cocycle law at ({g}, {h})")
        gens = [TruncatedSeries.generator(2, self.n, self.ctx, i) for i in (1, 2)]
        for g in G:
            for h in G:
                gh = G.mult(g, h)
                for gen in gens:
                    if self.apply(g, self.apply(h, gen)) != self.apply(gh, gen):
                        raise NotTwistedCocycle(
                            f"induced maps violate the action axiom at ({g}, {h})"
                        )

    def images(self, g: int, N: int):
        key = (g, N)
        if key not in self._images:
            c = self.chi.value(g)
            g1 = power(TruncatedSeries.generator(2, N, self.ctx, 1), c)
            g2 = power(TruncatedSeries.generator(2, N, self.ctx, 2), c)
            fg = self.f[g].truncated(N)
            self._images[key] = (g1, conjugate(g2, fg))
        return self._images[key]

    def apply(self, g: int, series: TruncatedSeries) -> TruncatedSeries:
        return substitute(series, self.images(g, series.N))


def _endo_preimage(images, target: TruncatedSeries) -> TruncatedSeries:
    """Solve substitute(y, images) = target for y, for a unipotent
    endomorphism (images congruent to the generators mod higher degree)."""
    y = target
    for _ in range(target.N + 1):
        err = invert_group(substitute(y, images)) * target
        if err == TruncatedSeries.one(target.r, target.N, target.ctx):
            return y
        y = y * err
    raise NotTwistedCocycle("endomorphism is not invertible on the truncation")


def monodromy_from_conjugation(chi: Character, w: TruncatedSeries, n: int) -> MonodromyAction:
    """Monodromy action conjugate to the split one by gamma_2 -> w^-1 gamma_2 w.

    For w in the commutator subgroup this produces the cocycle
    f(g) = theta^-1(w^-1 * g0(w)) with g0 the pure character action and
    theta the partial conjugation; f is valid by construction and is nonzero
    whenever the character moves w.
    """
    ctx = chi.ctx
    if w.r != 2 or w.N != n or w.ctx != ctx:
        raise ContextMismatch("w must be a series with r=2, N=n over the character context")
    if not w.is_group_like or w.blocks[1].any():
        raise NotTwistedCocycle("w must lie in the commutator subgroup")
    gens = [TruncatedSeries.generator(2, n, ctx, i) for i in (1, 2)]
    theta_images = (gens[0], conjugate(gens[1], w))
    theta_inv_images = (gens[0], _endo_preimage(theta_images, gens[1]))
    base = CharacterAction(chi, 2, n)
    f = {}
    for g in chi.group:
        moved = invert_group(w) * base.apply(g, w)
        f[g] = substitute(moved, theta_inv_images)
    return MonodromyAction(chi, f, n)


def enumerate_monodromy_cocycles(chi: Character, n: int):
    """All valid f for a cyclic group: generator candidates run over the
    Hall coordinates of the commutator subgroup at degrees 2..n, filtered by
    the closure condition f(sigma^m) = 1."""
    G = chi.group
    if G.cyclic_generator is None:
        raise ConfigError("exhaustive f enumeration needs a cyclic group")
    ctx = chi.ctx
    sizes = [witt_number(2, d) for d in range(2, n + 1)]
    total = sum(sizes)
    mod = ctx.modulus
    out = []
    for flat in np.ndindex(*([mod] * total)):
        coords = [np.zeros(2, dtype=np.int64)]
        pos = 0
        for d, size in enumerate(sizes, start=2):
            coords.append(np.array(flat[pos : pos + size], dtype=np.int64))
            pos += size
        phi = from_hall_coordinates(coords, 2, n, ctx)
        action = extend_cyclic_cocycle_to_monodromy(chi, phi, n)
        if action is not None:
            out.append(action)
    return out


def extend_cyclic_cocycle_to_monodromy(chi: Character, phi: TruncatedSeries, n: int):
    """Extend a candidate f(sigma) = phi over a cyclic group, or None if the
    closure condition fails."""
    G = chi.group
    sigma = G.cyclic_generator
    ctx = chi.ctx
    one = TruncatedSeries.one(2, n, ctx)
    f = {G.identity: one}
    gens = [TruncatedSeries.generator(2, n, ctx, i) for i in (1, 2)]
    g = G.identity
    for _ in range(G.order):
        prev = f[g]
        # sigma^j acts through images built from f(sigma^j), already known
        c = chi.value(g)
        im1 = power(gens[0], c)
        im2 = conjugate(power(gens[1], c), prev)
        nxt = prev * substitute(phi, (im1, im2))
        g_next = G.mult(g, sigma)
        if g_next == G.identity:
            if nxt != one:
                return None
            break
        f[g_next] = nxt
        g = g_next
    try:
        return MonodromyAction(chi, f, n)
    except NotTwistedCocycle:
        return None
