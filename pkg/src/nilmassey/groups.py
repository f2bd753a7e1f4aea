"""Finite groups as multiplication tables, and characters into Z/ell^k units.

A continuous cochain on a profinite group factors through a finite quotient;
these tables are the quotients actually computed with.
"""

from __future__ import annotations

import numpy as np

from .coeff import ModulusContext, Residue
from .errors import ConfigError, ContextMismatch


class FiniteGroup:
    """Group on elements 0..order-1 given by its multiplication table.

    Associativity, identity and inverses are verified on construction.
    """

    __slots__ = ("table", "order", "identity", "inverse_table", "cyclic_generator", "name")

    def __init__(self, table, name: str = "", cyclic_generator=None):
        table = np.array(table, dtype=np.int64)
        m = table.shape[0]
        if table.shape != (m, m) or table.min() < 0 or table.max() >= m:
            raise ConfigError("multiplication table must be square over 0..m-1")
        # g from the left and from the right must both act bijectively
        ident = None
        for e in range(m):
            if np.array_equal(table[e], np.arange(m)) and np.array_equal(table[:, e], np.arange(m)):
                ident = e
                break
        if ident is None:
            raise ConfigError("no identity element in table")
        left = table[table]            # [a, b, c] -> t[t[a, b], c]
        right = table[:, table]        # [a, b, c] -> t[a, t[b, c]]
        if not np.array_equal(left, right):
            raise ConfigError("multiplication table is not associative")
        inv = np.full(m, -1, dtype=np.int64)
        for a in range(m):
            hits = np.flatnonzero(table[a] == ident)
            if len(hits) != 1:
                raise ConfigError(f"element {a} has no unique inverse")
            inv[a] = hits[0]
        self.table = table
        self.order = m
        self.identity = ident
        self.inverse_table = inv
        self.cyclic_generator = cyclic_generator
        self.name = name or f"table-group({m})"

    @classmethod
    def cyclic(cls, m: int) -> "FiniteGroup":
        if m < 1:
            raise ConfigError("cyclic order must be positive")
        idx = np.arange(m)
        return cls((idx[:, None] + idx[None, :]) % m, name=f"Z/{m}",
                   cyclic_generator=1 % m)

    @classmethod
    def direct_product(cls, G: "FiniteGroup", H: "FiniteGroup") -> "FiniteGroup":
        mg, mh = G.order, H.order
        table = np.zeros((mg * mh, mg * mh), dtype=np.int64)
        for a in range(mg):
            for b in range(mh):
                for c in range(mg):
                    for d in range(mh):
                        table[a * mh + b, c * mh + d] = G.table[a, c] * mh + H.table[b, d]
        return cls(table, name=f"{G.name} x {H.name}")

    def mult(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse_table[a])

    def power(self, g: int, j: int) -> int:
        if j < 0:
            return self.power(self.inv(g), -j)
        acc = self.identity
        for _ in range(j):
            acc = self.mult(acc, g)
        return acc

    @property
    def elements(self):
        return range(self.order)

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    __hash__ = None

    def __repr__(self):
        return f"<{self.name}, order {self.order}>"


class Character:
    """Multiplicative map G -> (Z/ell^k)^* given by its value table."""

    __slots__ = ("group", "ctx", "values")

    def __init__(self, group: FiniteGroup, ctx: ModulusContext, values):
        values = np.array(values, dtype=np.int64) % ctx.modulus
        if values.shape != (group.order,):
            raise ConfigError("character needs one value per group element")
        if (values % ctx.ell == 0).any():
            raise ConfigError("character values must be units")
        prod = values[:, None] * values[None, :] % ctx.modulus
        if not np.array_equal(values[group.table], prod):
            raise ConfigError("character is not multiplicative")
        self.group = group
        self.ctx = ctx
        self.values = values

    @classmethod
    def trivial(cls, group: FiniteGroup, ctx: ModulusContext) -> "Character":
        return cls(group, ctx, np.ones(group.order, dtype=np.int64))

    @classmethod
    def from_generator_value(cls, group: FiniteGroup, ctx: ModulusContext, u: int) -> "Character":
        if group.cyclic_generator is None:
            raise ConfigError("generator-value characters need a cyclic group")
        u = int(u) % ctx.modulus
        vals = np.zeros(group.order, dtype=np.int64)
        g = group.identity
        v = 1
        for _ in range(group.order):
            vals[g] = v
            g = group.mult(g, group.cyclic_generator)
            v = v * u % ctx.modulus
        return cls(group, ctx, vals)

    def value(self, g: int) -> Residue:
        return self.ctx.residue(int(self.values[g]))

    def value_int(self, g: int) -> int:
        return int(self.values[g])

    def power_int(self, g: int, d: int) -> int:
        """chi(g)^d, with negative d through the unit inverse."""
        v = int(self.values[g])
        if d < 0:
            v = pow(v, -1, self.ctx.modulus)
            d = -d
        return pow(v, d, self.ctx.modulus)

    def is_trivial(self) -> bool:
        return bool((self.values == 1).all())

    def __pow__(self, d: int) -> "Character":
        mod = self.ctx.modulus
        if d < 0:
            vals = np.array([pow(int(v), -1, mod) for v in self.values], dtype=np.int64)
            d = -d
        else:
            vals = self.values
        return Character(self.group, self.ctx, [pow(int(v), d, mod) for v in vals])

    def __eq__(self, other):
        return (
            isinstance(other, Character)
            and self.ctx == other.ctx
            and self.group == other.group
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def check_context(self, ctx: ModulusContext):
        if self.ctx != ctx:
            raise ContextMismatch(f"{self.ctx} vs {ctx}")
