"""Inhomogeneous cochains of finite groups with twisted coefficients.

The differential follows the standard convention

    (Dc)(g_1, ..., g_{p+1}) = g_1 c(g_2, ..., g_{p+1})
                            + sum_{i=1}^{p} (-1)^i c(..., g_i g_{i+1}, ...)
                            + (-1)^{p+1} c(g_1, ..., g_p)

so twisted homomorphisms are exactly the 1-cocycles.  H^1 and H^2 are never
materialized: every question is a membership or witness problem over Z/ell^k,
decided by the Smith-form solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .coeff import ModulusContext
from .errors import (
    ConfigError,
    ContextMismatch,
    LieSliceViolation,
    NotACocycle,
    NotGroupLike,
    NotLie,
    NotTwistedCocycle,
    SectionInvalid,
)
from .groups import Character, FiniteGroup
from .linalg import solve_mod_prime_power
from .magnus import (
    TruncatedSeries,
    from_hall_coordinates,
    hall_basis,
    hall_coordinates,
    invert_group,
    lie_decompose,
    magnus_embed,
    power,
    witt_number,
)


class GModule:
    """Free Z/ell^k-module of finite rank with a G-action by matrices.

    Rank-one modules with action chi(g)^d record (chi, d) so cup products can
    do character-power bookkeeping.
    """

    __slots__ = ("group", "ctx", "rank", "action", "chi", "power")

    _character_cache: dict = {}

    def __init__(self, group: FiniteGroup, ctx: ModulusContext, action,
                 chi: Optional[Character] = None, power: Optional[int] = None,
                 _validated: bool = False):
        action = np.array(action, dtype=np.int64) % ctx.modulus
        m = group.order
        if action.ndim != 3 or action.shape[0] != m or action.shape[1] != action.shape[2]:
            raise ConfigError("action must be one square matrix per group element")
        rank = action.shape[1]
        if not _validated:
            if not np.array_equal(action[group.identity], np.eye(rank, dtype=np.int64)):
                raise ConfigError("identity must act as the identity matrix")
            for g in range(m):
                for h in range(m):
                    prod = _matmul(action[g], action[h], ctx.modulus)
                    if not np.array_equal(prod, action[group.mult(g, h)]):
                        raise ConfigError("action is not a homomorphism")
        self.group = group
        self.ctx = ctx
        self.rank = rank
        self.action = action
        self.chi = chi
        self.power = power

    @classmethod
    def character_module(cls, chi: Character, d: int, rank: int = 1) -> "GModule":
        """A(chi^d)^rank: g acts as the scalar chi(g)^d."""
        key = (chi.ctx, chi.group.table.tobytes(), chi.values.tobytes(), d, rank)
        cached = cls._character_cache.get(key)
        if cached is not None:
            return cached
        mod = chi.ctx.modulus
        mats = np.array(
            [chi.power_int(g, d) * np.eye(rank, dtype=np.int64) % mod for g in chi.group],
            dtype=np.int64,
        )
        # scalar character powers are multiplicative by construction
        module = cls(chi.group, chi.ctx, mats, chi=chi, power=d, _validated=True)
        cls._character_cache[key] = module
        return module

    @classmethod
    def trivial(cls, group: FiniteGroup, ctx: ModulusContext, rank: int = 1) -> "GModule":
        chi = Character.trivial(group, ctx)
        return cls.character_module(chi, 0, rank)

    def act(self, g: int, vec: np.ndarray) -> np.ndarray:
        return self.action[g] @ (np.asarray(vec) % self.ctx.modulus) % self.ctx.modulus

    def __eq__(self, other):
        return (
            isinstance(other, GModule)
            and self.ctx == other.ctx
            and self.group == other.group
            and np.array_equal(self.action, other.action)
        )

    __hash__ = None


def _matmul(A, B, mod):
    out = np.zeros_like(A)
    for p in range(A.shape[1]):
        out = (out + A[:, p : p + 1] * B[p : p + 1, :]) % mod
    return out


class Cochain:
    """Total map G^p -> M stored densely: values.shape == (m,)*p + (rank,)."""

    __slots__ = ("module", "degree", "values")

    def __init__(self, module: GModule, degree: int, values):
        m = module.group.order
        values = np.array(values, dtype=np.int64) % module.ctx.modulus
        if values.shape != (m,) * degree + (module.rank,):
            raise ConfigError(
                f"cochain values have shape {values.shape}, "
                f"expected {(m,) * degree + (module.rank,)}"
            )
        self.module = module
        self.degree = degree
        self.values = values

    @classmethod
    def zero(cls, module: GModule, degree: int) -> "Cochain":
        m = module.group.order
        return cls(module, degree, np.zeros((m,) * degree + (module.rank,), dtype=np.int64))

    def _check(self, other: "Cochain"):
        if self.module != other.module or self.degree != other.degree:
            raise ContextMismatch("cochains live over different modules or degrees")

    def __add__(self, other):
        self._check(other)
        return Cochain(self.module, self.degree, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return Cochain(self.module, self.degree, self.values - other.values)

    def __neg__(self):
        return Cochain(self.module, self.degree, -self.values)

    def scale(self, c: int) -> "Cochain":
        return Cochain(self.module, self.degree, self.values * (int(c) % self.module.ctx.modulus))

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and self.module == other.module
            and self.degree == other.degree
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.values.any()

    def __call__(self, *args):
        if len(args) != self.degree:
            raise ValueError(f"need {self.degree} group elements")
        return self.values[args].copy()

    def serialize(self) -> dict:
        """Nonzero values keyed by comma-separated group tuples."""
        out = {}
        m = self.module.group.order
        for idx in np.ndindex(*(m,) * self.degree):
            vec = self.values[idx]
            if vec.any():
                key = ",".join(str(i) for i in idx)
                out[key] = [int(v) for v in vec] if self.module.rank > 1 else int(vec[0])
        return out


def coboundary(c: Cochain) -> Cochain:
    """The differential D; satisfies D(Dc) = 0."""
    module = c.module
    m = module.group.order
    table = module.group.table
    p = c.degree
    V = c.values
    mod = module.ctx.modulus

    out = np.einsum("gab,...b->g...a", module.action, V) % mod
    for i in range(1, p + 1):
        term = np.take(V, table.ravel(), axis=i - 1).reshape(
            V.shape[: i - 1] + (m, m) + V.shape[i:]
        )
        out = (out - term) % mod if i % 2 else (out + term) % mod
    last = np.broadcast_to(np.expand_dims(V, p), (m,) * (p + 1) + (module.rank,))
    out = (out - last) % mod if (p + 1) % 2 else (out + last) % mod
    return Cochain(module, p + 1, out)


def is_cocycle(c: Cochain) -> bool:
    return coboundary(c).is_zero()


def cup(c: Cochain, d: Cochain) -> Cochain:
    """(c u d)(g_1..g_{p+q}) = c(g_1..g_p) * chi(g_1...g_p)^b * d(g_{p+1}..),
    for rank-one character modules A(chi^a), A(chi^b); lands in A(chi^{a+b})."""
    for x in (c, d):
        if x.module.rank != 1 or x.module.chi is None or x.module.power is None:
            raise ContextMismatch("cup needs rank-one character modules")
    if c.module.group != d.module.group or c.module.ctx != d.module.ctx:
        raise ContextMismatch("cup factors live over different groups or contexts")
    if c.module.chi != d.module.chi:
        raise ContextMismatch("cup factors twisted by different characters")
    chi = c.module.chi
    mod = chi.ctx.modulus
    G = chi.group
    m = G.order
    p, q = c.degree, d.degree

    # chi(g_1 ... g_p)^b as an array over G^p
    prod_elem = np.zeros((m,) * p, dtype=np.int64) + G.identity
    for i in range(p):
        idx = np.expand_dims(
            np.arange(m), tuple(j for j in range(p) if j != i)
        ) if p > 1 else np.arange(m)
        prod_elem = G.table[prod_elem, idx]
    chi_pow = np.array([chi.power_int(g, d.module.power) for g in range(m)], dtype=np.int64)
    twist = chi_pow[prod_elem] if p > 0 else np.int64(chi.power_int(G.identity, d.module.power))

    cv = c.values[..., 0] * twist % mod
    dv = d.values[..., 0]
    vals = np.multiply.outer(cv, dv) % mod
    out_module = GModule.character_module(chi, c.module.power + d.module.power)
    return Cochain(out_module, p + q, vals[..., None])


CoboundaryWitness = tuple  # (bool, Optional[Cochain])


def is_coboundary(z: Cochain):
    """Decide Db = z for a 1-cochain b; returns (True, witness) or (False, None).

    The input must be a 2-cocycle (checked).  The decision is a linear system
    over Z/ell^k, solved by Smith elimination with minimal-valuation pivots.
    """
    if z.degree != 2:
        raise ValueError("is_coboundary decides 2-cochains")
    if not is_cocycle(z):
        raise NotACocycle("input 2-cochain has nonzero coboundary")
    module = z.module
    G = module.group
    m = G.order
    rank = module.rank
    mod = module.ctx.modulus

    nunk = m * rank
    A = np.zeros((m * m * rank, nunk), dtype=np.int64)
    rhs = np.zeros(m * m * rank, dtype=np.int64)
    eye = np.eye(rank, dtype=np.int64)
    for g in range(m):
        for h in range(m):
            row = (g * m + h) * rank
            gh = G.mult(g, h)
            A[row : row + rank, h * rank : (h + 1) * rank] += module.action[g]
            A[row : row + rank, gh * rank : (gh + 1) * rank] -= eye
            A[row : row + rank, g * rank : (g + 1) * rank] += eye
            rhs[row : row + rank] = z.values[g, h]
    sol = solve_mod_prime_power(A % mod, rhs, module.ctx.ell, module.ctx.k)
    if sol is None:
        return False, None
    witness = Cochain(module, 1, sol.reshape(m, rank))
    return True, witness


@dataclass
class CentralExtension:
    """Data of a central extension 1 -> A -> E -> Q -> 1 with a chosen
    set-theoretic section.

    E is opaque: the caller supplies multiplication, inversion, the quotient
    projection, the section, and a reader that expresses central elements in
    module coordinates (raising if its argument is not in the embedded A).
    """

    quotient: FiniteGroup
    module: GModule
    mult: Callable
    inv: Callable
    project: Callable
    section: Callable
    read_center: Callable


def extension_two_cocycle(ext: CentralExtension) -> Cochain:
    """Classifying 2-cocycle c(q1, q2) = s(q1) s(q2) s(q1 q2)^-1 read in A.

    Changing the section changes the result by a coboundary.
    """
    Q = ext.quotient
    s = ext.section
    for q in Q:
        if ext.project(s(q)) != q:
            raise SectionInvalid(f"section does not split the projection at {q}")
    e = s(Q.identity)
    if ext.mult(e, e) != e:
        raise SectionInvalid("section must send 1 to 1")
    vals = np.zeros((Q.order, Q.order, ext.module.rank), dtype=np.int64)
    for q1 in Q:
        for q2 in Q:
            prod = ext.mult(ext.mult(s(q1), s(q2)), ext.inv(s(Q.mult(q1, q2))))
            vec = np.atleast_1d(np.array(ext.read_center(prod), dtype=np.int64))
            vals[q1, q2] = vec % ext.module.ctx.modulus
    return Cochain(ext.module, 2, vals)


class TwistedCocycle:
    """Map x: G -> nilpotent quotient with x(gh) = x(g) * g(x(h)).

    Values are group-like series at degree bound action.n - 1, i.e. elements
    of the class-(n-1) quotient on which the action of class n is tested.
    """

    __slots__ = ("action", "values")

    def __init__(self, action, values, check: bool = True):
        self.action = action
        self.values = dict(values)
        N = action.n - 1
        for g in action.group:
            if g not in self.values:
                raise NotTwistedCocycle(f"no value at group element {g}")
            v = self.values[g]
            if v.r != action.r or v.N != N or v.ctx != action.ctx:
                raise ContextMismatch(
                    f"cocycle values must be series with r={action.r}, N={N}"
                )
            if not v.is_group_like:
                raise NotGroupLike("cocycle values must have constant term 1")
        if check:
            G = action.group
            for g in G:
                for h in G:
                    lhs = self.values[G.mult(g, h)]
                    rhs = self.values[g] * action.apply(g, self.values[h])
                    if lhs != rhs:
                        raise NotTwistedCocycle(
                            f"twisted cocycle law fails at ({g}, {h})"
                        )

    @classmethod
    def trivial(cls, action) -> "TwistedCocycle":
        one = TruncatedSeries.one(action.r, action.n - 1, action.ctx)
        return cls(action, {g: one for g in action.group}, check=False)

    @classmethod
    def from_generator(cls, action, phi: TruncatedSeries, check: bool = False) -> "TwistedCocycle":
        """Extend x(sigma) = phi over a cyclic group; the closure condition
        x(sigma^m) = 1 must hold, otherwise NotTwistedCocycle.

        The cocycle law for arbitrary pairs follows from closure alone:
        x(sigma^j) is the ordered product of the sigma^i-translates of phi,
        and since the action is a homomorphism (validated when the action was
        built), x(sigma^a) * sigma^a(x(sigma^b)) telescopes to the translate
        product of length a+b, which closure folds back mod m.  The full
        pairwise check is therefore skipped unless requested.
        """
        G = action.group
        if G.cyclic_generator is None:
            raise ConfigError("generator extension needs a cyclic group")
        sigma = G.cyclic_generator
        one = TruncatedSeries.one(action.r, action.n - 1, action.ctx)
        values = {G.identity: one}
        g = G.identity
        for _ in range(G.order):
            nxt = values[g] * action.apply(g, phi)
            g_next = G.mult(g, sigma)
            if g_next == G.identity:
                if nxt != one:
                    raise NotTwistedCocycle("closure x(sigma^m) = 1 fails")
                break
            values[g_next] = nxt
            g = g_next
        return cls(action, values, check=check)

    def value(self, g: int) -> TruncatedSeries:
        return self.values[g]

    def abelian_components(self):
        """Coordinate 1-cocycles x_1, ..., x_r in A(chi) read off the linear
        series coefficients."""
        action = self.action
        module = GModule.character_module(action.chi, 1)
        out = []
        for i in range(1, action.r + 1):
            vals = np.zeros((action.group.order, 1), dtype=np.int64)
            for g in action.group:
                vals[g, 0] = int(self.values[g].blocks[1][i - 1])
            out.append(Cochain(module, 1, vals))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, TwistedCocycle)
            and self.action is other.action
            and all(self.values[g] == other.values[g] for g in self.action.group)
        )

    __hash__ = None


def enumerate_twisted_cocycles(action):
    """All twisted cocycles G -> quotient of class n-1 for cyclic G,
    enumerated through Hall coordinates of the generator value."""
    G = action.group
    if G.cyclic_generator is None:
        raise ConfigError("exhaustive cocycle enumeration needs a cyclic group")
    ctx = action.ctx
    sizes = [witt_number(action.r, d) for d in range(1, action.n)]
    mod = ctx.modulus
    out = []
    for flat in np.ndindex(*([mod] * sum(sizes))):
        coords = []
        pos = 0
        for size in sizes:
            coords.append(np.array(flat[pos : pos + size], dtype=np.int64))
            pos += size
        phi = from_hall_coordinates(coords, action.r, action.n - 1, ctx)
        try:
            out.append(TwistedCocycle.from_generator(action, phi))
        except NotTwistedCocycle:
            continue
    return out


def lie_quotient_module(action, n: int) -> GModule:
    """[pi]_n/[pi]_{n+1} in Hall-basis coordinates: rank witt(r, n) with the
    scalar action chi^n (conjugation is trivial on the graded piece)."""
    return GModule.character_module(action.chi, n, rank=witt_number(action.r, n))


def delta_n(x: TwistedCocycle, lift_noise=None) -> Cochain:
    """Boundary obstruction of the central extension by [pi]_n/[pi]_{n+1}.

    Lifts each value one class up through its Hall coordinates (degree-n
    coordinates zero, or lift_noise[g] when supplied), then reads

        c(g, h) = x~(g) * g(x~(h)) * x~(gh)^-1

    in the degree-n homogeneous Lie slice.  The class of c vanishes exactly
    when x lifts one nilpotency level.
    """
    action = x.action
    n = action.n
    ctx = action.ctx
    G = action.group
    basis = hall_basis(action.r, n, ctx)

    lifts = {}
    for g in G:
        try:
            coords = hall_coordinates(x.value(g))
        except NotGroupLike as exc:
            raise NotTwistedCocycle(f"value at {g} is not a group element") from exc
        pad = np.zeros(len(basis), dtype=np.int64)
        if lift_noise is not None and g in lift_noise:
            pad = np.array(lift_noise[g], dtype=np.int64)
        lifts[g] = from_hall_coordinates(coords + [pad], action.r, n, ctx)

    module = lie_quotient_module(action, n)
    vals = np.zeros((G.order, G.order, module.rank), dtype=np.int64)
    for g in G:
        for h in G:
            c = lifts[g] * action.apply(g, lifts[h]) * invert_group(lifts[G.mult(g, h)])
            for d in range(1, n):
                if c.blocks[d].any():
                    raise LieSliceViolation(
                        f"boundary value at ({g}, {h}) has nonzero degree-{d} part"
                    )
            if c.constant != 1:
                raise LieSliceViolation("boundary value lost its constant term")
            try:
                vals[g, h] = lie_decompose(c.blocks[n], basis)
            except NotLie as exc:
                raise LieSliceViolation(
                    f"boundary value at ({g}, {h}) is outside the Lie slice"
                ) from exc
    return Cochain(module, 2, vals)


def has_lift(x: TwistedCocycle, action_up) -> bool:
    """Exhaustive search for a lift of x one nilpotency level up.

    Independent of delta_n: candidates run over the degree-n Hall
    coordinates appended to the generator value, validated only through the
    twisted-cocycle law at level n+1.  Cyclic groups only.
    """
    G = x.action.group
    if G.cyclic_generator is None:
        raise ConfigError("exhaustive lift search needs a cyclic group")
    if action_up.n != x.action.n + 1:
        raise ConfigError("action_up must live one nilpotency level up")
    ctx = x.action.ctx
    n = x.action.n
    coords = hall_coordinates(x.value(G.cyclic_generator))
    w = witt_number(x.action.r, n)
    mod = ctx.modulus
    base = from_hall_coordinates(
        coords + [np.zeros(w, dtype=np.int64)], x.action.r, n, ctx
    )
    basis = hall_basis(x.action.r, n, ctx)
    pow_tables = []
    for word in basis.words:
        series = magnus_embed(word, x.action.r, n, ctx)
        pow_tables.append([power(series, t) for t in range(mod)])
    for cand in np.ndindex(*([mod] * w)):
        phi_up = base
        for i, t in enumerate(cand):
            if t:
                phi_up = phi_up * pow_tables[i][t]
        try:
            TwistedCocycle.from_generator(action_up, phi_up)
            return True
        except NotTwistedCocycle:
            continue
    return False
