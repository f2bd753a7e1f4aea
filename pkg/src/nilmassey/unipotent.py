"""Unipotent upper-triangular matrices over Z/ell^k with a character twist.

U_{n+1} is the group of (n+1)x(n+1) upper-triangular matrices with 1 on the
diagonal.  A character chi twists it by scaling the (i, j) entry with
chi(g)^(j-i); the homomorphisms phi_J send free-group generators to matrices
whose superdiagonal blocks are inverse factorials, and realize Magnus data in
matrix form.
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial

import numpy as np

from .coeff import ModulusContext, Residue, binomial, integer_binomial, invert
from .errors import BadGenerator, ContextMismatch, NotGroupLike
from .groups import Character
from .magnus import FreeWord, TruncatedSeries


def _matmul_mod(A: np.ndarray, B: np.ndarray, mod: int) -> np.ndarray:
    out = np.zeros_like(A)
    for p in range(A.shape[1]):
        out = (out + A[:, p : p + 1] * B[p : p + 1, :]) % mod
    return out


class UnipotentMatrix:
    """Element of U_{n+1}: unit diagonal, zero below it."""

    __slots__ = ("n", "ctx", "mat")

    def __init__(self, n: int, ctx: ModulusContext, mat):
        mat = np.array(mat, dtype=np.int64) % ctx.modulus
        if mat.shape != (n + 1, n + 1):
            raise ContextMismatch(f"matrix shape {mat.shape} does not fit n = {n}")
        if not (np.diag(mat) == 1).all() or np.tril(mat, -1).any():
            raise NotGroupLike("matrix is not unipotent upper-triangular")
        self.n = n
        self.ctx = ctx
        self.mat = mat

    @classmethod
    def identity(cls, n: int, ctx: ModulusContext) -> "UnipotentMatrix":
        return cls(n, ctx, np.eye(n + 1, dtype=np.int64))

    @classmethod
    def from_entries(cls, n: int, ctx: ModulusContext, entries: dict) -> "UnipotentMatrix":
        """Build from 1-indexed {(i, j): value} strictly-upper entries."""
        mat = np.eye(n + 1, dtype=np.int64)
        for (i, j), v in entries.items():
            if not 1 <= i < j <= n + 1:
                raise ValueError(f"entry ({i}, {j}) outside the strict upper triangle")
            mat[i - 1, j - 1] = int(v) % ctx.modulus
        return cls(n, ctx, mat)

    def entry(self, i: int, j: int) -> Residue:
        """1-indexed a_{ij} reader."""
        return self.ctx.residue(int(self.mat[i - 1, j - 1]))

    def _check(self, other: "UnipotentMatrix"):
        if (self.n, self.ctx) != (other.n, other.ctx):
            raise ContextMismatch(f"(n={self.n}, {self.ctx}) vs (n={other.n}, {other.ctx})")

    def __mul__(self, other: "UnipotentMatrix") -> "UnipotentMatrix":
        self._check(other)
        return UnipotentMatrix(self.n, self.ctx, _matmul_mod(self.mat, other.mat, self.ctx.modulus))

    def inverse(self) -> "UnipotentMatrix":
        return self.power(-1)

    def power(self, e) -> "UnipotentMatrix":
        """M^e = sum_m C(e, m) (M - 1)^m; exact for integer e of either sign,
        and the continuous extension for residue exponents."""
        mod = self.ctx.modulus
        U = (self.mat - np.eye(self.n + 1, dtype=np.int64)) % mod
        acc = np.eye(self.n + 1, dtype=np.int64)
        P = np.eye(self.n + 1, dtype=np.int64)
        for m in range(1, self.n + 1):
            P = _matmul_mod(P, U, mod)
            if not P.any():
                break
            if isinstance(e, Residue):
                if e.ctx != self.ctx:
                    raise ContextMismatch(f"{e.ctx} vs {self.ctx}")
                coef = binomial(e, m).value
            else:
                coef = integer_binomial(int(e), m) % mod
            acc = (acc + coef * P) % mod
        return UnipotentMatrix(self.n, self.ctx, acc)

    def commutator(self, other: "UnipotentMatrix") -> "UnipotentMatrix":
        return self * other * self.inverse() * other.inverse()

    def __eq__(self, other):
        return (
            isinstance(other, UnipotentMatrix)
            and (self.n, self.ctx) == (other.n, other.ctx)
            and np.array_equal(self.mat, other.mat)
        )

    __hash__ = None

    def __repr__(self):
        return f"<U_{self.n + 1} matrix mod {self.ctx.ell}^{self.ctx.k}\n{self.mat}>"


def act(g: int, M: UnipotentMatrix, chi: Character) -> UnipotentMatrix:
    """Character twist: the (i, j) entry is scaled by chi(g)^(j-i)."""
    chi.check_context(M.ctx)
    mod = M.ctx.modulus
    size = M.n + 1
    powers = np.ones(size, dtype=np.int64)
    v = chi.value_int(g)
    for d in range(1, size):
        powers[d] = powers[d - 1] * v % mod
    idx = np.arange(size)
    exps = np.clip(idx[None, :] - idx[:, None], 0, size - 1)
    return UnipotentMatrix(M.n, M.ctx, M.mat * powers[exps] % mod)


def build_A(l: int, ctx: ModulusContext) -> UnipotentMatrix:
    """The (l+1)x(l+1) matrix with 1/j! on the j-th superdiagonal.

    Its N-th power scales the j-th superdiagonal by exactly N^j, which is what
    lets a character act on generator images entry by entry.
    """
    ctx.require_unit_factorials(l)
    mat = np.eye(l + 1, dtype=np.int64)
    inv_fact = [1]
    for j in range(1, l + 1):
        inv_fact.append(invert(ctx.residue(factorial(j))).value)
    for i in range(l + 1):
        for j in range(i + 1, l + 1):
            mat[i, j] = inv_fact[j - i]
    return UnipotentMatrix(l, ctx, mat)


@lru_cache(maxsize=None)
def phi_generator_image(k: int, J, r: int, ctx: ModulusContext) -> UnipotentMatrix:
    """Matrix image of the k-th generator: a_{i, i+l} = 1/l! whenever the
    window J(i), ..., J(i+l-1) is constantly k, and 0 elsewhere."""
    J = tuple(J)
    n = len(J)
    if any(not 1 <= v <= r for v in J):
        raise BadGenerator(f"monomial index {J} outside 1..{r}")
    if not 1 <= k <= r:
        raise BadGenerator(f"generator {k} outside 1..{r}")
    ctx.require_unit_factorials(n)
    mat = np.eye(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        for l in range(1, n + 2 - i):
            if all(J[v - 1] == k for v in range(i, i + l)):
                mat[i - 1, i + l - 1] = invert(ctx.residue(factorial(l))).value
    return UnipotentMatrix(n, ctx, mat)


def phi_J(w, J, r: int, ctx: ModulusContext) -> UnipotentMatrix:
    """Homomorphism to U_{n+1} attached to a degree-n monomial index J.

    Accepts a FreeWord (multiplicative on generator images, exact) or a
    group-like TruncatedSeries (linear extension over monomial coefficients,
    the path used when cocycle values are stored as series).  The two agree
    on embedded words; degree > n data cannot reach any entry and is ignored.
    """
    J = tuple(J)
    n = len(J)
    images = [phi_generator_image(k, J, r, ctx) for k in range(1, r + 1)]
    if isinstance(w, FreeWord):
        if w.max_generator > r:
            raise BadGenerator(f"word uses generator {w.max_generator} > r = {r}")
        acc = UnipotentMatrix.identity(n, ctx)
        for g, e in w.letters:
            acc = acc * images[g - 1].power(e)
        return acc
    if isinstance(w, TruncatedSeries):
        if w.r != r or w.ctx != ctx:
            raise ContextMismatch("series context does not match phi_J call")
        if not w.is_group_like:
            raise NotGroupLike("phi_J extends over series with constant term 1")
        mod = ctx.modulus
        nil = [(im.mat - np.eye(n + 1, dtype=np.int64)) % mod for im in images]
        acc = np.eye(n + 1, dtype=np.int64)
        prev = [np.eye(n + 1, dtype=np.int64)]
        for d in range(1, min(w.N, n) + 1):
            blk = w.blocks[d]
            level = []
            for rank in range(r**d):
                cur = _matmul_mod(prev[rank // r], nil[rank % r], mod)
                if d < min(w.N, n):
                    level.append(cur)
                c = int(blk[rank])
                if c:
                    acc = (acc + c * cur) % mod
            prev = level
        return UnipotentMatrix(n, ctx, acc)
    raise TypeError(f"phi_J expects FreeWord or TruncatedSeries, got {type(w)}")


def in_U_i0j0(M: UnipotentMatrix, i0: int, j0: int) -> bool:
    """Membership in U_{i0,j0}: off-diagonal entries vanish unless
    i <= i0 and j >= j0."""
    if not 1 <= i0 < j0 <= M.n + 1:
        raise ValueError(f"need 1 <= i0 < j0 <= {M.n + 1}")
    for i in range(1, M.n + 2):
        for j in range(i + 1, M.n + 2):
            if (i > i0 or j < j0) and M.entry(i, j) != 0:
                return False
    return True
