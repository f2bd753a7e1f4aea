"""Truncated noncommutative power series and free nilpotent group arithmetic.

A series lives in Z/ell^k << z_1 .. z_r >> modulo total degree > N.  Group
elements of the free nilpotent quotient F/[F]_{N+1} are identified with their
embedding images gamma_j -> 1 + z_j: series with constant term 1, multiplied
and inverted inside the truncation.  Degree-d coefficients form a dense numpy
vector indexed by the mixed-radix rank of the monomial word, which keeps the
product a cache-friendly double loop over degree pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .coeff import ModulusContext, Residue, binomial, integer_binomial
from .errors import BadGenerator, ContextMismatch, NotGroupLike, NotLie
from .linalg import solve_mod_prime_power

Monomial = tuple  # tuple of generator indices in 1..r; () is the constant


def monomial_rank(word, r: int) -> int:
    rank = 0
    for g in word:
        rank = rank * r + (g - 1)
    return rank


def rank_monomial(rank: int, degree: int, r: int) -> Monomial:
    digits = []
    for _ in range(degree):
        digits.append(rank % r + 1)
        rank //= r
    return tuple(reversed(digits))


def monomial_key(word) -> str:
    return "".join(str(g) for g in word)


def parse_monomial(s: str) -> Monomial:
    return tuple(int(ch) for ch in s)


class TruncatedSeries:
    """Degree <= N noncommutative power series over Z/ell^k in r variables."""

    __slots__ = ("r", "N", "ctx", "blocks")

    def __init__(self, r: int, N: int, ctx: ModulusContext, blocks):
        self.r = r
        self.N = N
        self.ctx = ctx
        self.blocks = blocks  # tuple of int64 arrays, blocks[d] has length r^d

    @classmethod
    def zero(cls, r, N, ctx):
        return cls(r, N, ctx, tuple(np.zeros(r**d, dtype=np.int64) for d in range(N + 1)))

    @classmethod
    def one(cls, r, N, ctx):
        s = cls.zero(r, N, ctx)
        s.blocks[0][0] = 1
        return s

    @classmethod
    def variable(cls, r, N, ctx, i):
        if not 1 <= i <= r:
            raise BadGenerator(f"generator {i} outside 1..{r}")
        s = cls.zero(r, N, ctx)
        if N >= 1:
            s.blocks[1][i - 1] = 1
        return s

    @classmethod
    def generator(cls, r, N, ctx, i):
        """Embedding image 1 + z_i of the i-th free generator."""
        s = cls.variable(r, N, ctx, i)
        s.blocks[0][0] = 1
        return s

    def copy(self) -> "TruncatedSeries":
        return TruncatedSeries(self.r, self.N, self.ctx, tuple(b.copy() for b in self.blocks))

    def _check(self, other: "TruncatedSeries"):
        if (self.r, self.N, self.ctx) != (other.r, other.N, other.ctx):
            raise ContextMismatch(
                f"(r={self.r}, N={self.N}, {self.ctx}) vs "
                f"(r={other.r}, N={other.N}, {other.ctx})"
            )

    @property
    def constant(self) -> int:
        return int(self.blocks[0][0])

    @property
    def is_group_like(self) -> bool:
        return self.constant == 1

    def coefficient(self, word) -> Residue:
        word = tuple(word)
        if len(word) > self.N:
            raise ValueError(f"monomial degree {len(word)} exceeds bound N={self.N}")
        if any(not 1 <= g <= self.r for g in word):
            raise BadGenerator(f"monomial {word} outside 1..{self.r}")
        return self.ctx.residue(int(self.blocks[len(word)][monomial_rank(word, self.r)]))

    def degree_slice(self, d: int) -> np.ndarray:
        return self.blocks[d].copy()

    def truncated(self, N2: int) -> "TruncatedSeries":
        """Same series re-truncated at bound N2 (pad with zeros if N2 > N)."""
        blocks = []
        for d in range(N2 + 1):
            if d <= self.N:
                blocks.append(self.blocks[d].copy())
            else:
                blocks.append(np.zeros(self.r**d, dtype=np.int64))
        return TruncatedSeries(self.r, N2, self.ctx, tuple(blocks))

    def __add__(self, other):
        self._check(other)
        mod = self.ctx.modulus
        return TruncatedSeries(
            self.r, self.N, self.ctx,
            tuple((a + b) % mod for a, b in zip(self.blocks, other.blocks)),
        )

    def __sub__(self, other):
        self._check(other)
        mod = self.ctx.modulus
        return TruncatedSeries(
            self.r, self.N, self.ctx,
            tuple((a - b) % mod for a, b in zip(self.blocks, other.blocks)),
        )

    def __neg__(self):
        mod = self.ctx.modulus
        return TruncatedSeries(self.r, self.N, self.ctx, tuple(-b % mod for b in self.blocks))

    def scale(self, c) -> "TruncatedSeries":
        c = int(c) % self.ctx.modulus
        mod = self.ctx.modulus
        return TruncatedSeries(self.r, self.N, self.ctx, tuple(b * c % mod for b in self.blocks))

    def __mul__(self, other):
        if isinstance(other, (int, Residue)):
            return self.scale(int(other))
        self._check(other)
        mod = self.ctx.modulus
        out = [np.zeros(self.r**d, dtype=np.int64) for d in range(self.N + 1)]
        for da in range(self.N + 1):
            a = self.blocks[da]
            if not a.any():
                continue
            for db in range(self.N + 1 - da):
                b = other.blocks[db]
                if not b.any():
                    continue
                out[da + db] = (out[da + db] + np.outer(a, b).ravel()) % mod
        return TruncatedSeries(self.r, self.N, self.ctx, tuple(out))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and (self.r, self.N, self.ctx) == (other.r, other.N, other.ctx)
            and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks))
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(b.any() for b in self.blocks)

    def serialize(self) -> dict:
        """Map from monomial strings to integer coefficients (nonzero only)."""
        out = {}
        for d in range(self.N + 1):
            blk = self.blocks[d]
            for rank in np.flatnonzero(blk):
                out[monomial_key(rank_monomial(int(rank), d, self.r))] = int(blk[rank])
        return out

    @classmethod
    def deserialize(cls, data: dict, r: int, N: int, ctx: ModulusContext):
        s = cls.zero(r, N, ctx)
        for key, val in data.items():
            word = parse_monomial(key)
            if len(word) > N:
                raise ValueError(f"monomial '{key}' exceeds degree bound {N}")
            if any(not 1 <= g <= r for g in word):
                raise BadGenerator(f"monomial '{key}' outside 1..{r}")
            s.blocks[len(word)][monomial_rank(word, r)] = int(val) % ctx.modulus
        return s

    def __repr__(self):
        terms = []
        for key, val in sorted(self.serialize().items(), key=lambda kv: (len(kv[0]), kv[0])):
            name = "z" + "*z".join(key) if key else "1"
            terms.append(name if val == 1 and key else f"{val}*{name}" if key else str(val))
            if len(terms) >= 8:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"<series {body} | r={self.r} N={self.N} mod {self.ctx.ell}^{self.ctx.k}>"


def multiply(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def power(a: TruncatedSeries, e) -> TruncatedSeries:
    """a^e for a group-like series.

    Integer exponents use exact integer binomials (valid at any ell, negative
    exponents included).  Residue exponents use the binomial series
    sum_m C(e, m) (a-1)^m, the continuous extension, which needs ell > N.
    """
    if not a.is_group_like:
        raise NotGroupLike("power requires constant term 1")
    u = a - TruncatedSeries.one(a.r, a.N, a.ctx)
    acc = TruncatedSeries.one(a.r, a.N, a.ctx)
    upow = TruncatedSeries.one(a.r, a.N, a.ctx)
    if isinstance(e, Residue):
        if e.ctx != a.ctx:
            raise ContextMismatch(f"{e.ctx} vs {a.ctx}")
        for m in range(1, a.N + 1):
            upow = upow * u
            if upow.is_zero():
                break
            acc = acc + upow.scale(binomial(e, m).value)
        return acc
    for m in range(1, a.N + 1):
        upow = upow * u
        if upow.is_zero():
            break
        acc = acc + upow.scale(integer_binomial(int(e), m))
    return acc


def invert_group(a: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a constant-term-1 series: the alternating geometric series."""
    return power(a, -1)


def conjugate(a: TruncatedSeries, by: TruncatedSeries) -> TruncatedSeries:
    """by^-1 * a * by."""
    return invert_group(by) * a * by


def group_commutator(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """[a, b] = a b a^-1 b^-1."""
    return a * b * invert_group(a) * invert_group(b)


@dataclass(frozen=True)
class FreeWord:
    """Word in the free group: sequence of (generator index, exponent).

    Exponents are nonzero integers or residues; adjacent letters may repeat a
    generator (no forced reduction).
    """

    letters: tuple

    def __post_init__(self):
        for g, e in self.letters:
            if g < 1:
                raise BadGenerator(f"generator index {g} < 1")
            if isinstance(e, int) and e == 0:
                raise ValueError("zero exponent in word letter")

    @classmethod
    def from_string(cls, text: str) -> "FreeWord":
        """Parse a signed generator list such as '1 2 -1 -2'."""
        letters = []
        for tok in text.split():
            g = int(tok)
            if g == 0:
                raise BadGenerator("generator index 0 in word")
            letters.append((abs(g), 1 if g > 0 else -1))
        return cls(tuple(letters))

    @classmethod
    def generator(cls, i: int, e=1) -> "FreeWord":
        return cls(((i, e),))

    @classmethod
    def identity(cls) -> "FreeWord":
        return cls(())

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)))

    @staticmethod
    def commutator(a: "FreeWord", b: "FreeWord") -> "FreeWord":
        return a * b * a.inverse() * b.inverse()

    @property
    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=0)


def magnus_embed(w: FreeWord, r: int, N: int, ctx: ModulusContext) -> TruncatedSeries:
    """Image of a free word under gamma_j -> 1 + z_j, truncated at degree N."""
    if w.max_generator > r:
        raise BadGenerator(f"word uses generator {w.max_generator} > r = {r}")
    acc = TruncatedSeries.one(r, N, ctx)
    for g, e in w.letters:
        acc = acc * power(TruncatedSeries.generator(r, N, ctx, g), e)
    return acc


def magnus_coefficient(a: TruncatedSeries, J) -> Residue:
    """Coefficient of z_{J(1)} ... z_{J(n)} in a."""
    return a.coefficient(tuple(J))


def substitute(a: TruncatedSeries, images) -> TruncatedSeries:
    """Unital ring endomorphism sending z_i -> images[i] - 1.

    Each image must have constant term 1 (otherwise powers would not gain
    degree and the truncation would be meaningless).  On embedded words this
    is word substitution: substitute(embed(w), images) = embed(w with
    gamma_i replaced by images[i]).
    """
    if len(images) != a.r:
        raise ContextMismatch(f"need {a.r} images, got {len(images)}")
    for im in images:
        a._check(im)
        if not im.is_group_like:
            raise NotGroupLike("substitution images must have constant term 1")
    one = TruncatedSeries.one(a.r, a.N, a.ctx)
    us = [im - one for im in images]
    out = TruncatedSeries.one(a.r, a.N, a.ctx).scale(a.constant)
    # walk monomials degree by degree, keeping products for the previous level
    prev = [one]
    for d in range(1, a.N + 1):
        blk = a.blocks[d]
        level = []
        for rank in range(a.r**d):
            cur = prev[rank // a.r] * us[rank % a.r]
            if d < a.N:
                level.append(cur)
            c = int(blk[rank])
            if c:
                out = out + cur.scale(c)
        prev = level
    return out


# ---------------------------------------------------------------------------
# Hall basis of basic commutators


def _mobius(n: int) -> int:
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def witt_number(r: int, n: int) -> int:
    """Rank of the degree-n piece of the free Lie ring on r generators."""
    total = 0
    d = 1
    while d <= n:
        if n % d == 0:
            total += _mobius(d) * r ** (n // d)
        d += 1
    return total // n


def _tree_degree(tree) -> int:
    if isinstance(tree, int):
        return 1
    return _tree_degree(tree[0]) + _tree_degree(tree[1])


def _tree_tail(tree):
    # comparison key of the Hall condition: the smaller factor of a
    # weight-2 bracket sits on the left, deeper brackets keep it on the right
    a, b = tree
    if isinstance(a, int) and isinstance(b, int):
        return a
    return b


@lru_cache(maxsize=None)
def _hall_levels(r: int, n: int):
    """Basic commutator trees by degree 1..n.

    Trees are generators (ints) or pairs (a, b).  Degree 2 takes [g_i, g_j]
    with i < j; degree >= 3 takes [a, b] with a composite, a after b in the
    global order, and tail(a) not after b.  The counts match the Witt numbers
    and the expansions form an integral basis of the free Lie ring.
    """
    levels = [tuple(range(1, r + 1))]
    index = {g: i for i, g in enumerate(levels[0])}
    counter = r
    for d in range(2, n + 1):
        cands = []
        if d == 2:
            for i in range(1, r + 1):
                for j in range(i + 1, r + 1):
                    cands.append((i, j))
        else:
            for p in range(2, d):
                for a in levels[p - 1]:
                    for b in levels[d - p - 1]:
                        if index[a] > index[b] and index[_tree_tail(a)] <= index[b]:
                            cands.append((a, b))
        cands.sort(key=lambda t: (index.get(t[0], -1), index.get(t[1], -1)))
        for t in cands:
            index[t] = counter
            counter += 1
        levels.append(tuple(cands))
    return tuple(levels)


@lru_cache(maxsize=None)
def _expansion_int(r: int, tree):
    """Degree-homogeneous expansion of a basic commutator over Z."""
    if isinstance(tree, int):
        vec = np.zeros(r, dtype=np.int64)
        vec[tree - 1] = 1
        return vec
    a, b = tree
    ea, eb = _expansion_int(r, a), _expansion_int(r, b)
    p, q = _tree_degree(a), _tree_degree(b)
    out = np.outer(ea, eb).ravel().copy()  # a-then-b ranks: ra * r^q + rb
    # b-then-a monomial has rank rb * r^p + ra
    idx = (np.arange(r**q)[:, None] * r**p + np.arange(r**p)[None, :]).ravel()
    ba = np.zeros_like(out)
    np.add.at(ba, idx, np.outer(eb, ea).ravel())
    return out - ba


def tree_word(tree) -> FreeWord:
    """Iterated group commutator realizing a basic commutator."""
    if isinstance(tree, int):
        return FreeWord.generator(tree)
    return FreeWord.commutator(tree_word(tree[0]), tree_word(tree[1]))


def tree_label(tree) -> str:
    if isinstance(tree, int):
        return f"g{tree}"
    return f"[{tree_label(tree[0])},{tree_label(tree[1])}]"


@dataclass(frozen=True)
class LieBasis:
    """Basic commutators of one degree with their homogeneous expansions."""

    r: int
    n: int
    ctx: ModulusContext
    trees: tuple
    matrix: np.ndarray  # shape (len(trees), r^n), rows are expansions mod ell^k

    def __len__(self):
        return len(self.trees)

    @property
    def words(self):
        return tuple(tree_word(t) for t in self.trees)

    @property
    def labels(self):
        return tuple(tree_label(t) for t in self.trees)


def hall_basis(r: int, n: int, ctx: ModulusContext) -> LieBasis:
    trees = _hall_levels(r, n)[n - 1]
    if trees:
        matrix = np.stack([_expansion_int(r, t) % ctx.modulus for t in trees])
    else:
        matrix = np.zeros((0, r**n), dtype=np.int64)
    return LieBasis(r, n, ctx, trees, matrix)


def lie_decompose(slice_vec, basis: LieBasis) -> np.ndarray:
    """Coordinates of a homogeneous degree-n slice in the basic-commutator
    expansions, over Z/ell^k.  Raises NotLie outside their span."""
    vec = np.asarray(slice_vec, dtype=np.int64) % basis.ctx.modulus
    if vec.shape != (basis.r**basis.n,):
        raise ValueError(f"slice has wrong length {vec.shape} for degree {basis.n}")
    if len(basis) == 0:
        if vec.any():
            raise NotLie("nonzero slice in a degree with empty Lie basis")
        return np.zeros(0, dtype=np.int64)
    sol = solve_mod_prime_power(basis.matrix.T, vec, basis.ctx.ell, basis.ctx.k)
    if sol is None:
        raise NotLie("slice outside the span of the basic-commutator expansions")
    return sol


@lru_cache(maxsize=None)
def _basis_group_series(r: int, d: int, N: int, ctx: ModulusContext):
    """Embedded basic-commutator words of degree d, truncated at N."""
    trees = _hall_levels(r, max(d, 1))[d - 1]
    return tuple(magnus_embed(tree_word(t), r, N, ctx) for t in trees)


def hall_coordinates(a: TruncatedSeries):
    """Exponent vectors of a group-like series in the collected normal form

        prod_d prod_i  c_{d,i}-th power of the i-th degree-d basic commutator

    with factors ordered by degree, then basis position.  One vector per
    degree 1..N.  Raises NotGroupLike when the series is not the image of a
    group element of F/[F]_{N+1}.
    """
    if not a.is_group_like:
        raise NotGroupLike("constant term must be 1")
    coords = []
    residual = a
    for d in range(1, a.N + 1):
        basis = hall_basis(a.r, d, a.ctx)
        try:
            c = lie_decompose(residual.blocks[d], basis)
        except NotLie as exc:
            raise NotGroupLike(
                f"degree-{d} slice is not a Lie element; series is not a group image"
            ) from exc
        coords.append(c)
        if c.any():
            prefix = TruncatedSeries.one(a.r, a.N, a.ctx)
            for i, series in enumerate(_basis_group_series(a.r, d, a.N, a.ctx)):
                if c[i]:
                    prefix = prefix * power(series, int(c[i]))
            residual = invert_group(prefix) * residual
    if not residual == TruncatedSeries.one(a.r, a.N, a.ctx):
        raise NotGroupLike("residual after collection is not 1")
    return coords


def from_hall_coordinates(coords, r: int, N: int, ctx: ModulusContext) -> TruncatedSeries:
    """Inverse of hall_coordinates: the product of basic-commutator powers."""
    out = TruncatedSeries.one(r, N, ctx)
    for d, c in enumerate(coords, start=1):
        if d > N:
            raise ValueError("more coordinate blocks than the degree bound")
        series = _basis_group_series(r, d, N, ctx)
        if len(c) != len(series):
            raise ValueError(f"degree-{d} block has wrong length")
        for i, s in enumerate(series):
            if int(c[i]) % ctx.modulus:
                out = out * power(s, int(c[i]))
    return out
