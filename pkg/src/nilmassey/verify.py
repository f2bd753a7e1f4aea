"""Verification suites behind the CLI and the acceptance tests.

Each suite returns a list of CheckResult; a suite passes when every check
does.  Randomized checks take an explicit seed.  The proposition suites run
exhaustive enumerations at desk scale and compare three independently
computed verdicts per cocycle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

import numpy as np

from ._parallel import pmap
from .actions import (
    CharacterAction,
    enumerate_monodromy_cocycles,
    monodromy_from_conjugation,
)
from .coeff import ModulusContext
from .cohomology import (
    Cochain,
    GModule,
    coboundary,
    cup,
    delta_n,
    enumerate_twisted_cocycles,
    has_lift,
    is_coboundary,
)
from .groups import Character, FiniteGroup
from .linalg import kernel_is_trivial
from .magnus import FreeWord, TruncatedSeries, hall_basis, magnus_embed
from .massey import canonical_system, validate, vanishes
from .obstruction import single_two_indices
from .unipotent import UnipotentMatrix, act, build_A, in_U_i0j0, phi_J


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


PROP_INSTANCES = ((3, 2, 7, 1), (5, 2, 7, 1), (3, 3, 7, 1))


def characters_for(G: FiniteGroup, ctx: ModulusContext):
    """The trivial character plus (when one exists) the smallest nontrivial
    character of the cyclic group into the units of Z/ell^k."""
    out = [("trivial", Character.trivial(G, ctx))]
    if G.cyclic_generator is not None:
        mod = ctx.modulus
        for u in range(2, mod):
            if u % ctx.ell and pow(u, G.order, mod) == 1:
                out.append((f"chi({u})", Character.from_generator_value(G, ctx, u)))
                break
    return out


# ---------------------------------------------------------------------------
# aldef


def suite_aldef(ells=(5, 7, 11), kmax=3, lmax=6, nmax=50):
    results = []
    for ell in ells:
        for k in range(1, kmax + 1):
            ctx = ModulusContext(ell, k)
            bad = None
            checked = 0
            for l in range(1, min(lmax, ell - 1) + 1):
                A = build_A(l, ctx)
                P = UnipotentMatrix.identity(l, ctx)
                for N in range(1, nmax + 1):
                    P = P * A
                    for i in range(1, l + 1):
                        for j in range(1, l + 2 - i):
                            expected = pow(N, j, ctx.modulus) * A.entry(i, i + j).value
                            if P.entry(i, i + j).value != expected % ctx.modulus:
                                bad = (l, N, i, j)
                                break
                            checked += 1
                        if bad:
                            break
                    if bad:
                        break
                if bad:
                    break
            results.append(
                CheckResult(
                    f"aldef[ell={ell}, k={k}]",
                    bad is None,
                    f"{checked} entries" if bad is None else f"first failure at {bad}",
                )
            )
    return results


# ---------------------------------------------------------------------------
# magnus


def _random_word(rng, r, max_len=6, max_exp=3):
    length = rng.randint(1, max_len)
    letters = []
    for _ in range(length):
        e = 0
        while e == 0:
            e = rng.randint(-max_exp, max_exp)
        letters.append((rng.randint(1, r), e))
    return FreeWord(tuple(letters))


def _random_commutator(rng, r, depth):
    if depth == 1:
        return FreeWord.generator(rng.randint(1, r))
    split = rng.randint(1, depth - 1)
    return FreeWord.commutator(
        _random_commutator(rng, r, split), _random_commutator(rng, r, depth - split)
    )


def suite_magnus(seed=0, pairs=10_000, ell=7, k=1):
    rng = random.Random(seed)
    ctx = ModulusContext(ell, k)
    results = []

    bad = None
    for depth in range(2, 6):
        for _ in range(40):
            w = _random_commutator(rng, 2, depth)
            if magnus_embed(w, 2, depth - 1, ctx) != TruncatedSeries.one(2, depth - 1, ctx):
                bad = (depth, w)
                break
        if bad:
            break
    results.append(
        CheckResult(
            "magnus.mu-vanishing-on-deep-commutators",
            bad is None,
            "depths 2..5, 40 samples each" if bad is None else f"failed at {bad}",
        )
    )

    bad = None
    for pell in (5, 7):
        for pk in (1, 3):
            pctx = ModulusContext(pell, pk)
            for n in range(1, 5):
                basis = hall_basis(2, n, pctx)
                if not kernel_is_trivial(basis.matrix.T, pell, pk):
                    bad = (pell, pk, n)
    results.append(
        CheckResult(
            "magnus.hall-span-injectivity",
            bad is None,
            "n <= 4, ell in {5,7}, k in {1,3}" if bad is None else f"failed at {bad}",
        )
    )

    bad = None
    for i in range(pairs):
        w1 = _random_word(rng, 2)
        w2 = _random_word(rng, 2)
        lhs = magnus_embed(w1 * w2, 2, 4, ctx)
        rhs = magnus_embed(w1, 2, 4, ctx) * magnus_embed(w2, 2, 4, ctx)
        if lhs != rhs:
            bad = (i, w1, w2)
            break
    results.append(
        CheckResult(
            "magnus.embed-multiplicativity",
            bad is None,
            f"{pairs} random pairs" if bad is None else f"failed at {bad}",
        )
    )
    return results


# ---------------------------------------------------------------------------
# cochain identities


def _unit_of_order_dividing(rng, ctx, m):
    mod = ctx.modulus
    cands = [u for u in range(1, mod) if u % ctx.ell and pow(u, m, mod) == 1]
    return rng.choice(cands)


def _det3(M, mod):
    M = [[int(v) for v in row] for row in M]
    size = len(M)
    if size == 1:
        return M[0][0] % mod
    if size == 2:
        return (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % mod
    det = 0
    for j in range(3):
        minor = (
            M[1][(j + 1) % 3] * M[2][(j + 2) % 3]
            - M[1][(j + 2) % 3] * M[2][(j + 1) % 3]
        )
        det += M[0][j] * minor
    return det % mod


def _random_module(rng, G, ctx, max_rank=3):
    """Random G-module: diagonal units of order dividing |G|, conjugated by a
    random invertible matrix."""
    rank = rng.randint(1, max_rank)
    mod = ctx.modulus
    diag = np.diag([_unit_of_order_dividing(rng, ctx, G.order) for _ in range(rank)])
    while True:
        S = np.array([[rng.randrange(mod) for _ in range(rank)] for _ in range(rank)],
                     dtype=np.int64)
        if _det3(S, mod) % ctx.ell:
            break
    Sinv = np.zeros_like(S)
    from .linalg import solve_mod_prime_power

    for i in range(rank):
        e = np.zeros(rank, dtype=np.int64)
        e[i] = 1
        Sinv[:, i] = solve_mod_prime_power(S, e, ctx.ell, ctx.k)
    gen_mat = (S @ (diag % mod) % mod) @ Sinv % mod
    mats = np.zeros((G.order, rank, rank), dtype=np.int64)
    g = G.identity
    cur = np.eye(rank, dtype=np.int64)
    for _ in range(G.order):
        mats[g] = cur
        cur = cur @ gen_mat % mod
        g = G.mult(g, G.cyclic_generator)
    return GModule(G, ctx, mats)


def _random_cochain(rng, module, degree):
    m = module.group.order
    mod = module.ctx.modulus
    vals = np.array(
        [rng.randrange(mod) for _ in range(m**degree * module.rank)], dtype=np.int64
    ).reshape((m,) * degree + (module.rank,))
    return Cochain(module, degree, vals)


def suite_cochain(seed=0, cases=1000):
    rng = random.Random(seed)
    results = []

    bad = None
    for i in range(cases):
        m = rng.randint(2, 12)
        ell = rng.choice([5, 7, 11])
        k = rng.randint(1, 2)
        ctx = ModulusContext(ell, k)
        G = FiniteGroup.cyclic(m)
        module = _random_module(rng, G, ctx)
        c = _random_cochain(rng, module, rng.randint(0, 2))
        if not coboundary(coboundary(c)).is_zero():
            bad = (i, m, ell, k)
            break
    results.append(
        CheckResult(
            "cochain.DD-zero",
            bad is None,
            f"{cases} random cochains" if bad is None else f"failed at {bad}",
        )
    )

    bad = None
    for i in range(cases):
        m = rng.randint(2, 12)
        ell = rng.choice([5, 7, 11])
        ctx = ModulusContext(ell, rng.randint(1, 2))
        G = FiniteGroup.cyclic(m)
        chi = Character.from_generator_value(G, ctx, _unit_of_order_dividing(rng, ctx, m))
        a, b = rng.randint(-2, 3), rng.randint(-2, 3)
        p, q = rng.choice([(0, 1), (1, 1), (1, 2), (2, 1), (0, 2)])
        c = _random_cochain(rng, GModule.character_module(chi, a), p)
        d = _random_cochain(rng, GModule.character_module(chi, b), q)
        lhs = coboundary(cup(c, d))
        rhs = cup(coboundary(c), d)
        sign_term = cup(c, coboundary(d))
        rhs = rhs + (sign_term if p % 2 == 0 else -sign_term)
        if lhs != rhs:
            bad = (i, m, ell, p, q)
            break
    results.append(
        CheckResult(
            "cochain.leibniz",
            bad is None,
            f"{cases} random cup pairs" if bad is None else f"failed at {bad}",
        )
    )

    bad = None
    for i in range(cases // 5):
        m = rng.randint(2, 9)
        ctx = ModulusContext(rng.choice([5, 7]), 1)
        G = FiniteGroup.cyclic(m)
        chi = Character.from_generator_value(G, ctx, _unit_of_order_dividing(rng, ctx, m))
        c = _random_cochain(rng, GModule.character_module(chi, 1), 1)
        d = _random_cochain(rng, GModule.character_module(chi, 1), 1)
        if coboundary(c).is_zero() and coboundary(d).is_zero():
            if not coboundary(cup(c, d)).is_zero():
                bad = i
                break
    results.append(
        CheckResult("cochain.cup-of-cocycles-is-cocycle", bad is None,
                    "" if bad is None else f"failed at case {bad}")
    )
    return results


# ---------------------------------------------------------------------------
# equivariance and unipotent structure


def _random_group_series(rng, r, N, ctx):
    return magnus_embed(_random_word(rng, r, max_len=5, max_exp=2), r, N, ctx)


def suite_equivariance(seed=0, cases=60):
    rng = random.Random(seed)
    results = []

    bad = None
    for i in range(cases):
        ell = rng.choice([5, 7, 11])
        ctx = ModulusContext(ell, rng.randint(1, 2))
        n = rng.randint(2, min(4, ell - 1))
        m = rng.randint(2, 6)
        G = FiniteGroup.cyclic(m)
        chi = Character.from_generator_value(G, ctx, _unit_of_order_dividing(rng, ctx, m))
        r = 2
        J = tuple(rng.randint(1, r) for _ in range(n))
        g = rng.randrange(m)
        action = CharacterAction(chi, r, n)
        w = _random_group_series(rng, r, n, ctx)
        lhs = phi_J(action.apply(g, w), J, r, ctx)
        rhs = act(g, phi_J(w, J, r, ctx), chi)
        if lhs != rhs:
            bad = (i, "character", ell, n, J)
            break
        gen = FreeWord.generator(rng.randint(1, r))
        word_pow = FreeWord(((gen.letters[0][0], chi.value(g)),))
        if phi_J(word_pow, J, r, ctx) != act(g, phi_J(gen, J, r, ctx), chi):
            bad = (i, "character-word", ell, n, J)
            break
    results.append(CheckResult("equivariance.character", bad is None,
                               "" if bad is None else f"failed at {bad}"))

    bad = None
    for i in range(cases // 2):
        ctx = ModulusContext(7, 1)
        n = rng.randint(2, 4)
        G = FiniteGroup.cyclic(3)
        chi = Character.from_generator_value(G, ctx, 2)
        w = _random_commutator_series(rng, n, ctx)
        action = monodromy_from_conjugation(chi, w, n)
        J = rng.choice(single_two_indices(n))
        g = rng.randrange(3)
        gamma2 = TruncatedSeries.generator(2, n, ctx, 2)
        lhs = phi_J(action.apply(g, gamma2), J, 2, ctx)
        mid = phi_J(gamma2, J, 2, ctx).power(chi.value(g))
        rhs = act(g, phi_J(gamma2, J, 2, ctx), chi)
        if not (lhs == mid == rhs):
            bad = (i, n, J, g)
            break
    results.append(CheckResult("equivariance.monodromy-single-2", bad is None,
                               "" if bad is None else f"failed at {bad}"))

    bad = None
    for i in range(cases):
        ctx = ModulusContext(rng.choice([5, 7]), rng.randint(1, 2))
        n = rng.randint(2, 4)
        size = n + 1
        i0 = rng.randint(1, size - 1)
        j0 = rng.randint(i0 + 1, size)
        mod = ctx.modulus
        entries = {}
        for a in range(1, i0 + 1):
            for b in range(max(j0, a + 1), size + 1):
                entries[(a, b)] = rng.randrange(mod)
        M1 = UnipotentMatrix.from_entries(n, ctx, entries)
        entries2 = {key: rng.randrange(mod) for key in entries}
        M2 = UnipotentMatrix.from_entries(n, ctx, entries2)
        Z = UnipotentMatrix.from_entries(
            n, ctx,
            {(a, b): rng.randrange(mod) for a in range(1, size) for b in range(a + 1, size + 1)},
        )
        conj = Z * M1 * Z.inverse()
        if not in_U_i0j0(conj, i0, j0):
            bad = (i, "normal", i0, j0)
            break
        if i0 < j0 and M1.commutator(M2) != UnipotentMatrix.identity(n, ctx):
            bad = (i, "commutative", i0, j0)
            break
    results.append(CheckResult("equivariance.U_i0j0-normal-commutative", bad is None,
                               "" if bad is None else f"failed at {bad}"))

    bad = None
    for i in range(cases):
        ctx = ModulusContext(7, 1)
        n = rng.randint(2, 4)
        J = rng.choice(single_two_indices(n))
        depth = rng.randint(2, n)
        w = _random_commutator(rng, 2, depth)
        Mw = phi_J(w, J, 2, ctx)
        M2 = phi_J(FreeWord.generator(2), J, 2, ctx)
        if M2 * Mw != Mw * M2:
            bad = (i, n, J, w)
            break
    results.append(CheckResult("equivariance.phi-gamma2-commutes", bad is None,
                               "" if bad is None else f"failed at {bad}"))

    bad = None
    for i in range(cases):
        ctx = ModulusContext(rng.choice([5, 7]), rng.randint(1, 2))
        n = rng.randint(2, 4)
        r = 2
        J = tuple(rng.randint(1, r) for _ in range(n))
        basis = hall_basis(r, n, ctx)
        for tree_idx, word in enumerate(basis.words):
            series = magnus_embed(word, r, n, ctx)
            mu = series.coefficient(J)
            top = phi_J(word, J, r, ctx).entry(1, n + 1)
            if mu != top:
                bad = (i, n, J, tree_idx)
                break
        if bad:
            break
    results.append(CheckResult("equivariance.magnus-vs-matrix-top-corner", bad is None,
                               "" if bad is None else f"failed at {bad}"))
    return results


def _random_commutator_series(rng, n, ctx):
    """Random element of the commutator subgroup, as a series at bound n."""
    w = FreeWord.identity()
    for _ in range(rng.randint(1, 3)):
        w = w * _random_commutator(rng, 2, rng.randint(2, n))
    return magnus_embed(w, 2, n, ctx)


# ---------------------------------------------------------------------------
# proposition suites


def all_indices(r: int, n: int):
    return [tuple(t) for t in product(range(1, r + 1), repeat=n)]


def suite_prop24(instances=PROP_INSTANCES):
    results = []
    for (m, n, ell, k) in instances:
        ctx = ModulusContext(ell, k)
        G = FiniteGroup.cyclic(m)
        for label, chi in characters_for(G, ctx):
            action = CharacterAction(chi, 2, n)
            action_up = CharacterAction(chi, 2, n + 1)
            xs = enumerate_twisted_cocycles(action)
            Js = all_indices(2, n)

            def verdicts(x):
                d_ok = is_coboundary(delta_n(x))[0]
                m_ok = all(vanishes(canonical_system(x, J)) for J in Js)
                l_ok = has_lift(x, action_up)
                return d_ok, m_ok, l_ok

            bad = None
            liftable = 0
            for x, (d_ok, m_ok, l_ok) in zip(xs, pmap(verdicts, xs)):
                if not d_ok == m_ok == l_ok:
                    bad = (d_ok, m_ok, l_ok)
                    break
                liftable += d_ok
            results.append(
                CheckResult(
                    f"prop24[{G.name}, n={n}, mod={ell}^{k}, {label}]",
                    bad is None,
                    f"{len(xs)} cocycles, {liftable} liftable"
                    if bad is None
                    else f"verdicts disagree: delta/massey/lift = {bad}",
                )
            )
    return results


def suite_prop25(instances=PROP_INSTANCES):
    results = []
    for (m, n, ell, k) in instances:
        ctx = ModulusContext(ell, k)
        G = FiniteGroup.cyclic(m)
        one = TruncatedSeries.one(2, n, ctx)
        for label, chi in characters_for(G, ctx):
            actions = enumerate_monodromy_cocycles(chi, n)
            nonzero = sum(
                1 for a in actions if any(a.f[g] != one for g in G)
            )
            bad = None
            checked = 0
            for a in actions:
                xs = enumerate_twisted_cocycles(a)
                for x in xs:
                    if not is_coboundary(delta_n(x))[0]:
                        continue
                    checked += 1
                    for J in single_two_indices(n):
                        system = canonical_system(x, J)
                        if not validate(system):
                            bad = ("invalid-system", J)
                            break
                        if not vanishes(system):
                            bad = ("massey-nonvanishing", J)
                            break
                    if bad:
                        break
                if bad:
                    break
            results.append(
                CheckResult(
                    f"prop25[{G.name}, n={n}, mod={ell}^{k}, {label}]",
                    bad is None,
                    f"{len(actions)} valid f ({nonzero} nonzero), "
                    f"{checked} unobstructed cocycles checked"
                    if bad is None
                    else f"counterexample: {bad}",
                )
            )
    return results


SUITES = {
    "aldef": suite_aldef,
    "magnus": suite_magnus,
    "cochain": suite_cochain,
    "equivariance": suite_equivariance,
    "prop24": suite_prop24,
    "prop25": suite_prop25,
}
