"""Command-line front end.

Commands:
    verify <suite>            run an identity suite (aldef, magnus, cochain,
                              equivariance, prop24, prop25)
    obstruct --config <file>  run the section-obstruction pipeline on a JSON
                              configuration, print a JSON report
    expand --word <w> ...     Magnus-expand a signed generator word
    bench series-mul ...      micro-benchmark the series product

Exit codes: 0 pass/unobstructed, 1 fail/obstructed, 2 configuration error.
All structured output is JSON with sorted keys; monomials are digit strings
over generator indices, group elements are integers.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from ._parallel import pmap
from .actions import MonodromyAction, extend_cyclic_cocycle_to_monodromy
from .coeff import ModulusContext
from .cohomology import TwistedCocycle
from .errors import ConfigError, NilmasseyError, NotTwistedCocycle
from .groups import Character, FiniteGroup
from .magnus import FreeWord, TruncatedSeries, magnus_embed
from .massey import canonical_system, massey_value, validate
from .obstruction import single_two_indices
from .verify import SUITES


def _build_group(spec) -> FiniteGroup:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError("group spec needs a 'type'")
    if spec["type"] == "cyclic":
        return FiniteGroup.cyclic(int(spec["order"]))
    if spec["type"] == "table":
        return FiniteGroup(spec["table"])
    raise ConfigError(f"unknown group type {spec['type']!r}")


def _build_character(spec, G: FiniteGroup, ctx: ModulusContext) -> Character:
    if spec is None:
        return Character.trivial(G, ctx)
    if "generator_value" in spec:
        return Character.from_generator_value(G, ctx, int(spec["generator_value"]))
    if "values" in spec:
        return Character(G, ctx, spec["values"])
    raise ConfigError("character spec needs 'generator_value' or 'values'")


def _series_table(spec, G, r, N, ctx):
    out = {}
    for key, table in spec.items():
        g = int(key)
        if g not in range(G.order):
            raise ConfigError(f"series table key {key!r} is not a group element")
        out[g] = TruncatedSeries.deserialize(table, r, N, ctx)
    if set(out) != set(range(G.order)):
        raise ConfigError("series table must cover every group element")
    return out


def _build_action(config, G, chi, ctx, n) -> MonodromyAction:
    spec = config.get("f", {"type": "zero"})
    kind = spec.get("type", "zero")
    if kind == "zero":
        one = TruncatedSeries.one(2, n, ctx)
        return MonodromyAction(chi, {g: one for g in G}, n)
    if kind == "generator":
        phi = TruncatedSeries.deserialize(spec["series"], 2, n, ctx)
        action = extend_cyclic_cocycle_to_monodromy(chi, phi, n)
        if action is None:
            raise ConfigError("f generator series violates the closure condition")
        return action
    if kind == "table":
        return MonodromyAction(chi, _series_table(spec["series"], G, 2, n, ctx), n)
    raise ConfigError(f"unknown f spec type {kind!r}")


def _build_cocycle(config, action) -> TwistedCocycle:
    spec = config.get("x")
    if spec is None:
        raise ConfigError("config needs a cocycle spec 'x'")
    kind = spec.get("type", "generator")
    N = action.n - 1
    if kind == "generator":
        phi = TruncatedSeries.deserialize(spec["series"], 2, N, action.ctx)
        return TwistedCocycle.from_generator(action, phi)
    if kind == "table":
        values = _series_table(spec["series"], action.group, 2, N, action.ctx)
        return TwistedCocycle(action, values)
    raise ConfigError(f"unknown x spec type {kind!r}")


def _serialize_system(system) -> dict:
    return {
        f"{i},{j}": system[(i, j)].serialize() for (i, j) in sorted(system.cochains)
    }


def cmd_obstruct(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = json.load(fh)
    for field in ("ell", "k", "n"):
        if field not in config:
            raise ConfigError(f"config needs '{field}'")
    ctx = ModulusContext(int(config["ell"]), int(config["k"]))
    n = int(config["n"])
    if n < 2:
        raise ConfigError("the obstruction pipeline needs n >= 2")
    if int(config.get("r", 2)) != 2:
        raise ConfigError("the monodromy pipeline is two-generator (r = 2)")
    G = _build_group(config.get("group"))
    chi = _build_character(config.get("character"), G, ctx)
    action = _build_action(config, G, chi, ctx, n)
    x = _build_cocycle(config, action)

    from .cohomology import is_coboundary

    def run_J(J):
        system = canonical_system(x, J)
        ok = bool(validate(system))
        entry = {
            "J": "".join(str(v) for v in J),
            "defining_system": _serialize_system(system),
            "defining_system_valid": ok,
        }
        value = massey_value(system)
        van, witness = is_coboundary(value)
        entry["massey_value"] = value.serialize()
        entry["vanishes"] = van
        entry["witness"] = witness.serialize() if witness is not None else None
        return entry

    entries = pmap(run_J, single_two_indices(n))
    obstructed = any(not e["vanishes"] for e in entries)
    report = {
        "config": config,
        "results": entries,
        "verdict": "obstructed" if obstructed else "unobstructed",
    }
    print(json.dumps(report, sort_keys=True, indent=2))
    return 1 if obstructed else 0


def cmd_verify(args) -> int:
    suite = SUITES.get(args.suite)
    if suite is None:
        raise ConfigError(f"unknown suite {args.suite!r}; have {sorted(SUITES)}")
    kwargs = {}
    if args.suite == "aldef":
        if args.ell:
            kwargs["ells"] = tuple(int(t) for t in args.ell.split(","))
        if args.lmax:
            kwargs["lmax"] = args.lmax
        if args.nmax:
            kwargs["nmax"] = args.nmax
        if args.kmax:
            kwargs["kmax"] = args.kmax
    elif args.suite in ("magnus", "cochain", "equivariance"):
        kwargs["seed"] = args.seed
        if args.cases and args.suite in ("cochain", "equivariance"):
            kwargs["cases"] = args.cases
        if args.pairs and args.suite == "magnus":
            kwargs["pairs"] = args.pairs
    elif args.suite in ("prop24", "prop25"):
        if args.group:
            kind, _, order = args.group.partition(":")
            if kind != "cyclic":
                raise ConfigError("instance override supports cyclic groups only")
            ell = int(args.ell) if args.ell else 7
            kwargs["instances"] = ((int(order), args.n or 2, ell, args.k or 1),)
    results = suite(**kwargs)
    ok = True
    for res in results:
        status = "PASS" if res.ok else "FAIL"
        ok = ok and res.ok
        line = f"{status} {res.name}"
        if res.detail:
            line += f" -- {res.detail}"
        print(line)
    return 0 if ok else 1


def cmd_expand(args) -> int:
    ctx = ModulusContext(args.ell, args.k)
    word = FreeWord.from_string(args.word)
    r = args.r or max(word.max_generator, 1)
    series = magnus_embed(word, r, args.n, ctx)
    print(json.dumps(series.serialize(), sort_keys=True, indent=2))
    return 0


def cmd_bench(args) -> int:
    import random

    if args.op != "series-mul":
        raise ConfigError(f"unknown benchmark {args.op!r}")
    ctx = ModulusContext(args.ell, args.k)
    rng = random.Random(args.seed)
    mod = ctx.modulus
    a = TruncatedSeries.deserialize({}, args.r, args.n, ctx)
    b = TruncatedSeries.deserialize({}, args.r, args.n, ctx)
    for s in (a, b):
        for d in range(args.n + 1):
            blk = s.blocks[d]
            for i in range(len(blk)):
                blk[i] = rng.randrange(mod)
    start = time.perf_counter()
    for _ in range(args.reps):
        a * b
    elapsed = time.perf_counter() - start
    print(
        json.dumps(
            {
                "op": "series-mul",
                "r": args.r,
                "n": args.n,
                "ell": args.ell,
                "k": args.k,
                "reps": args.reps,
                "ns_per_op": round(elapsed / args.reps * 1e9),
            },
            sort_keys=True,
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilmassey", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run an identity suite")
    p.add_argument("suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--pairs", type=int, default=None)
    p.add_argument("--ell", type=str, default=None)
    p.add_argument("--lmax", type=int, default=None)
    p.add_argument("--nmax", "--Nmax", dest="nmax", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--group", type=str, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("obstruct", help="run the section-obstruction pipeline")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("expand", help="Magnus-expand a word")
    p.add_argument("--word", required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("bench", help="micro-benchmarks")
    p.add_argument("op")
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--ell", type=int, default=7)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, NotTwistedCocycle, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NilmasseyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
