"""Independent brute-force oracles for the test suite.

Noncommutative polynomials are plain dicts {word-tuple: int coefficient} over
the integers, truncated by word length.  Nothing here touches the library's
series representation, so disagreements point at real defects.
"""

from math import factorial


def omul(p, q, N):
    out = {}
    for w1, c1 in p.items():
        for w2, c2 in q.items():
            if len(w1) + len(w2) <= N:
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
    return {w: c for w, c in out.items() if c}


def oadd(p, q):
    out = dict(p)
    for w, c in q.items():
        out[w] = out.get(w, 0) + c
    return {w: c for w, c in out.items() if c}


def oscale(p, c):
    return {w: v * c for w, v in p.items() if v * c}


def oone():
    return {(): 1}


def ovar(i):
    return {(i,): 1}


def oinv(p, N):
    assert p.get((), 0) == 1
    u = dict(p)
    u.pop((), None)
    acc = oone()
    upow = oone()
    for m in range(1, N + 1):
        upow = omul(upow, u, N)
        acc = oadd(acc, oscale(upow, (-1) ** m))
    return acc


def opow(p, e, N):
    if e < 0:
        return opow(oinv(p, N), -e, N)
    acc = oone()
    for _ in range(e):
        acc = omul(acc, p, N)
    return acc


def oembed(letters, N):
    """letters: sequence of (generator, integer exponent)."""
    acc = oone()
    for g, e in letters:
        acc = omul(acc, opow(oadd(oone(), ovar(g)), e, N), N)
    return acc


def oreduce(p, mod):
    return {w: c % mod for w, c in p.items() if c % mod}


def series_dict(series):
    """Library series -> oracle dict (reduced, zero coefficients dropped)."""
    out = {}
    for d in range(series.N + 1):
        blk = series.blocks[d]
        for rank in range(len(blk)):
            if blk[rank]:
                from nilmassey.magnus import rank_monomial

                out[rank_monomial(rank, d, series.r)] = int(blk[rank])
    return out
