"""Random group elements for property checks and the self-test."""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from .matrices import SLMatrix
from .scalars import FLOAT, RATIONAL, FieldDescriptor, LaurentDomain, LaurentPoly


def _elementary(n, i, j, c, dom):
    rows = [[dom.one if a == b else dom.zero for b in range(n)] for a in range(n)]
    rows[i][j] = c
    return SLMatrix._trusted(tuple(tuple(r) for r in rows), dom)


def _torus(n, i, a, dom):
    """``diag`` with ``a`` at i, ``1/a`` at i+1 (mod n)."""
    rows = [[dom.one if x == y else dom.zero for y in range(n)] for x in range(n)]
    j = (i + 1) % n
    rows[i][i] = a
    rows[j][j] = dom.one / a
    return SLMatrix._trusted(tuple(tuple(r) for r in rows), dom)


def _weyl(n, i, dom):
    rows = [[dom.one if x == y else dom.zero for y in range(n)] for x in range(n)]
    j = (i + 1) % n
    rows[i][i] = rows[j][j] = dom.zero
    rows[i][j] = dom.one
    rows[j][i] = -dom.one
    return SLMatrix._trusted(tuple(tuple(r) for r in rows), dom)


def _product(factors, n, dom):
    g = SLMatrix.identity(n, dom)
    for f in factors:
        g = g @ f
    return g


def random_rational(rng: random.Random, p: int = 2, spread: int = 2) -> Fraction:
    """Small rational whose p-adic valuation lies in ``[-spread, spread]``."""
    num = rng.choice([1, 1, 2, 3, 5, 7])
    den = rng.choice([1, 1, 2, 3, 5])
    x = Fraction(num * rng.choice([-1, 1]), den) * Fraction(p) ** rng.randint(-spread, spread)
    return x


def random_sl_rational(n: int, rng: random.Random, p: int = 2, steps: int = None, spread: int = 2) -> SLMatrix:
    """Random element of SL_n(Q) as a product of elementary, torus and Weyl factors."""
    dom = RATIONAL
    steps = steps if steps is not None else n + 2
    factors = []
    for _ in range(steps):
        kind = rng.random()
        if kind < 0.7:
            i, j = rng.sample(range(n), 2)
            factors.append(_elementary(n, i, j, random_rational(rng, p, spread), dom))
        elif kind < 0.9:
            factors.append(_torus(n, rng.randrange(n), random_rational(rng, p, spread), dom))
        else:
            factors.append(_weyl(n, rng.randrange(n), dom))
    return _product(factors, n, dom)


def random_laurent(rng: random.Random, p: int, lo: int = -2, hi: int = 2, terms: int = 2) -> LaurentPoly:
    while True:
        d = {rng.randint(lo, hi): rng.randrange(1, p) for _ in range(rng.randint(1, terms))}
        x = LaurentPoly.from_dict(p, d)
        if x:
            return x


def random_sl_laurent(n: int, rng: random.Random, p: int, steps: int = None, lo: int = -2, hi: int = 2) -> SLMatrix:
    dom = LaurentDomain(p)
    steps = steps if steps is not None else n + 2
    factors = []
    for _ in range(steps):
        kind = rng.random()
        if kind < 0.7:
            i, j = rng.sample(range(n), 2)
            factors.append(_elementary(n, i, j, random_laurent(rng, p, lo, hi), dom))
        elif kind < 0.9:
            a = LaurentPoly.monomial(p, rng.randint(lo, hi), rng.randrange(1, p))
            factors.append(_torus(n, rng.randrange(n), a, dom))
        else:
            factors.append(_weyl(n, rng.randrange(n), dom))
    return _product(factors, n, dom)


def random_sl(n: int, field: FieldDescriptor, rng: random.Random, **kw) -> SLMatrix:
    if field.kind == "laurent":
        return random_sl_laurent(n, rng, field.p, **kw)
    return random_sl_rational(n, rng, field.p or 2, **kw)


def random_maximal_compact(n: int, field: FieldDescriptor, rng: random.Random, steps: int = 6) -> SLMatrix:
    """Random element of SL_n of the valuation ring: integral entries, integral inverse."""
    if field.kind == "laurent":
        p = field.p
        dom = LaurentDomain(p)
        factors = []
        for _ in range(steps):
            kind = rng.random()
            if kind < 0.7:
                i, j = rng.sample(range(n), 2)
                factors.append(_elementary(n, i, j, random_laurent(rng, p, 0, 3, 3), dom))
            elif kind < 0.85:
                factors.append(_torus(n, rng.randrange(n), LaurentPoly.monomial(p, 0, rng.randrange(1, p)), dom))
            else:
                factors.append(_weyl(n, rng.randrange(n), dom))
        return _product(factors, n, dom)
    if field.kind != "padic":
        raise ValueError("use random_orthogonal for the real field")
    p = field.p
    dom = RATIONAL

    def coprime(lo=1, hi=12):
        while True:
            x = rng.randint(lo, hi)
            if x % p:
                return x

    factors = []
    for _ in range(steps):
        kind = rng.random()
        if kind < 0.7:
            i, j = rng.sample(range(n), 2)
            c = Fraction(rng.randint(-6, 6), coprime())
            factors.append(_elementary(n, i, j, c, dom))
        elif kind < 0.85:
            u = Fraction(coprime() * rng.choice([-1, 1]), coprime())
            factors.append(_torus(n, rng.randrange(n), u, dom))
        else:
            factors.append(_weyl(n, rng.randrange(n), dom))
    return _product(factors, n, dom)


def random_orthogonal(n: int, rng: np.random.Generator) -> SLMatrix:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return SLMatrix(q.tolist(), FLOAT)
