from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from cartan_lab.cartan import cartan_projection, chamber_norm
from cartan_lab.errors import DomainMismatchError, EntrySizeError
from cartan_lab.matrices import SLMatrix, det_division_free, submatrix
from cartan_lab.sampling import random_sl, random_sl_laurent, random_sl_rational
from cartan_lab.scalars import FLOAT, INF, RATIONAL, FieldDescriptor, LaurentDomain, LaurentPoly
from cartan_lab.spectral import (
    charpoly,
    eigenvalue_modulus_census,
    eigenvalue_valuation_slopes,
    lyapunov_newton_polygon,
    lyapunov_power_limit,
    newton_polygon_slopes,
)

L2 = FieldDescriptor.laurent(2)
REAL = FieldDescriptor.real()


def mono(p, k, c=1):
    return LaurentPoly.monomial(p, k, c)


def g_n(p, n):
    dom = LaurentDomain(p)
    return SLMatrix([[dom.one, mono(p, -n)], [dom.zero, dom.one]], dom)


def companion(p):
    # X^2 - (t^-1 + t) X + 1
    dom = LaurentDomain(p)
    trace = LaurentPoly.from_dict(p, {-1: 1, 1: 1})
    return SLMatrix([[dom.zero, -dom.one], [dom.one, trace]], dom)


def test_newton_polygon_examples():
    assert lyapunov_newton_polygon(SLMatrix.diag([mono(2, -1), mono(2, 1)]), L2).coords == (1, -1)
    assert lyapunov_newton_polygon(g_n(2, 1), L2).coords == (0, 0)
    assert lyapunov_newton_polygon(companion(2), L2).coords == (1, -1)
    assert lyapunov_newton_polygon(companion(3), FieldDescriptor.laurent(3)).coords == (1, -1)


def test_newton_polygon_slopes():
    assert newton_polygon_slopes([0, -1, 0]) == [-1, 1]
    assert newton_polygon_slopes([0, INF, 1]) == [Fraction(1, 2)] * 2
    assert newton_polygon_slopes([3, 1, 0, 0]) == [-2, -1, 0]
    assert newton_polygon_slopes([0, 5, 5, 0]) == [0, 0, 0]


def test_fractional_slopes():
    # companion matrix of X^3 + t^-1 X - 1: two roots near (-1/t)^(1/2), one near t
    dom = LaurentDomain(2)
    z, o = dom.zero, dom.one
    g = SLMatrix([[z, z, o], [o, z, mono(2, -1)], [z, o, z]], dom)
    assert charpoly(g) == [-o, mono(2, -1), z, o]
    lam = lyapunov_newton_polygon(g, L2)
    assert lam.coords == (Fraction(1, 2), Fraction(1, 2), -1)
    assert eigenvalue_modulus_census(g, L2).as_tuple() == (2, 0, 1)


def _charpoly_by_minors(g):
    n = g.n
    zero = g.domain.zero
    out = [zero] * n + [g.domain.one]
    for k in range(1, n + 1):
        total = sum((det_division_free(submatrix(g.rows, idx, idx), zero)
                     for idx in combinations(range(n), k)), zero)
        out[n - k] = total if k % 2 == 0 else -total
    return out


def test_charpoly_faddeev_matches_minors():
    rng = random.Random(1)
    for _ in range(200):
        g = random_sl_rational(rng.randint(2, 4), rng)
        assert charpoly(g) == _charpoly_by_minors(g)
        assert charpoly(g)[0] == (-1) ** g.n


def test_charpoly_constant_term_laurent():
    rng = random.Random(2)
    for _ in range(50):
        g = random_sl_laurent(3, rng, 2)
        assert charpoly(g)[0] == LaurentDomain(2).one


def test_power_limit_diagonal_real():
    e = math.e
    est = lyapunov_power_limit(SLMatrix([[e, 0.0], [0.0, 1 / e]], FLOAT), REAL, k_max=12)
    assert est.value.coords == pytest.approx((1, -1), abs=1e-9)
    assert est.ratio.coords == pytest.approx((1, -1), abs=1e-9)
    assert all(d == pytest.approx(0, abs=1e-9) for d in est.defects)


def test_power_limit_unipotent_real():
    est = lyapunov_power_limit(SLMatrix([[1, 1], [0, 1]], RATIONAL), REAL, k_max=12)
    m = 2 ** 12
    assert est.ratio.coords[0] == pytest.approx(math.asinh(m / 2) / m, rel=1e-9)
    assert est.ratio.coords[0] < 0.005 and abs(est.value.coords[0]) < 1e-3
    ratios = [math.asinh(2 ** k / 2) / 2 ** k for k in range(13)]
    assert ratios == sorted(ratios, reverse=True)


def test_power_limit_matches_newton_polygon():
    rng = random.Random(3)
    for _ in range(10):
        g = random_sl_laurent(2, rng, 2)
        est = lyapunov_power_limit(g, L2, k_max=10)
        assert est.value == lyapunov_newton_polygon(g, L2)
        assert est.k == 10 and len(est.defects) == 11


def test_power_limit_entry_cap():
    g = SLMatrix([[Fraction(3, 7), Fraction(1)], [Fraction(-1), Fraction(0)]], RATIONAL)
    with pytest.raises(EntrySizeError):
        lyapunov_power_limit(g, FieldDescriptor.padic(3), k_max=12, max_bits=2000)
    with pytest.raises(ValueError):
        lyapunov_power_limit(g, FieldDescriptor.padic(3), k_max=0)


def test_census_examples():
    d = SLMatrix.diag([Fraction(2), Fraction(3), Fraction(1, 6)])
    assert eigenvalue_modulus_census(d, REAL).as_tuple() == (2, 0, 1)
    c, s = math.cos(1.0), math.sin(1.0)
    rot = SLMatrix([[c, -s], [s, c]], FLOAT)
    assert eigenvalue_modulus_census(rot, REAL).as_tuple() == (0, 2, 0)
    assert eigenvalue_modulus_census(companion(2), L2).as_tuple() == (1, 0, 1)
    assert eigenvalue_modulus_census(g_n(2, 3), L2).as_tuple() == (0, 2, 0)


def test_census_signs_match_lyapunov():
    rng = random.Random(4)
    fields = [FieldDescriptor.padic(2), FieldDescriptor.padic(3), L2, FieldDescriptor.laurent(3)]
    for i in range(500):
        f = fields[i % 4]
        g = random_sl(2 + i % 3, f, rng)
        lam = lyapunov_newton_polygon(g, f)
        census = eigenvalue_modulus_census(g, f)
        assert census.n == g.n
        assert census.as_tuple() == (
            sum(1 for x in lam.coords if x > 0),
            sum(1 for x in lam.coords if x == 0),
            sum(1 for x in lam.coords if x < 0),
        )


def test_lyapunov_is_homogeneous():
    rng = random.Random(5)
    for _ in range(100):
        g = random_sl_laurent(2 + rng.randrange(2), rng, 2)
        lam = lyapunov_newton_polygon(g, L2)
        for m in (2, 3, 5):
            assert lyapunov_newton_polygon(g ** m, L2).coords == tuple(m * x for x in lam.coords)


def test_lyapunov_mu_gap_is_bounded():
    # g = P D P^-1 is diagonalizable over the base field, so |lambda(g^m) - mu(g^m)| stays bounded
    rng = random.Random(6)
    for _ in range(20):
        P = random_sl_laurent(2, rng, 2)
        a = rng.randint(1, 3)
        D = SLMatrix.diag([mono(2, -a), mono(2, a)])
        g = P @ D @ P.inverse()
        bound = 2 * cartan_projection(P, L2).norm()
        gaps = {}
        for m in (1, 2, 4, 8, 16, 32):
            gm = g ** m
            lam, mu = lyapunov_newton_polygon(gm, L2), cartan_projection(gm, L2)
            gaps[m] = chamber_norm([x - y for x, y in zip(lam.coords, mu.coords)])
        assert max(gaps.values()) <= bound + 1e-12
        assert gaps[32] <= gaps[16]


def test_newton_polygon_needs_nonarchimedean():
    with pytest.raises(DomainMismatchError):
        lyapunov_newton_polygon(SLMatrix.identity(2), REAL)
    with pytest.raises(DomainMismatchError):
        eigenvalue_modulus_census(g_n(2, 1), REAL)
