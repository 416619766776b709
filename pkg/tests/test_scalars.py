from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartan_lab.errors import (
    CoefficientRangeError,
    DomainMismatchError,
    NotInvertibleError,
    ScalarParseError,
)
from cartan_lab.scalars import (
    FLOAT,
    INF,
    RATIONAL,
    FieldDescriptor,
    LaurentDomain,
    LaurentPoly,
    domain_arithmetic,
    format_scalar,
    padic_valuation_int,
    parse_scalar,
    valuation,
)
from cartan_lab.sampling import random_laurent, random_rational

P2 = FieldDescriptor.padic(2)
L2 = FieldDescriptor.laurent(2)


def lp(p, terms):
    return LaurentPoly.from_dict(p, terms)


# --- valuations ---------------------------------------------------------------


def test_valuation_examples():
    assert valuation(Fraction(12), P2) == 2
    assert valuation(lp(2, {-3: 1, -1: 1}), L2) == -3
    assert valuation(Fraction(3, 4), P2) == -2


def test_valuation_of_zero_is_infinite():
    assert valuation(Fraction(0), P2) == INF
    assert valuation(LaurentDomain(2).zero, L2) == INF


def test_valuation_rejects_mismatched_domain():
    with pytest.raises(DomainMismatchError):
        valuation(lp(2, {0: 1}), P2)
    with pytest.raises(DomainMismatchError):
        valuation(Fraction(1), L2)
    with pytest.raises(DomainMismatchError):
        valuation(lp(3, {0: 1}), L2)
    with pytest.raises(DomainMismatchError):
        valuation(Fraction(1), FieldDescriptor.real())


def test_padic_valuation_int():
    assert padic_valuation_int(48, 2) == 4
    assert padic_valuation_int(-81, 3) == 4
    assert padic_valuation_int(7, 5) == 0


def _pairs(n, seed):
    rng = random.Random(seed)
    for i in range(n):
        if i % 2:
            yield random_rational(rng, 2, 4), random_rational(rng, 2, 4), P2
        else:
            yield random_laurent(rng, 2, -4, 4, 4), random_laurent(rng, 2, -4, 4, 4), L2


def test_valuation_is_multiplicative_and_ultrametric():
    for x, y, f in _pairs(10_000, 11):
        vx, vy = valuation(x, f), valuation(y, f)
        assert valuation(x * y, f) == vx + vy
        s = x + y
        vs = valuation(s, f)
        assert vs >= min(vx, vy)
        if vx != vy:
            assert vs == min(vx, vy)


# --- arithmetic ---------------------------------------------------------------


def test_arithmetic_examples():
    assert domain_arithmetic(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)
    x = lp(2, {-1: 1, 0: 1})
    assert domain_arithmetic(x, x, "mul") == lp(2, {-2: 1, 0: 1})
    assert domain_arithmetic(lp(2, {-1: 1}), lp(2, {1: 1}), "mul") == LaurentDomain(2).one


def test_division_rules():
    with pytest.raises(NotInvertibleError):
        domain_arithmetic(Fraction(1), Fraction(0), "div")
    with pytest.raises(NotInvertibleError):
        lp(3, {0: 1}) / lp(3, {0: 1, 1: 1})
    assert lp(3, {2: 1, 3: 2}) / lp(3, {1: 2}) == lp(3, {1: 2, 2: 1})


def test_mixed_domains_rejected():
    with pytest.raises(DomainMismatchError):
        domain_arithmetic(Fraction(1), lp(2, {0: 1}), "add")
    with pytest.raises(DomainMismatchError):
        lp(2, {0: 1}) + lp(3, {0: 1})


def test_laurent_canonical_form():
    x = lp(2, {-1: 1, 0: 1, 1: 1})
    y = lp(2, {-1: 1, 1: 1})
    d = x - y
    assert d == lp(2, {0: 1}) and d.to_dict() == {0: 1}
    assert not (x - x)
    assert (x - x).valuation() == INF
    neg = -lp(5, {0: 1, 1: 0, 2: 3})
    assert neg.to_dict() == {0: 4, 2: 2}


def _naive_mul(a, b, p):
    out = {}
    for i, x in a.to_dict().items():
        for j, y in b.to_dict().items():
            out[i + j] = (out.get(i + j, 0) + x * y) % p
    return {k: v for k, v in out.items() if v}


@pytest.mark.parametrize("p", [2, 3, 7, 101])
def test_laurent_product_matches_schoolbook(p):
    rng = random.Random(p)
    for size in (1, 5, 30, 120):
        a = lp(p, {rng.randint(-size, size): rng.randrange(1, p) for _ in range(size)})
        b = lp(p, {rng.randint(-size, size): rng.randrange(1, p) for _ in range(size)})
        assert (a * b).to_dict() == _naive_mul(a, b, p)


def test_rationals_against_integer_cross_check():
    # represent q = a/b by the integer pair (a, b) and compare with Fraction arithmetic
    rng = random.Random(5)
    for _ in range(1000):
        xs = [(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(3)]
        (a, b), (c, d), (e, f) = xs
        x, y, z = (Fraction(n, m) for n, m in xs)
        num, den = (a * d + c * b) * f + e * b * d, b * d * f
        assert (x + y) + z == x + (y + z) == Fraction(num, den)
        num, den = a * (c * f + e * d), b * d * f
        assert x * (y + z) == x * y + x * z == Fraction(num, den)


# --- parsing ------------------------------------------------------------------


def test_parse_examples():
    assert parse_scalar("3/4", RATIONAL) == Fraction(3, 4)
    assert parse_scalar("t^-2 + 1", LaurentDomain(2)) == lp(2, {-2: 1, 0: 1})
    assert parse_scalar("0", RATIONAL) == 0
    assert parse_scalar("0", LaurentDomain(3)) == LaurentDomain(3).zero
    assert parse_scalar("-7", RATIONAL) == -7


@pytest.mark.parametrize(
    "text, expected",
    [
        ("t", {1: 1}),
        ("2*t^3 - t", {3: 2, 1: 4}),
        ("4 + 3*t^-1", {0: 4, -1: 3}),
        (" t ^ -2 +t^ 2 ", {-2: 1, 2: 1}),
        ("t + t", {1: 2}),
    ],
)
def test_parse_laurent_terms(text, expected):
    assert parse_scalar(text, LaurentDomain(5)).to_dict() == expected


@pytest.mark.parametrize("text", ["", "t^", "3/", "1/0x", "*t", "t^1.5", "2 t", "+"])
def test_parse_errors_report_position(text):
    dom = LaurentDomain(5) if "t" in text or text in ("", "+") else RATIONAL
    with pytest.raises(ScalarParseError) as info:
        parse_scalar(text, dom)
    assert info.value.position >= 0


def test_coefficient_out_of_range():
    with pytest.raises(CoefficientRangeError):
        parse_scalar("2*t", LaurentDomain(2))
    with pytest.raises(CoefficientRangeError):
        parse_scalar("5", LaurentDomain(5))


def test_zero_denominator_rejected():
    with pytest.raises((ScalarParseError, ZeroDivisionError)):
        parse_scalar("1/0", RATIONAL)


def test_parse_format_round_trip():
    rng = random.Random(9)
    doms = [RATIONAL, LaurentDomain(2), LaurentDomain(3), LaurentDomain(7)]
    for dom in doms:
        for _ in range(1000):
            if dom is RATIONAL:
                x = random_rational(rng, rng.choice([2, 3, 5]), 5)
            else:
                x = random_laurent(rng, dom.p, -6, 6, 5)
            assert parse_scalar(format_scalar(x, dom), dom) == x


@settings(max_examples=200, deadline=None)
@given(st.dictionaries(st.integers(-20, 20), st.integers(0, 6), max_size=8))
def test_round_trip_property(terms):
    x = lp(7, terms)
    assert parse_scalar(format_scalar(x), LaurentDomain(7)) == x


@settings(max_examples=200, deadline=None)
@given(st.fractions())
def test_rational_round_trip_property(x):
    assert parse_scalar(format_scalar(x), RATIONAL) == x


# --- field descriptors --------------------------------------------------------


def test_field_descriptor_parse():
    assert FieldDescriptor.parse("padic:3") == FieldDescriptor.padic(3)
    assert FieldDescriptor.parse("laurent:2").kind == "laurent"
    assert FieldDescriptor.parse("real").archimedean
    for bad in ("padic:4", "laurent", "complex", "padic:x"):
        with pytest.raises(ValueError):
            FieldDescriptor.parse(bad)


def test_field_accepts():
    assert P2.accepts(RATIONAL)
    assert not P2.accepts(LaurentDomain(2))
    assert L2.accepts(LaurentDomain(2)) and not L2.accepts(LaurentDomain(3))
    assert FieldDescriptor.real().accepts(FLOAT)


def test_laurent_pickles():
    import pickle

    x = lp(3, {-2: 1, 5: 2})
    assert pickle.loads(pickle.dumps(x)) == x
    assert pickle.loads(pickle.dumps(LaurentDomain(3))) is LaurentDomain(3)
