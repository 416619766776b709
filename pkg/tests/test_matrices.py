from __future__ import annotations

import json
import math
import random
from fractions import Fraction

import pytest

from cartan_lab.errors import DeterminantError, DimensionMismatchError, DomainMismatchError, GroupSpecError
from cartan_lab.matrices import (
    GeneratorSet,
    GroupWord,
    Pair,
    SLMatrix,
    det_by_elimination,
    det_division_free,
    evaluate_word,
    group_spec_to_json,
    inverse,
    load_group_spec,
    multiply,
    pair_group,
)
from cartan_lab.sampling import random_sl_laurent, random_sl_rational
from cartan_lab.scalars import FLOAT, RATIONAL, FieldDescriptor, LaurentDomain, LaurentPoly

L2 = LaurentDomain(2)


def g_n(p, n):
    dom = LaurentDomain(p)
    return SLMatrix([[dom.one, LaurentPoly.monomial(p, -n)], [dom.zero, dom.one]], dom)


def t_diag(p, k):
    return SLMatrix.diag([LaurentPoly.monomial(p, -k), LaurentPoly.monomial(p, k)])


def test_multiply_examples():
    g1 = g_n(2, 1)
    assert multiply(g1, g1).is_identity()
    a = random_sl_rational(3, random.Random(0))
    assert multiply(SLMatrix.identity(3), a) == a
    assert t_diag(2, 1) @ t_diag(2, 1) == t_diag(2, 2)


def test_inverse_examples():
    for n in (1, 2, 5):
        expected = SLMatrix([[L2.one, -LaurentPoly.monomial(2, -n)], [L2.zero, L2.one]], L2)
        assert inverse(g_n(2, n)) == expected
    assert inverse(SLMatrix.identity(4)).is_identity()
    g = g_n(3, 2)
    assert inverse(g).rows[0][1] == LaurentPoly.monomial(3, -2, 2)


def test_random_inverse_and_det():
    rng = random.Random(3)
    for _ in range(200):
        a = random_sl_rational(3, rng)
        b = random_sl_rational(3, rng)
        assert (a @ a.inverse()).is_identity()
        assert (a @ b).det() == 1
        c = random_sl_laurent(3, rng, 3)
        assert (c @ inverse(c)).is_identity() and (c.inverse() @ c).is_identity()
        assert c.det() == LaurentDomain(3).one


def test_determinant_methods_agree():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(2, 4)
        rows = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        assert det_division_free(rows, Fraction(0)) == det_by_elimination(rows, Fraction(1))


def test_det_check():
    with pytest.raises(DeterminantError):
        SLMatrix([[2, 0], [0, 1]], RATIONAL)
    with pytest.raises(DeterminantError):
        SLMatrix([[1.0, 0.0], [0.0, 1.1]], FLOAT)
    SLMatrix([[1.0 + 1e-12, 0.0], [0.0, 1.0]], FLOAT)
    with pytest.raises(DimensionMismatchError):
        SLMatrix([[1]], RATIONAL)
    with pytest.raises(DimensionMismatchError):
        SLMatrix.identity(2) @ SLMatrix.identity(3)
    with pytest.raises(DomainMismatchError):
        SLMatrix.identity(2) @ SLMatrix.identity(2, L2)


def test_power_and_order():
    g1 = g_n(3, 1)
    assert not (g1 ** 2).is_identity()
    assert (g1 ** 3).is_identity()
    assert (g1 ** -1) == g1.inverse()
    assert (g1 ** 0).is_identity()


def test_keys_are_canonical():
    a = SLMatrix([[Fraction(2, 4), 0], [0, 2]], RATIONAL)
    b = SLMatrix([[Fraction(1, 2), 0], [0, Fraction(4, 2)]], RATIONAL)
    assert a.key() == b.key() and hash(a) == hash(b)
    assert a.key() != SLMatrix.identity(2).key()
    x = SLMatrix([[L2.one, L2.zero], [L2.zero, L2.one]], L2)
    assert x.key() != SLMatrix.identity(2).key()


def test_word_examples(sanov):
    assert evaluate_word(GroupWord(), sanov).is_identity()
    assert evaluate_word(GroupWord(((0, 1), (0, -1))), sanov).is_identity()
    # hand multiplication: (1,2;0,1)(1,0;2,1) = (1+4, 2; 2, 1)
    a, b = [[1, 2], [0, 1]], [[1, 0], [2, 1]]
    hand = [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert hand == [[5, 2], [2, 1]]
    assert evaluate_word(GroupWord(((0, 1), (1, 1))), sanov) == SLMatrix(hand, RATIONAL)


def test_word_index_out_of_range(sanov):
    with pytest.raises(IndexError):
        evaluate_word(GroupWord(((2, 1),)), sanov)


def test_word_inverse_property(sanov):
    rng = random.Random(8)
    for _ in range(1000):
        w = GroupWord(tuple((rng.randrange(2), rng.choice([1, -1])) for _ in range(rng.randint(0, 8))))
        assert evaluate_word(w.inverse(), sanov) == inverse(evaluate_word(w, sanov))


def test_word_format_parse(sanov):
    w = GroupWord(((0, 1), (1, -1), (1, -1)))
    text = w.format(sanov.labels)
    assert text == "a*b^-1*b^-1"
    assert GroupWord.parse(text, sanov.labels) == w
    assert GroupWord().format(sanov.labels) == "1"
    with pytest.raises(GroupSpecError):
        GroupWord.parse("c", sanov.labels)


def test_generator_set_validation():
    f = FieldDescriptor.padic(2)
    with pytest.raises(GroupSpecError):
        GeneratorSet(f, 2, ())
    with pytest.raises(DimensionMismatchError):
        GeneratorSet(f, 2, (SLMatrix.identity(2), SLMatrix.identity(3)))
    with pytest.raises(DomainMismatchError):
        GeneratorSet(f, 2, (g_n(2, 1),))
    with pytest.raises(GroupSpecError):
        GeneratorSet(f, 2, (SLMatrix.identity(2),), ("a", "b"))


def test_pair_group_examples():
    f = FieldDescriptor.laurent(2)
    left = GeneratorSet(f, 2, (g_n(2, 1), g_n(2, 2)))
    right = GeneratorSet(f, 2, (g_n(2, 2), g_n(2, 1)))
    pg = pair_group(left, right)
    assert pg.is_pair and pg.generators[0] == Pair(g_n(2, 1), g_n(2, 2))
    prod = pg.generators[0] @ pg.generators[1]
    assert prod.is_diagonal() and prod.left == prod.right
    trivial = pair_group(left, GeneratorSet(f, 2, (SLMatrix.identity(2, L2),) * 2))
    assert all(g.right.is_identity() for g in trivial.generators)
    diag = pair_group(left, left)
    assert all(g.is_diagonal() for g in diag.generators)
    with pytest.raises(GroupSpecError):
        pair_group(left, GeneratorSet(f, 2, (g_n(2, 1),)))


def test_pair_inverse():
    p = Pair(g_n(3, 1), t_diag(3, 2))
    assert (p @ p.inverse()).is_identity()
    assert p.key() != Pair(t_diag(3, 2), g_n(3, 1)).key()


def test_load_group_spec(specs_dir):
    g = load_group_spec(specs_dir / "sanov.json")
    assert g.field.kind == "real" and g.labels == ("a", "b") and g.domain is RATIONAL
    one = load_group_spec(specs_dir / "g1_laurent2.json")
    assert one.generators == (g_n(2, 1),)
    pairs = load_group_spec(specs_dir / "sanov_diagonal.json")
    assert pairs.is_pair and all(x.is_diagonal() for x in pairs.generators)
    over = load_group_spec(specs_dir / "sanov.json", FieldDescriptor.padic(3))
    assert over.field == FieldDescriptor.padic(3)


def test_spec_round_trip(specs_dir):
    for name in ("sanov.json", "sanov_diagonal.json", "sl3_rational.json"):
        g = load_group_spec(specs_dir / name)
        again = load_group_spec(json.dumps(group_spec_to_json(g)))
        assert again == g


@pytest.mark.parametrize(
    "spec",
    [
        "[]",
        '{"field": {"kind": "padic", "p": 4}, "n": 2, "generators": [[["1","0"],["0","1"]]]}',
        '{"field": {"kind": "padic", "p": 2}, "n": 2, "generators": [[["2","0"],["0","1"]]]}',
        '{"field": {"kind": "padic", "p": 2}, "n": 2, "generators": [[["1","0"]]]}',
        '{"field": {"kind": "padic", "p": 2}, "n": 2, "generators": [[["1/","0"],["0","1"]]]}',
        '{"field": {"kind": "laurent", "p": 2}, "n": 2, "generators": [[["1","3*t"],["0","1"]]]}',
        '{"field": {"kind": "padic", "p": 2}, "n": 2, "generators": []}',
        '{"field": {"kind": "padic", "p": 2}, "n": 1, "generators": [[["1"]]]}',
        '{"field": {"kind": "real"}, "n": 2, "generators": [[["1","2"],["0","1"]]], '
        '"right_generators": []}',
        "{not json",
    ],
)
def test_bad_specs(spec):
    with pytest.raises(GroupSpecError):
        load_group_spec(spec)


def test_float_matrices():
    c, s = math.cos(0.3), math.sin(0.3)
    r = SLMatrix([[c, -s], [s, c]], FLOAT)
    prod = r @ r.inverse()
    assert all(abs(prod.rows[i][j] - (i == j)) < 1e-12 for i in range(2) for j in range(2))
