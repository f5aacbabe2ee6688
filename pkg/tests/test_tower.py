import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from spheretwist.tower import (
    NEGATIVE,
    POSITIVE,
    ZERO,
    DomainError,
    TowerScalar,
    canonical_sqrt,
    format_rational,
    parse_rational,
    squarefree_decompose,
    tower_mul,
    tower_sign,
)
from strategies import rationals, scalars

SQ = TowerScalar.sqrt


def to_sympy(x: TowerScalar):
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.sqrt(k) for k, c in x.terms())


def high_precision(x: TowerScalar, dps=80):
    with mpmath.workdps(dps):
        return sum(mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(k) for k, c in x.terms())


# -- squarefree decomposition -----------------------------------------------


def test_squarefree_decompose_small_table():
    for n in range(1, 3000):
        s, k = squarefree_decompose(n)
        assert s * s * k == n
        assert all(k % (p * p) for p in range(2, math.isqrt(k) + 1))


def test_squarefree_decompose_example():
    assert squarefree_decompose(72) == (6, 2)
    assert squarefree_decompose(1) == (1, 1)


# -- canonical_sqrt ------------------------------------------------------------


def test_canonical_sqrt_eight_ninths():
    r = canonical_sqrt(Fraction(8, 9))
    assert r == TowerScalar.from_terms({2: Fraction(2, 3)})
    assert list(r.terms()) == [(2, Fraction(2, 3))]


@pytest.mark.parametrize("q, expected", [(0, 0), (4, 2), (Fraction(9, 4), Fraction(3, 2))])
def test_canonical_sqrt_rational_cases(q, expected):
    r = canonical_sqrt(q)
    assert r.is_rational() and r == expected


def test_canonical_sqrt_rejects_negative():
    with pytest.raises(DomainError):
        canonical_sqrt(Fraction(-1, 3))


def test_sqrt_of_fraction_moves_radical_to_numerator():
    # sqrt(2/3) = sqrt(6)/3
    assert canonical_sqrt(Fraction(2, 3)) == TowerScalar.from_terms({6: Fraction(1, 3)})


@settings(max_examples=200)
@given(st.integers(0, 2**64 - 1), st.integers(1, 2**64 - 1))
def test_canonical_sqrt_squares_back(num, den):
    q = Fraction(num, den)
    r = canonical_sqrt(q)
    assert r * r == q
    assert r.sign() >= 0


def test_large_prime_radicands():
    p, q = 1000003, 1000033
    assert SQ(p) * SQ(q) == SQ(p * q)
    assert SQ(p * q) * SQ(p) == p * SQ(q)
    assert (SQ(p) + SQ(q)) * (SQ(p) - SQ(q)) == p - q


# -- multiplication ------------------------------------------------------------


def test_tower_mul_examples():
    assert tower_mul(SQ(2), SQ(3)) == SQ(6)
    assert tower_mul(SQ(2), SQ(2)) == 2
    a = SQ(2) + SQ(3)
    assert tower_mul(a, a) == 5 + 2 * SQ(6)


def test_tower_mul_matches_symbolic_expansion():
    a = 1 + SQ(2) - Fraction(1, 3) * SQ(15)
    b = Fraction(2, 7) - SQ(10) + 3 * SQ(6)
    expected = sympy.expand(to_sympy(a) * to_sympy(b))
    assert sympy.simplify(to_sympy(a * b) - expected) == 0


@given(scalars(), scalars())
def test_products_agree_with_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


# -- ring laws and inverses ------------------------------------------------------


@given(scalars(), scalars(), scalars())
def test_ring_laws(a, b, c):
    assert (a + b) - b == a
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


@given(scalars())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == 1
        assert a / a == 1


def test_mixed_operand_types():
    x = SQ(2)
    assert 1 + x == x + 1
    assert Fraction(1, 2) * x == x / 2
    assert 2 - x == -(x - 2)
    assert 1 / x == x / 2
    assert x**4 == 4


# -- sign ------------------------------------------------------------------------


def test_sign_examples():
    assert tower_sign(TowerScalar(0)) == ZERO
    assert tower_sign(1 - SQ(2) + SQ(3) - SQ(6)) == NEGATIVE
    assert (1 - SQ(2)) * (1 + SQ(3)) == 1 - SQ(2) + SQ(3) - SQ(6)
    assert tower_sign(3 - 2 * SQ(2)) == POSITIVE


def test_sign_of_tiny_difference():
    # sqrt(10^12 + 1) - 10^6 is about 5e-7
    x = SQ(10**12 + 1) - 10**6
    assert x.sign() == 1
    assert x < Fraction(1, 10**6)


@settings(max_examples=500)
@given(scalars())
def test_sign_agrees_with_high_precision(a):
    ref = high_precision(a)
    expected = 0 if a.is_zero() else (1 if ref > 0 else -1)
    assert tower_sign(a) == expected


@given(scalars(), scalars())
def test_ordering_consistent(a, b):
    assert (a < b) == ((a - b).sign() < 0)
    assert (a <= b) == (not a > b)


@given(scalars())
def test_enclosure_contains_value(a):
    lo, hi = a.enclosure(64)
    assert (a - lo).sign() >= 0 and (hi - a).sign() >= 0
    assert hi - lo <= Fraction(1, 2**48) * (1 + abs(lo))


# -- text and JSON ----------------------------------------------------------------


@given(scalars())
def test_json_round_trip(a):
    assert TowerScalar.from_json(a.to_json()) == a


@given(scalars())
def test_string_round_trip(a):
    assert TowerScalar.parse(str(a)) == a


def test_json_shape():
    x = 1 + 3 * SQ(6)
    assert x.to_json() == [
        {"radicands": [], "coefficient": "1"},
        {"radicands": [2, 3], "coefficient": "3"},
    ]
    assert TowerScalar.from_json([{"radicands": [3, 2], "coefficient": "3"}]) == 3 * SQ(6)


def test_rejects_bad_radicand():
    with pytest.raises(ValueError):
        TowerScalar.from_json([{"radicands": [1], "coefficient": "1"}])


@given(rationals(64))
def test_rational_format_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_format_rational_omits_unit_denominator():
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-1, 2)) == "-1/2"


def test_hash_consistent_with_equality():
    assert hash(TowerScalar(Fraction(1, 2))) == hash(Fraction(1, 2))
    assert len({SQ(8) / 2, SQ(2), SQ(2) + 0}) == 1
