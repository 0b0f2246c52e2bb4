from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from fuchsq.errors import FactorizationOutOfRange, ValuationOfZero
from fuchsq.exactnum import (
    HalfInt,
    Q,
    canonical_projective,
    is_square_free,
    mat2,
    next_prime_3mod4,
    primitive_integer_vector,
    projectively_equal,
    qstr,
    rational_sqrt,
    square_free_part,
    squarefree_mul,
    vp,
    vp_half,
    vp_of_sqrt,
)

nonzero_rationals = st.fractions().filter(lambda x: x != 0)


def test_rationals_are_reduced_and_serialize_compactly():
    assert Q("6/4") == Fraction(3, 2)
    assert qstr(Fraction(-6, 4)) == "-3/2"
    assert qstr(Fraction(5)) == "5"
    assert Q(qstr(Fraction(-7, 9))) == Fraction(-7, 9)


def test_q_rejects_bool_and_floats():
    with pytest.raises(TypeError):
        Q(True)
    with pytest.raises(TypeError):
        Q(0.5)


@pytest.mark.parametrize("x,p,expected", [("18", 3, 2), ("5/27", 3, -3), ("7", 3, 0), ("-98/3", 7, 2)])
def test_vp_examples(x, p, expected):
    assert vp(x, p) == expected


def test_vp_of_zero_raises():
    with pytest.raises(ValuationOfZero):
        vp(0, 3)


@given(nonzero_rationals, st.sampled_from([2, 3, 7, 11]))
def test_vp_matches_oracle(x, p):
    assert vp(x, p) == oracles.vp(x, p)


@given(nonzero_rationals, nonzero_rationals, st.sampled_from([3, 7]))
def test_vp_is_additive(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)


def test_half_valuations():
    assert vp_of_sqrt(3, 3) == HalfInt.of(Fraction(1, 2))
    assert vp_of_sqrt(Fraction(3, 16), 3) == HalfInt.of(Fraction(1, 2))
    assert vp_of_sqrt(9, 3).is_integer
    assert vp_half(0, 5).is_infinite
    assert HalfInt.infinity() > HalfInt.of(10**6)
    assert HalfInt.of(Fraction(1, 2)) < 1
    assert str(HalfInt.of(Fraction(-3, 2))) == "-3/2"
    with pytest.raises(ValueError):
        HalfInt.of(Fraction(1, 3))


def test_square_free_checks():
    assert is_square_free(1) and is_square_free(30)
    assert not is_square_free(12)
    with pytest.raises(FactorizationOutOfRange, match="factorization out of range"):
        is_square_free(10**13)


def test_square_free_cap_from_environment(monkeypatch):
    monkeypatch.setenv("FUCHSIAN_TRIAL_DIVISION_CAP", "100")
    assert is_square_free(97)
    with pytest.raises(FactorizationOutOfRange):
        is_square_free(101)


@given(st.integers(min_value=1, max_value=5000), st.integers(min_value=1, max_value=5000))
def test_square_free_part_matches_trial_division(n, d):
    assert square_free_part(Fraction(n, d)) == oracles.square_class(Fraction(n, d))


def test_squarefree_mul_is_the_square_class_product():
    assert squarefree_mul(6, 10) == 15
    assert squarefree_mul(3, 3) == 1
    assert squarefree_mul(1, 7) == 7


@pytest.mark.parametrize("m,expected", [(0, 3), (3, 7), (7, 11), (11, 19), (100, 103)])
def test_next_prime_3mod4(m, expected):
    assert next_prime_3mod4(m) == expected


def test_rational_sqrt():
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(2) is None
    assert rational_sqrt(-1) is None


def test_primitive_vector_and_projective_canonical_form():
    assert primitive_integer_vector([Fraction(1, 2), Fraction(-3, 4), 1]) == (2, -3, 4)
    m = mat2(Fraction(-1, 2), Fraction(-1, 2), 2, Fraction(1, 2))
    assert canonical_projective(m) == mat2(1, 1, -4, -1)
    assert projectively_equal(mat2(-1, -1, 4, 1), mat2(1, 1, -4, -1))
    assert not projectively_equal(mat2(1, 0, 0, 2), mat2(1, 0, 0, 3))
