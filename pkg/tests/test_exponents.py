"""Exact-rational valuation bookkeeping."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_P_vector
from ebiortho.errors import DomainError
from ebiortho.exponents import (
    ExponentVector,
    norm_valuation,
    rtilde_valuation,
    theta_lc,
    theta_val,
    valuation_deficit,
)

rationals = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=12
)


def test_vector_construction_and_balance():
    v = ExponentVector((0, 0, 0, 0), (Fraction(1, 2), Fraction(1, 2)), 0)
    assert v.balanced
    v.require_balanced()
    assert v.as7() == (0, 0, 0, 0, Fraction(1, 2), Fraction(1, 2), 0)
    bad = ExponentVector((1, 0, 0, 0), (1, 0), 0)
    assert not bad.balanced
    with pytest.raises(DomainError):
        bad.require_balanced()


def test_from7_roundtrip():
    vec = (Fraction(1, 3), 0, 0, 0, Fraction(1, 3), Fraction(1, 3), Fraction(-1, 3))
    assert ExponentVector.from7(vec).as7() == vec
    with pytest.raises(DomainError):
        ExponentVector.from7(vec[:6])


@settings(max_examples=100, deadline=None)
@given(a=rationals)
def test_theta_val_reflection_symmetry(a):
    assert theta_val(a) == theta_val(1 - a)


@settings(max_examples=100, deadline=None)
@given(a=rationals)
def test_theta_val_shift_law(a):
    # from theta(p x; p) = -theta(x; p)/x applied at x p^a
    assert theta_val(a + 1) - theta_val(a) == -a


def test_theta_val_vanishes_on_unit_interval():
    for num in range(0, 13):
        a = Fraction(num, 12)
        assert theta_val(a) == 0


def test_theta_lc_kinds():
    lc_int = theta_lc(Fraction(2))
    assert lc_int.kind == "integer_shift" and lc_int.power == -2
    lc_frac = theta_lc(Fraction(-3, 4))
    assert lc_frac.kind == "fractional_shift" and lc_frac.power == 1
    # integer-shift lc carries the (1 - x) factor
    assert lc_int.evaluate(2.0) == pytest.approx((1 - 2.0) * (-2.0) ** -2)
    assert lc_frac.evaluate(2.0) == pytest.approx(-2.0)


def test_valuations_linear_in_n():
    rng = random.Random(2)
    for _ in range(25):
        v = random_P_vector(rng, den=rng.choice([2, 3, 4, 6]))
        for n in range(5):
            assert rtilde_valuation(v, n) == n * rtilde_valuation(v, 1)
            assert norm_valuation(v, n) == n * norm_valuation(v, 1)


def test_deficit_nonnegative_random():
    rng = random.Random(3)
    for _ in range(300):
        v = random_P_vector(rng, den=rng.choice([2, 3, 4, 6, 8]))
        assert valuation_deficit(v) >= 0


def test_outside_P_rejected():
    v = ExponentVector((3, -2, 0, 0), (0, 0), 0)
    with pytest.raises(DomainError):
        rtilde_valuation(v, 1)
    with pytest.raises(DomainError):
        norm_valuation(v, 1)
    with pytest.raises(DomainError):
        valuation_deficit(v)
    # check=False skips the membership guard
    rtilde_valuation(v, 1, check=False)


def test_known_valuations_at_midpoints():
    # top face: everything balanced at zero valuation
    v = ExponentVector((0, 0, 0, 0), (Fraction(1, 2), Fraction(1, 2)), 0)
    assert rtilde_valuation(v, 2) == 0
    assert norm_valuation(v, 2) == 0
    assert valuation_deficit(v) == 0
