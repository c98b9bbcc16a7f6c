"""Closed-form operator powers: shifts on sequences, translations on functions."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from suborbit import (
    CoordinateVector,
    GridMismatchError,
    SampledFunction,
    TranslationPower,
    apply_T_power,
    apply_translation_power,
    apply_U_power,
    basis_vector,
    norm_sq,
)

SQRT2 = math.sqrt(2.0)

sparse_vectors = st.dictionaries(
    st.integers(min_value=1, max_value=30),
    st.floats(-2, 2, allow_nan=False).filter(lambda x: abs(x) > 1e-3),
    min_size=1,
    max_size=6,
).map(CoordinateVector)


def test_left_shift_examples():
    v = basis_vector(3)
    assert apply_T_power(v, 0, SQRT2).materialize() == v
    out = apply_T_power(v, 2, SQRT2)
    assert out.base == basis_vector(1) and out.exponent == 2
    assert apply_T_power(basis_vector(2), 2, SQRT2).base.is_zero()


def test_right_shift_examples():
    v = basis_vector(1)
    assert apply_U_power(v, 0, 1.5).materialize() == v
    out = apply_U_power(v, 3, 1.5)
    assert out.base == basis_vector(4) and out.exponent == -3


@given(sparse_vectors, st.integers(0, 20), st.integers(0, 20))
@settings(deadline=None)
def test_shift_powers_compose_exactly(v, p, r):
    lam = 1.25
    one_go = apply_T_power(v, p + r, lam)
    stepped = apply_T_power(apply_T_power(v, r, lam), p, lam)
    assert one_go.base == stepped.base
    assert one_go.exponent == stepped.exponent == p + r


@given(sparse_vectors, st.integers(0, 25))
@settings(deadline=None)
def test_retraction_and_coimage(v, p):
    lam = SQRT2
    back = apply_T_power(apply_U_power(v, p, lam), p, lam)
    assert back.base == v and back.exponent == 0
    clipped = apply_U_power(apply_T_power(v, p, lam), p, lam)
    expected = CoordinateVector({j: a for j, a in v.items() if j > p})
    assert clipped.base == expected


@given(sparse_vectors, st.integers(0, 40))
@settings(deadline=None)
def test_right_shift_scales_norm_in_log_domain(v, p):
    lam = 1.7
    out = apply_U_power(v, p, lam)
    expected = -p * math.log(lam) + 0.5 * math.log(norm_sq(v))
    assert out.log_norm() == pytest.approx(expected, abs=1e-12)


# --- translations -------------------------------------------------------------

def chi(q, lo, hi):
    return SampledFunction.indicator(q, lo, hi)


def test_translation_identity_power_still_truncates():
    f = chi(4, -1, 1)
    out = apply_translation_power(f, TranslationPower("T1", 0, SQRT2))
    assert out.base.support_interval() == (0, 1)
    assert out.exponent == 0


def test_forward_truncated_translation():
    f = chi(4, 1, 2)
    out = apply_translation_power(f, TranslationPower("T1", 1, SQRT2))
    assert out.base == chi(4, 0, 1)
    assert out.exponent == 1


def test_backward_translation_pair():
    f = chi(4, 0, 1)
    out = apply_translation_power(f, TranslationPower("U2", 2, SQRT2))
    assert out.base == chi(4, -2, -1)
    assert out.exponent == -2


def test_cutoff_translation():
    f = chi(4, 0, 2)
    op = TranslationPower("T2", 1, SQRT2, cutoff=Fraction(5, 2))
    out = apply_translation_power(f, op)
    # support moves to [1, 3) and the cutoff keeps samples at x <= 2.5
    assert out.base.support_interval() == (Fraction(1), Fraction(11, 4))
    assert out.exponent == 1


def test_off_grid_translation_rejected():
    f = chi(4, 0, 1)
    with pytest.raises(GridMismatchError):
        apply_translation_power(f, TranslationPower("U1", Fraction(1, 3), SQRT2))


@given(st.integers(0, 64))
@settings(deadline=None)
def test_single_steps_equal_closed_form(steps):
    q = 8
    f = SampledFunction(q, -5, [1.0, -0.5, 2.0, 0.25])
    t = Fraction(steps, q)
    closed = apply_translation_power(f, TranslationPower("T1", t, SQRT2))
    walked = f
    exponent = Fraction(0)
    for _ in range(steps):
        step = apply_translation_power(walked, TranslationPower("T1", Fraction(1, q), SQRT2))
        walked = step.base
        exponent += Fraction(1, q)
    # one final truncation on the closed form equals step-by-step truncation
    final = apply_translation_power(walked, TranslationPower("T1", 0, SQRT2))
    assert closed.base == final.base
    assert closed.exponent == exponent
