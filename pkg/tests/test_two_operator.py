"""Partitioned families on R, branch schedules, Gabor enumeration."""

import math
from fractions import Fraction

import pytest

from suborbit import (
    FrameFamily,
    GaborSpec,
    PowerSchedule,
    PreconditionError,
    SampledFunction,
    ScheduleViolationError,
    SupportIntervalProfile,
    gabor_family,
    gabor_schedules,
    inner,
    norm_sq,
    partition_frame,
    residual_two_operator,
    schedules_l2r,
    verify_two_operator,
)
from suborbit.two_operator import _build_function_generator, modulate

SQRT2 = math.sqrt(2.0)


def chi(q, lo, hi):
    return SampledFunction.indicator(q, lo, hi)


# --- partition ------------------------------------------------------------------

def test_partition_flags_empty_branch():
    part = partition_frame(FrameFamily((chi(4, 0, 1), chi(4, 2, 3))))
    assert part.remaining is None
    assert any("remaining" in w for w in part.warnings)


def test_partition_two_sided():
    part = partition_frame(FrameFamily((chi(4, 0, 1), chi(4, -1, 0))))
    assert len(part.positive) == 1 and len(part.remaining) == 1
    assert part.profile.L == 1
    assert part.positive_positions == (0,) and part.remaining_positions == (1,)
    assert part.profile.a == (0,) and part.profile.b == (1,)
    assert part.profile.c == (-1,) and part.profile.d == (0,)


def test_partition_gabor_translates_by_sign():
    spec = GaborSpec(window=chi(8, 0, 1), a=1, b=1.0, m_range=2, n_range=2)
    fams = gabor_family(spec)
    assert all(n >= 0 for _, n in fams.positive_pairs)
    assert all(n <= -1 for _, n in fams.remaining_pairs)


# --- schedules ------------------------------------------------------------------

def _profile(b_vals, c_vals, L):
    return SupportIntervalProfile(
        a=tuple(Fraction(0) for _ in b_vals),
        b=tuple(Fraction(v) for v in b_vals),
        c=tuple(Fraction(v) for v in c_vals),
        d=tuple(Fraction(v) + 1 for v in c_vals),
        L=Fraction(L),
    )


def test_branch_schedules_start_at_zero():
    profile = _profile([1, 1], [-1, -1], 1)
    alpha, gamma = schedules_l2r(profile, SQRT2, 2.0, 0.5, 3, q=4)
    assert alpha.alpha(1) == 0 and gamma.alpha(1) == 0


def test_alpha_gap_frozen_example():
    # b(k) = k, lambda = sqrt2, B = 2, eps = 1/2: the log term is k+4
    profile = _profile([1, 2, 3, 4], [-1, -1, -1, -1], 4)
    alpha, _ = schedules_l2r(profile, SQRT2, 2.0, 0.5, 5, q=1)
    for k in range(1, 5):
        assert alpha.gap(k) == k + 4
    assert alpha.alphas == (0, 5, 11, 18, 26)


def test_gamma_gap_uses_cutoff_minus_left_endpoint():
    # L - c(k) dominates the log term when c(k) is far negative
    profile = _profile([1, 1], [-40, -50], 2)
    _, gamma = schedules_l2r(profile, SQRT2, 2.0, 0.5, 3, q=2)
    assert gamma.gap(1) >= 42
    assert gamma.gap(2) >= 52


def test_gamma_gap_strict_when_support_binds():
    # log term smaller than L - c(k): gap must exceed L - c(k) by one grid step
    profile = _profile([1], [-30], 1)
    _, gamma = schedules_l2r(profile, 8.0, 2.0, 0.5, 2, q=4)
    assert gamma.gap(1) == Fraction(31) + Fraction(1, 4)


# --- generators and residuals -----------------------------------------------------

def test_generator_two_indicator_blocks():
    fam = FrameFamily((chi(4, 0, 1), chi(4, 0, 1)))
    sched = PowerSchedule((Fraction(0), Fraction(5)))
    gen = _build_function_generator(fam, sched, SQRT2, moves_left=False,
                                    n_terms=2, upper=2.0)
    phi = gen.phi()
    assert phi.support_interval() == (0, 6) or phi.sample_at(0) == 1.0
    assert phi.sample_at(5 * 4) == pytest.approx(2.0 ** -2.5, rel=1e-15)
    assert inner(gen.terms[0].block, gen.terms[1].block) == 0


def test_generator_rejects_overlap():
    fam = FrameFamily((chi(4, 0, 2), chi(4, 0, 1)))
    with pytest.raises(ScheduleViolationError):
        _build_function_generator(fam, PowerSchedule((Fraction(0), Fraction(1))),
                                  SQRT2, moves_left=False, n_terms=2, upper=2.0)


def test_residual_single_element_branch():
    fam = FrameFamily((chi(4, 0, 1),))
    profile = _profile([1], [-1], 1)
    measured, bound = residual_two_operator(
        fam, PowerSchedule((Fraction(0), Fraction(2))), SQRT2, 1, profile
    )
    assert measured == 0 and bound > 0


def test_residual_two_element_branch_frozen():
    fam = FrameFamily((chi(4, 0, 1), chi(4, 0, 1)))
    profile = _profile([1, 1], [-1], 1)
    sched = PowerSchedule((Fraction(0), Fraction(5), Fraction(11)))
    measured, bound = residual_two_operator(fam, sched, SQRT2, 1, profile, upper=2.0)
    assert measured == pytest.approx(2.0 ** -5, rel=1e-13)
    assert measured <= bound


def test_residual_asserts_cutoff_annihilation():
    fam = FrameFamily((chi(4, 0, 3), chi(4, 0, 1)))
    profile = _profile([3, 1], [-1], 3)
    sched = PowerSchedule((Fraction(0), Fraction(2), Fraction(5)))
    with pytest.raises(ScheduleViolationError):
        residual_two_operator(fam, sched, SQRT2, 2, profile, upper=2.0)


# --- Gabor enumeration -------------------------------------------------------------

def test_gabor_first_elements_are_pinned():
    spec = GaborSpec(window=chi(8, 0, 1), a=1, b=1.0, m_range=2, n_range=2)
    fams = gabor_family(spec)
    assert fams.positive[0] == spec.window
    assert fams.remaining[0] == spec.window.shift_steps(-8)
    assert fams.positive_pairs[0] == (0, 0)
    assert fams.remaining_pairs[0] == (0, -1)


@pytest.mark.parametrize("m_range", [0, 2, 4])
@pytest.mark.parametrize("n_range", [1, 2, 3])
def test_gabor_path_unit_steps_and_coverage(m_range, n_range):
    spec = GaborSpec(window=chi(4, 0, 1), a=1, b=1.0,
                     m_range=m_range, n_range=n_range)
    fams = gabor_family(spec)
    for pairs, rows in ((fams.positive_pairs, range(0, n_range + 1)),
                        (fams.remaining_pairs, range(-n_range, 0))):
        for (m1, n1), (m2, n2) in zip(pairs, pairs[1:]):
            assert abs(m1 - m2) + abs(n1 - n2) == 1
        if m_range == 0 or (pairs is fams.remaining_pairs and n_range == 1):
            continue
        expected = {(m, n) for m in range(-m_range, m_range + 1) for n in rows}
        assert set(pairs) == expected and len(pairs) == len(expected)


def test_gabor_support_growth_within_one_step():
    spec = GaborSpec(window=chi(4, 0, 1), a=1, b=1.0, m_range=2, n_range=3)
    fams = gabor_family(spec)
    for k, (ell, r) in enumerate(zip(fams.ell, fams.r), start=1):
        assert ell <= k
    for k, r in enumerate(fams.r, start=1):
        assert r <= k
    # supp g_{k+1} within supp g_k shifted by at most one time step
    for f, g in zip(fams.positive.elements, fams.positive.elements[1:]):
        lo1, hi1 = f.support_interval()
        lo2, hi2 = g.support_interval()
        assert abs(lo2 - lo1) <= spec.a and abs(hi2 - hi1) <= spec.a


def test_modulation_preserves_norm_and_support():
    f = chi(8, 0, 1)
    g = modulate(f, 3.0)
    assert norm_sq(g) == pytest.approx(norm_sq(f), rel=1e-15)
    assert g.support_interval() == f.support_interval()


def test_gabor_requires_even_m_range():
    with pytest.raises(PreconditionError):
        GaborSpec(window=chi(4, 0, 1), a=1, b=1.0, m_range=3, n_range=2)


def test_gabor_schedules_frozen_and_recursive():
    alpha, gamma = gabor_schedules(1, 1, N=1, j=1, count=11)
    assert alpha.alphas[:4] == (0, 6, 14, 24)
    assert gamma.alphas[:4] == (0, 7, 16, 27)
    for k in range(1, 11):
        assert alpha.gap(k) == 1 + 2 * k - 1 + 1 + 1 + 2
        assert gamma.gap(k) == 1 + 2 * k + 1 + 1 + 2
    assert all(a.denominator == 1 for a in alpha.alphas)


# --- pipeline ----------------------------------------------------------------------

def test_verify_gabor_end_to_end():
    spec = GaborSpec(window=chi(16, 0, 1), a=1, b=1.0, m_range=2, n_range=2)
    out = verify_two_operator(spec, SQRT2, eps=0.25, count=6, N=1, j=1)
    assert out.table.all_pass
    assert out.section["union_is_eps_approximation"]
    assert out.section["branch_budgets_hold"]
    assert out.report.all_bounds_hold
    assert out.all_passed


def test_verify_single_branch_degenerate():
    fam = FrameFamily(tuple(chi(4, n, n + 1) for n in range(0, 5)))
    out = verify_two_operator(fam, SQRT2, eps=0.25, count=4)
    assert out.section["branches"] == ["positive"]
    assert any("remaining" in w for w in out.section["warnings"])
    assert out.all_passed


def test_verify_rejects_large_eps():
    fam = FrameFamily((chi(4, 0, 1), chi(4, -1, 0)))
    with pytest.raises(PreconditionError) as err:
        verify_two_operator(fam, SQRT2, eps=2.0)
    assert "epsilon" in str(err.value)
