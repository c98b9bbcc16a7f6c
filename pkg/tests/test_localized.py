"""Localization checks, recursive schedules and split residual bounds."""

import math

import numpy as np
import pytest

from suborbit import (
    FrameFamily,
    PreconditionError,
    apply_T_power,
    apply_U_power,
    basis_vector,
    canonical_basis_family,
    check_localization,
    empirical_frame_bounds,
    exponential_profile_family,
    norm_sq,
    residual_finite_support,
    residual_localized,
    schedule_localized,
    support_profile,
    verify_localized,
)
from suborbit.finite_support import schedule_finite_support

e = basis_vector
LAM = 1.1
BETA = 0.5


def bump_family(size=6, beta=BETA):
    return exponential_profile_family(beta=beta, size=size, C=1.0, trunc_tol=1e-14)


# --- localization check ---------------------------------------------------------

def test_onb_is_localized_for_any_beta():
    fam = canonical_basis_family(5)
    assert check_localization(fam, C=1.0, beta=2.3).ok
    assert check_localization(fam, C=1.0, beta=0.01).ok


def test_bump_family_attains_equality_on_diagonal():
    fam = bump_family()
    res = check_localization(fam, C=1.0, beta=BETA)
    assert res.ok
    assert res.worst_ratio == pytest.approx(1.0)
    # the diagonal attains the bound exactly
    for k, f in enumerate(fam.elements, start=1):
        assert f.get(k) == 1.0


def test_scaled_onb_fails_on_diagonal():
    fam = FrameFamily(tuple(2.0 * e(k) for k in range(1, 5)))
    res = check_localization(fam, C=1.0, beta=1.0)
    assert not res.ok
    assert res.offender[0] == res.offender[1]
    assert res.worst_ratio == pytest.approx(2.0)


def test_window_must_cover_entries():
    fam = bump_family(4)
    with pytest.raises(PreconditionError):
        check_localization(fam, C=1.0, beta=BETA, window=(3, 4))


# --- schedule -------------------------------------------------------------------

def _three_expressions(alphas, k, C, beta, lam, upper, eps):
    """Independent re-evaluation of the three gap expressions."""
    a_k = alphas[k - 1]
    e1 = a_k + k - 1
    e2 = a_k + ((k / 2 + 1) * math.log(2) + math.log(lam / (lam - 1))
                + math.log(math.sqrt(upper / eps))) / math.log(lam)
    running = sum(
        (lam * math.exp(-beta)) ** (-alphas[n - 1]) * math.exp(beta * n)
        for n in range(1, k + 1)
    )
    e3 = ((k / 2 + 1.5) * math.log(2) + math.log(running)
          + math.log(C * math.exp(-beta) / math.sqrt(1 - math.exp(-2 * beta)))
          - math.log(math.sqrt(eps))) / (beta - math.log(lam))
    return e1, e2, e3


def test_schedule_starts_at_zero_and_matches_oracle():
    C, upper, eps = 1.0, 2.0, 0.5
    sched = schedule_localized(C, BETA, LAM, upper, eps, 6)
    assert sched.alpha(1) == 0
    alphas = list(sched.alphas)
    for k in range(1, 6):
        exprs = _three_expressions(alphas, k, C, BETA, LAM, upper, eps)
        assert alphas[k] == math.ceil(max(exprs) - 1e-9)


def test_schedule_monotone_in_eps():
    previous = None
    for eps in (0.5, 0.25, 0.1, 0.05, 0.01):
        sched = schedule_localized(1.0, BETA, LAM, 2.0, eps, 6)
        if previous is not None:
            assert all(b >= a for a, b in zip(previous, sched.alphas))
        previous = sched.alphas


def test_schedule_requires_log_lambda_below_beta():
    with pytest.raises(PreconditionError):
        schedule_localized(1.0, 0.05, LAM, 2.0, 0.5, 4)


def test_schedule_admissibility_gap():
    sched = schedule_localized(1.0, BETA, LAM, 4.0, 0.1, 8)
    for k in range(2, 9):
        assert sched.alpha(k) >= sched.alpha(k - 1) + k - 2


# --- residuals ------------------------------------------------------------------

def test_residual_on_onb_matches_finite_support_norm():
    fam = canonical_basis_family(6)
    sched = schedule_localized(1.0, BETA, LAM, 2.0, 0.25, 7)
    for k in range(1, 7):
        loc = residual_localized(fam, sched, LAM, 1.0, BETA, k, upper=2.0)
        sq, _ = residual_finite_support(fam, sched, LAM, k, upper=2.0)
        assert loc.measured == math.sqrt(sq)


def test_first_residual_bound_has_no_leak_term():
    fam = bump_family()
    sched = schedule_localized(1.0, BETA, LAM, 9.0, 0.01, 7)
    res = residual_localized(fam, sched, LAM, 1.0, BETA, 1, upper=9.0)
    expected = (LAM / (LAM - 1)) * math.sqrt(9.0) * LAM ** (-sched.alpha(2))
    assert res.bound_leak_part == 0
    assert res.bound == pytest.approx(expected, rel=1e-12)


def test_split_sums_each_below_their_bound_parts():
    fam = bump_family()
    a_emp, _ = empirical_frame_bounds(fam)
    eps = 0.1 * a_emp
    upper = empirical_frame_bounds(fam)[1]
    sched = schedule_localized(1.0, BETA, LAM, upper, eps, 7)
    log_lam = math.log(LAM)
    for k in range(2, 7):
        shift_sum = 0.0
        leak_sum = 0.0
        for n in range(1, 7):
            if n == k:
                continue
            if n < k:
                delta = sched.alpha(k) - sched.alpha(n)
                part = apply_T_power(fam[n - 1], delta, LAM).materialize()
                leak_sum += math.sqrt(norm_sq(part))
            else:
                delta = sched.alpha(n) - sched.alpha(k)
                part = apply_U_power(fam[n - 1], delta, LAM).materialize()
                shift_sum += math.sqrt(norm_sq(part))
        res = residual_localized(fam, sched, LAM, 1.0, BETA, k, upper=upper)
        assert shift_sum <= res.bound_shift_part * (1 + 1e-12)
        assert leak_sum <= res.bound_leak_part * (1 + 1e-12) + 1e-15


def test_truncation_charge_is_tiny_but_positive():
    fam = bump_family()
    sched = schedule_localized(1.0, BETA, LAM, 9.0, 0.005, 7)
    bare = residual_localized(fam, sched, LAM, 1.0, BETA, 2, upper=9.0)
    charged = residual_localized(fam, sched, LAM, 1.0, BETA, 2, upper=9.0,
                                 trunc_tol=1e-14)
    assert charged.measured > bare.measured
    assert charged.measured - bare.measured < 1e-6


# --- pipeline -------------------------------------------------------------------

def test_verify_bump_family_end_to_end():
    fam = bump_family()
    a_emp, _ = empirical_frame_bounds(fam)
    out = verify_localized(fam, LAM, C=1.0, beta=BETA, eps=0.1 * a_emp,
                           trunc_tol=1e-14)
    assert out.table.all_pass
    assert out.report.all_bounds_hold
    for row in out.table.rows:
        assert row["measured"] <= row["residual_bound"]
        assert row["measured"] ** 2 <= row["budget_eps_2k"]


def test_verify_rejects_fast_scale():
    fam = bump_family()
    with pytest.raises(PreconditionError) as err:
        verify_localized(fam, 2.0, C=1.0, beta=BETA, eps=0.005)
    assert "lambda" in str(err.value)


def test_verify_localization_failure_comes_first():
    fam = FrameFamily(tuple(3.0 * e(k) for k in range(1, 5)))
    with pytest.raises(PreconditionError) as err:
        verify_localized(fam, LAM, C=1.0, beta=BETA, eps=0.01)
    assert "localization" in str(err.value)
