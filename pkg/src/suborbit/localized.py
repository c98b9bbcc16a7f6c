"""Suborbit approximation of exponentially localized frames in l2(N).

Here the family members need not be finitely supported; instead their
coordinates decay as |<e_j, f_k>| <= C * exp(-beta |j - k|).  The shifted
generator blocks then overlap, the left-shifted early terms no longer
vanish, and the residual at index k splits into two sums,

    f_k - T**alpha(k) phi
        = - sum_{n<k} T**(alpha(k)-alpha(n)) f_n
          - sum_{n>k} U**(alpha(n)-alpha(k)) f_n,

bounded by a geometric right tail plus a leakage term proportional to
(lam * exp(-beta))**alpha(k).  Requires ln(lam) < beta.

Residuals here are norms, not squared norms; the budget comparison squares
the measured value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import PreconditionError
from .finite_support import (
    GeneratorTerm,
    GeneratorVector,
    PowerSchedule,
    VerificationOutcome,
    _ceil_int,
    _exp_or_zero,
)
from .frames import empirical_frame_bounds, perturbation_report
from .reporting import VerificationTable
from .vectors import CoordinateVector, FrameFamily, norm_sq, scale_power

LOCALIZED_COLUMNS = (
    "k",
    "alpha_k",
    "gap",
    "measured",
    "bound_shift_part",
    "bound_leak_part",
    "residual_bound",
    "budget_eps_2k",
    "pass",
)


@dataclass(frozen=True)
class LocalizationProfile:
    """Certified coordinate decay: |<e_j, f_k>| <= C exp(-beta |j-k|)
    for every (j, k) inside the verified window."""

    C: float
    beta: float
    verified_through: tuple  # (max j, max k)

    def __post_init__(self):
        if not self.C > 0:
            raise PreconditionError("C", "must be positive")
        if not self.beta > 0:
            raise PreconditionError("beta", "must be positive")


class LocalizationCheck(NamedTuple):
    ok: bool
    worst_ratio: float          # max over stored entries of |entry| * e^{beta|j-k|} / C
    offender: tuple             # (j, k) achieving the worst ratio
    profile: LocalizationProfile


def check_localization(
    family: FrameFamily, C: float, beta: float, window: tuple | None = None
) -> LocalizationCheck:
    """Verify the decay inequality on every stored coordinate.

    ``window`` is (max_j, max_k) and must cover all stored entries; it
    defaults to exactly that coverage.
    """
    if not C > 0:
        raise PreconditionError("C", "must be positive")
    if not beta > 0:
        raise PreconditionError("beta", "must be positive")
    max_j = 0
    for f in family.elements:
        if not isinstance(f, CoordinateVector):
            raise PreconditionError("elements", "localization applies to coordinate vectors")
        top = f.max_index()
        if top is not None:
            max_j = max(max_j, top)
    if window is None:
        window = (max_j, len(family))
    if window[0] < max_j or window[1] < len(family):
        raise PreconditionError(
            "window", f"window {window} does not cover stored entries up to "
                      f"(j={max_j}, k={len(family)})"
        )
    worst = 0.0
    offender = (0, 0)
    for k, f in enumerate(family.elements, start=1):
        for j, amp in f.items():
            ratio = abs(amp) * math.exp(beta * abs(j - k)) / C
            if ratio > worst:
                worst = ratio
                offender = (j, k)
    profile = LocalizationProfile(C=C, beta=beta, verified_through=window)
    return LocalizationCheck(ok=worst <= 1.0 + 1e-12, worst_ratio=worst,
                             offender=offender, profile=profile)


def _leak_constant(C: float, beta: float) -> float:
    return C * math.exp(-beta) / math.sqrt(1.0 - math.exp(-2.0 * beta))


def schedule_localized(
    C: float, beta: float, lam: float, upper: float, eps: float, count: int
) -> PowerSchedule:
    """Recursive schedule: alpha(k+1) is the ceiling of the largest of

      1. alpha(k) + k - 1,
      2. alpha(k) + [(k/2+1) ln2 + ln(lam/(lam-1)) + ln sqrt(B/eps)] / ln lam,
      3. [(k/2+3/2) ln2 + ln(sum_{n<=k} (lam e^-beta)**-alpha(n) e^{beta n})
          + ln(C e^-beta / sqrt(1 - e^-2beta)) - ln sqrt(eps)] / (beta - ln lam).

    The running sum inside the third expression is kept in log space.
    """
    log_lam = math.log(lam)
    if not log_lam < beta:
        raise PreconditionError("lambda", f"need ln(lambda) < beta, got ln({lam})={log_lam} >= {beta}")
    if not eps > 0:
        raise PreconditionError("epsilon", "must be positive")
    if not upper > 0:
        raise PreconditionError("B", "must be positive")
    if count < 1:
        raise PreconditionError("count", "need at least one power")
    decay = beta - log_lam
    log_leak = math.log(_leak_constant(C, beta))
    alphas = [0]
    provenance = []
    log_sum = beta * 1.0  # (beta - ln lam) * alpha(1) + beta * 1 with alpha(1) = 0
    for k in range(1, count):
        a_k = alphas[-1]
        e1 = a_k + k - 1.0
        e2 = a_k + (
            (k / 2.0 + 1.0) * math.log(2.0)
            + math.log(lam / (lam - 1.0))
            + 0.5 * math.log(upper / eps)
        ) / log_lam
        e3 = (
            (k / 2.0 + 1.5) * math.log(2.0)
            + log_sum
            + log_leak
            - 0.5 * math.log(eps)
        ) / decay
        best = max(e1, e2, e3)
        which = ("admissibility", "tail", "leakage")[(e1, e2, e3).index(best)]
        nxt = _ceil_int(best)
        alphas.append(nxt)
        provenance.append(which)
        log_sum = np.logaddexp(log_sum, decay * nxt + beta * (k + 1))
    return PowerSchedule(tuple(alphas), tuple(provenance))


def build_generator_localized(
    family: FrameFamily,
    sched: PowerSchedule,
    lam: float,
    n_terms: int | None = None,
    upper: float | None = None,
) -> GeneratorVector:
    """Generator series for localized families.

    Blocks may overlap here, so no disjointness is enforced; convergence
    rests on the geometric decay of the term norms.  The tail bound is the
    square of the triangle-inequality norm bound on the omitted part.
    """
    size = len(family)
    n_terms = size if n_terms is None else min(int(n_terms), size)
    if n_terms < 1:
        raise PreconditionError("n_terms", "need at least one series term")
    need = n_terms + 1 if n_terms < size else n_terms
    if len(sched) < need:
        raise PreconditionError("schedule", f"schedule covers {len(sched)} powers, need {need}")
    if upper is None:
        upper = family.declared_upper or empirical_frame_bounds(family)[1]
    log_lam = math.log(lam)
    terms = []
    skipped = []
    tail_norm = 0.0
    for n in range(1, n_terms + 1):
        alpha_n = sched.alpha(n)
        log_scale = -float(alpha_n) * log_lam
        if log_scale < -740.0:
            skipped.append(n)
            tail_norm += _exp_or_zero(log_scale + 0.5 * math.log(norm_sq(family[n - 1])))
            continue
        terms.append(GeneratorTerm(n=n, alpha=alpha_n, block=family[n - 1].shift(alpha_n)))
    if n_terms < size:
        tail_norm += (
            math.sqrt(upper)
            * _exp_or_zero(-float(sched.alpha(n_terms + 1)) * log_lam)
            * lam
            / (lam - 1.0)
        )
    return GeneratorVector(
        terms=tuple(terms),
        n_terms=n_terms,
        tail_bound=tail_norm ** 2,
        lam=lam,
        skipped=tuple(skipped),
    )


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

def _split_residual_vector(
    family: FrameFamily, sched: PowerSchedule, lam: float, k: int, n_terms: int
) -> CoordinateVector:
    """T**alpha(k) phi - f_k, materialised from the two split sums."""
    acc = CoordinateVector()
    alpha_k = sched.alpha(k)
    for n in range(1, n_terms + 1):
        if n == k:
            continue
        if n < k:
            delta = alpha_k - sched.alpha(n)
            block = family[n - 1].shift(-delta)
            if block.is_zero():
                continue
            acc = acc + scale_power(lam, delta) * block
        else:
            delta = sched.alpha(n) - alpha_k
            if -float(delta) * math.log(lam) < -740.0:
                continue
            acc = acc + scale_power(lam, -delta) * family[n - 1].shift(delta)
    return acc


def _stored_support(f: CoordinateVector, n: int) -> tuple[int, int]:
    idx = sorted(f.indices())
    if not idx:
        # everything was truncated away: bound the whole analytic mass
        return n + 1, n
    return idx[0], idx[-1]


def _truncation_charge(
    family: FrameFamily,
    sched: PowerSchedule,
    lam: float,
    C: float,
    beta: float,
    k: int,
    n_terms: int,
) -> float:
    """Norm bound on the residual error caused by coordinate truncation.

    Each stored element may have lost true coordinates outside its stored
    support; the loss is bounded through the localization inequality and
    propagated through the same shifts as the residual itself (all in log
    space, since the propagated pieces are minuscule).
    """
    log_lam = math.log(lam)
    denom = math.log(1.0 - math.exp(-2.0 * beta))  # ln(1 - e^-2beta)

    def log_right_mass(n: int, j_min: int) -> float:
        # squared-norm bound on true entries at j >= j_min (> n assumed)
        return 2.0 * (math.log(C) - beta * (j_min - n)) - denom

    def log_left_mass(n: int, lo: int, j_min: int) -> float:
        # squared-norm bound on true entries at max(1, j_min) <= j <= lo-1
        if lo <= max(1, j_min):
            return -math.inf
        return 2.0 * (math.log(C) - beta * (n - lo + 1)) - denom

    def log_dropped(n: int, j_min: int) -> float:
        lo, hi = _stored_support(family[n - 1], n)
        right = log_right_mass(n, max(hi + 1, j_min, n + 1))
        left = log_left_mass(n, lo, j_min)
        return 0.5 * np.logaddexp(right, left)

    pieces = [log_dropped(k, 1)]
    alpha_k = sched.alpha(k)
    for n in range(1, n_terms + 1):
        if n == k:
            continue
        if n < k:
            delta = alpha_k - sched.alpha(n)
            pieces.append(float(delta) * log_lam + log_dropped(n, delta + 1))
        else:
            delta = sched.alpha(n) - alpha_k
            pieces.append(-float(delta) * log_lam + log_dropped(n, 1))
    return math.fsum(_exp_or_zero(p) for p in pieces)


class LocalizedResidual(NamedTuple):
    measured: float        # norm, including any truncation charge
    bound: float           # shift part + leakage part
    bound_shift_part: float
    bound_leak_part: float


def residual_localized(
    family: FrameFamily,
    sched: PowerSchedule,
    lam: float,
    C: float,
    beta: float,
    k: int,
    n_terms: int | None = None,
    trunc_tol: float | None = None,
    upper: float | None = None,
) -> LocalizedResidual:
    """Measured residual norm ||f_k - T**alpha(k) phi|| and its two-part bound.

    Unlike the finitely supported case the n < k terms do not vanish and
    are evaluated.  Passing ``trunc_tol`` declares that the family is
    stored truncated; the analytic bound on the dropped mass is then added
    to the measured value so the comparison stays sound.  ``trunc_tol``
    None means the stored coordinates are complete.
    """
    size = len(family)
    n_terms = size if n_terms is None else min(int(n_terms), size)
    if not 1 <= k <= n_terms:
        raise PreconditionError("k", f"k must lie in 1..{n_terms}, got {k}")
    if len(sched) < k + 1:
        raise PreconditionError("schedule", f"need alpha({k + 1}) for the bound")
    if upper is None:
        upper = family.declared_upper or empirical_frame_bounds(family)[1]
    residual_vec = _split_residual_vector(family, sched, lam, k, n_terms)
    measured = math.sqrt(norm_sq(residual_vec))
    if trunc_tol is not None:
        measured += _truncation_charge(family, sched, lam, C, beta, k, n_terms)

    log_lam = math.log(lam)
    gap = sched.gap(k)
    shift_part = (lam / (lam - 1.0)) * math.sqrt(upper) * scale_power(lam, -gap)
    if k == 1:
        leak_part = 0.0
    else:
        log_sum = -math.inf
        for n in range(1, k):
            log_sum = np.logaddexp(
                log_sum, (beta - log_lam) * float(sched.alpha(n)) + beta * n
            )
        leak_part = _exp_or_zero(
            (log_lam - beta) * float(sched.alpha(k))
            + math.log(_leak_constant(C, beta))
            + log_sum
        )
    return LocalizedResidual(
        measured=measured,
        bound=shift_part + leak_part,
        bound_shift_part=shift_part,
        bound_leak_part=leak_part,
    )


def localized_suborbit(
    family: FrameFamily, sched: PowerSchedule, lam: float, count: int, n_terms: int
) -> FrameFamily:
    """{T**alpha(k) phi} materialised through the split identity."""
    elems = []
    for k in range(1, count + 1):
        elems.append(
            family[k - 1] + _split_residual_vector(family, sched, lam, k, n_terms)
        )
    return FrameFamily(tuple(elems))


def verify_localized(
    family: FrameFamily,
    lam: float,
    C: float,
    beta: float,
    eps: float,
    upper: float | None = None,
    count: int | None = None,
    n_terms: int | None = None,
    trunc_tol: float | None = None,
) -> VerificationOutcome:
    """Full localized pipeline: localization check, schedule, generator,
    per-k residual rows (norm vs two-part bound, squared norm vs budget),
    then the perturbation report for (family, suborbit)."""
    check = check_localization(family, C, beta)
    if not check.ok:
        j, k = check.offender
        raise PreconditionError(
            "localization",
            f"decay inequality fails at coordinate (j={j}, k={k}) "
            f"with ratio {check.worst_ratio}",
        )
    size = len(family)
    count = size if count is None else min(int(count), size)
    n_terms = min(count + 8, size) if n_terms is None else min(int(n_terms), size)
    if count > n_terms:
        raise PreconditionError("count", f"cannot verify {count} rows with {n_terms} terms")
    section = FrameFamily(family.elements[:count])
    a_emp, b_emp_section = empirical_frame_bounds(section)
    if not 0 < eps < a_emp:
        raise PreconditionError(
            "epsilon", f"need 0 < eps < A_emp, got eps={eps} with A_emp={a_emp}"
        )
    if upper is None:
        upper = family.declared_upper or empirical_frame_bounds(family)[1]
    sched = schedule_localized(C, beta, lam, upper, eps, max(count, n_terms) + 1)
    generator = build_generator_localized(family, sched, lam, n_terms=n_terms, upper=upper)
    tail_norm = math.sqrt(generator.tail_bound)

    table = VerificationTable(LOCALIZED_COLUMNS)
    for k in range(1, count + 1):
        res = residual_localized(
            family, sched, lam, C, beta, k,
            n_terms=n_terms, trunc_tol=trunc_tol, upper=upper,
        )
        measured_total = res.measured + tail_norm
        budget = eps * 2.0 ** (-k)
        table.add_row(
            k=k,
            alpha_k=sched.alpha(k),
            gap=sched.gap(k),
            measured=measured_total,
            bound_shift_part=res.bound_shift_part,
            bound_leak_part=res.bound_leak_part,
            residual_bound=res.bound,
            budget_eps_2k=budget,
            **{"pass": measured_total <= res.bound and measured_total ** 2 <= budget},
        )

    approx = localized_suborbit(family, sched, lam, count, n_terms)
    report = perturbation_report(
        section, approx, eps, lower=a_emp, upper=max(upper, b_emp_section)
    )
    return VerificationOutcome(
        table=table,
        report=report,
        suborbit=approx,
        schedule=sched,
        generator=generator,
        section={
            "kind": "localized",
            "section_size": count,
            "n_terms": n_terms,
            "lambda": lam,
            "epsilon": eps,
            "C": C,
            "beta": beta,
            "upper_used": upper,
            "lower_empirical": a_emp,
            "upper_empirical": b_emp_section,
        },
    )


def exponential_profile_family(
    beta: float, size: int, C: float = 1.0, trunc_tol: float = 1e-14
) -> FrameFamily:
    """Test family f_k(j) = C * exp(-beta |j - k|), stored truncated where
    the coordinate falls below trunc_tol * C."""
    if not beta > 0:
        raise PreconditionError("beta", "must be positive")
    radius = math.ceil(-math.log(trunc_tol) / beta)
    elems = []
    for k in range(1, size + 1):
        entries = {
            j: C * math.exp(-beta * abs(j - k))
            for j in range(max(1, k - radius), k + radius + 1)
        }
        elems.append(CoordinateVector(entries))
    return FrameFamily(tuple(elems))
