"""Suborbit approximation of finitely supported frames in l2(N).

Given a family {f_k} of finitely supported vectors, a scale lambda > 1 and
a tolerance eps, the construction picks strictly increasing powers
alpha(k) with alpha(1) = 0, builds the generator

    phi = sum_n  U**alpha(n) f_n,

whose shifted blocks occupy pairwise disjoint index ranges, and certifies
per k that

    ||f_k - T**alpha(k) phi||^2  <=  (B lam^2 / (lam^2 - 1)) * lam**(-2 gap_k)
                                 <=  eps * 2**-k,

where gap_k = alpha(k+1) - alpha(k).  Residuals are always evaluated
through the telescoped identity

    f_k - T**alpha(k) phi = - sum_{n > k} U**(alpha(n) - alpha(k)) f_n,

whose exponents are all nonpositive, so no lam**alpha(k) is ever formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import PreconditionError, ScheduleViolationError
from .frames import empirical_frame_bounds, perturbation_report
from .reporting import VerificationTable
from .vectors import CoordinateVector, FrameFamily, ScaledVector, norm_sq, scale_power

#: absolute fuzz subtracted before ceil() so that analytically integral
#: gap formulas are not bumped up by one from float rounding
_CEIL_FUZZ = 1e-9


def _ceil_int(x: float) -> int:
    return math.ceil(x - _CEIL_FUZZ)


def _exp_or_zero(log_value: float) -> float:
    return math.exp(log_value) if log_value > -745.0 else 0.0


@dataclass(frozen=True)
class PowerSchedule:
    """Strictly increasing powers alpha(1) = 0 < alpha(2) < ...

    ``provenance`` records, per gap, which rule produced it.  Entries are
    integers for sequence-space schedules and exact Fractions for on-grid
    translation schedules.
    """

    alphas: tuple
    provenance: tuple = ()

    def __post_init__(self):
        if not self.alphas:
            raise PreconditionError("alphas", "schedule must be nonempty")
        if self.alphas[0] != 0:
            raise PreconditionError("alphas", f"alpha(1) must be 0, got {self.alphas[0]}")
        for a, b in zip(self.alphas, self.alphas[1:]):
            if not b > a:
                raise PreconditionError("alphas", f"not strictly increasing at {a} -> {b}")

    def __len__(self):
        return len(self.alphas)

    def alpha(self, k: int):
        """1-based accessor: alpha(1) = 0."""
        if not 1 <= k <= len(self.alphas):
            raise PreconditionError("k", f"schedule covers 1..{len(self.alphas)}, got {k}")
        return self.alphas[k - 1]

    def gap(self, k: int):
        """alpha(k+1) - alpha(k)."""
        return self.alpha(k + 1) - self.alpha(k)


@dataclass(frozen=True)
class Sqrt2Config:
    """Dyadic parameters for lambda = sqrt(2): B = 2**N and eps = 2**-j."""

    N: int
    j: int

    def __post_init__(self):
        if self.N < 1:
            raise PreconditionError("N", "must be a positive integer")
        if self.j < 1:
            raise PreconditionError("j", "must be a positive integer")

    @property
    def upper(self) -> float:
        return float(2 ** self.N)

    @property
    def eps(self) -> float:
        return 2.0 ** (-self.j)


def support_profile(family: FrameFamily) -> list[int]:
    """m(k): the largest index of a nonzero coordinate of f_k."""
    out = []
    for k, f in enumerate(family.elements, start=1):
        if not isinstance(f, CoordinateVector):
            raise PreconditionError("elements", "support profile needs coordinate vectors")
        top = f.max_index()
        if top is None:
            raise PreconditionError(
                "elements", f"element {k} is the zero vector; its support size is undefined"
            )
        out.append(top)
    return out


def _log_gap_term(k: int, lam: float, upper: float, eps: float) -> float:
    return (
        k * math.log(2.0) + math.log(upper / eps) + math.log(lam * lam / (lam * lam - 1.0))
    ) / (2.0 * math.log(lam))


def schedule_finite_support(
    m: list[int], lam: float, upper: float, eps: float, count: int
) -> PowerSchedule:
    """Schedule for finitely supported families: alpha(1) = 0 and

        gap_k = m(k) + ceil( [k ln2 + ln(B/eps) + ln(lam^2/(lam^2-1))] / (2 ln lam) ).

    Adding m(k) on top of the logarithmic term keeps the shifted blocks
    disjoint while the logarithmic part alone already forces the residual
    bound below eps * 2**-k; the sum therefore satisfies both requirements
    with room to spare, and rounding up only shrinks residuals.
    """
    if not lam > 1.0:
        raise PreconditionError("lambda", f"need lambda > 1, got {lam}")
    if not eps > 0:
        raise PreconditionError("epsilon", "must be positive")
    if not upper > 0:
        raise PreconditionError("B", "upper bound must be positive")
    if count < 1:
        raise PreconditionError("count", "need at least one power")
    if len(m) < count - 1:
        raise PreconditionError("m", f"need {count - 1} support sizes, got {len(m)}")
    alphas = [0]
    provenance = []
    for k in range(1, count):
        log_term = _ceil_int(_log_gap_term(k, lam, upper, eps))
        gap = int(m[k - 1]) + log_term
        alphas.append(alphas[-1] + gap)
        provenance.append(f"m({k})={m[k - 1]} + log-term {log_term}")
    return PowerSchedule(tuple(alphas), tuple(provenance))


def schedule_sqrt2(
    m: list[int], cfg: Sqrt2Config, restricted: bool, count: int
) -> PowerSchedule:
    """Closed-form schedule for lambda = sqrt(2), exact integer arithmetic.

    Unrestricted: alpha(k) = (k-1)(N+j+1) + k(k-1)/2 + sum_{l<k} m(l).
    Restricted (valid when m(k) <= N+j+1+k for all covered k):
    alpha(k) = (k-1)(N+j+1) + k(k-1)/2.
    """
    if count < 1:
        raise PreconditionError("count", "need at least one power")
    base = cfg.N + cfg.j + 1
    if restricted:
        for k in range(1, count):
            if k <= len(m) and m[k - 1] > base + k:
                raise PreconditionError(
                    "m", f"restricted form needs m(k) <= N+j+1+k; fails at k={k} "
                         f"with m({k})={m[k - 1]} > {base + k}"
                )
        alphas = [(k - 1) * base + k * (k - 1) // 2 for k in range(1, count + 1)]
        rule = "sqrt2-restricted"
    else:
        if len(m) < count - 1:
            raise PreconditionError("m", f"need {count - 1} support sizes, got {len(m)}")
        alphas = []
        acc = 0
        for k in range(1, count + 1):
            alphas.append((k - 1) * base + k * (k - 1) // 2 + acc)
            if k - 1 < len(m):
                acc += int(m[k - 1])
        rule = "sqrt2-closed-form"
    return PowerSchedule(tuple(alphas), tuple(rule for _ in range(count - 1)))


# ---------------------------------------------------------------------------
# generator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorTerm:
    """One series term: the n-th family element shifted by alpha(n), with
    the exact exponent -alpha(n) kept in the ledger."""

    n: int
    alpha: object
    block: object  # shifted, unscaled vector

    @property
    def exponent(self):
        return -self.alpha


@dataclass(frozen=True)
class GeneratorVector:
    """Truncated generator series with a per-term lambda-exponent ledger.

    ``tail_bound`` bounds the squared norm of everything omitted from the
    series: the analytic geometric tail when the series was truncated
    before the family ran out, plus the accounted mass of any term whose
    scale underflowed double precision.  ``skipped`` lists those terms.
    """

    terms: tuple
    n_terms: int
    tail_bound: float
    lam: float
    skipped: tuple = ()

    def phi(self):
        """Materialise the series sum (error if any kept term cannot be)."""
        acc = None
        for term in self.terms:
            piece = scale_power(self.lam, term.exponent) * term.block
            acc = piece if acc is None else acc + piece
        if acc is None:
            raise PreconditionError("terms", "generator has no representable terms")
        return acc

    def phi_scaled(self) -> ScaledVector:
        return ScaledVector(self.phi(), self.lam, 0)

    def exponent_range(self):
        exps = [term.exponent for term in self.terms]
        return (min(exps), max(exps)) if exps else (0, 0)


def build_generator(
    family: FrameFamily,
    sched: PowerSchedule,
    lam: float,
    n_terms: int | None = None,
    upper: float | None = None,
) -> GeneratorVector:
    """Sum the right-shifted blocks U**alpha(n) f_n for n = 1..n_terms.

    The schedule must keep the blocks disjoint (gap_n >= m(n)); this is
    verified on the actual supports, not assumed.  A term whose scale
    lam**-alpha(n) underflows double precision is skipped and its mass
    bound is charged to the tail.
    """
    size = len(family)
    n_terms = size if n_terms is None else min(int(n_terms), size)
    if n_terms < 1:
        raise PreconditionError("n_terms", "need at least one series term")
    need = n_terms + 1 if n_terms < size else n_terms
    if len(sched) < need:
        raise PreconditionError(
            "schedule", f"schedule covers {len(sched)} powers, need {need}"
        )
    m = support_profile(family)
    for n in range(1, n_terms):
        if sched.gap(n) < m[n - 1]:
            raise ScheduleViolationError(
                f"gap at k={n} is {sched.gap(n)} < m({n})={m[n - 1]}; blocks would overlap"
            )
    if upper is None:
        upper = family.declared_upper or empirical_frame_bounds(family)[1]

    terms = []
    skipped = []
    tail = 0.0
    prev_top = 0
    log_lam = math.log(lam)
    for n in range(1, n_terms + 1):
        alpha_n = sched.alpha(n)
        block = family[n - 1].shift(alpha_n)
        lo = alpha_n + 1
        if lo <= prev_top:
            raise ScheduleViolationError(
                f"block {n} starts at index {lo}, inside the previous block (<= {prev_top})"
            )
        prev_top = alpha_n + m[n - 1]
        log_scale = -float(alpha_n) * log_lam
        if log_scale < -740.0:
            skipped.append(n)
            tail += _exp_or_zero(2.0 * log_scale + math.log(norm_sq(family[n - 1])))
            continue
        terms.append(GeneratorTerm(n=n, alpha=alpha_n, block=block))
    if n_terms < size:
        gap_log = -2.0 * float(sched.alpha(n_terms + 1)) * log_lam
        tail += _exp_or_zero(gap_log) * upper * lam * lam / (lam * lam - 1.0)
    return GeneratorVector(
        terms=tuple(terms),
        n_terms=n_terms,
        tail_bound=tail,
        lam=lam,
        skipped=tuple(skipped),
    )


# ---------------------------------------------------------------------------
# residuals and verification
# ---------------------------------------------------------------------------

def _shifted_tail_sum(
    family: FrameFamily, sched: PowerSchedule, lam: float, k: int, n_terms: int
) -> CoordinateVector:
    """sum_{n=k+1}^{n_terms} lam**-(alpha(n)-alpha(k)) * f_n shifted by alpha(n)-alpha(k)."""
    acc = CoordinateVector()
    alpha_k = sched.alpha(k)
    for n in range(k + 1, n_terms + 1):
        delta = sched.alpha(n) - alpha_k
        log_scale = -float(delta) * math.log(lam)
        if log_scale < -740.0:
            continue  # mass already charged to the generator tail
        acc = acc + scale_power(lam, -delta) * family[n - 1].shift(delta)
    return acc


def residual_finite_support(
    family: FrameFamily,
    sched: PowerSchedule,
    lam: float,
    k: int,
    n_terms: int | None = None,
    upper: float | None = None,
) -> tuple[float, float]:
    """Measured and bounded residual at index k.

    measured = ||f_k - T**alpha(k) phi||^2 via the telescoped identity;
    bound    = (B lam^2/(lam^2-1)) * lam**(-2 [alpha(k+1)-alpha(k)]).

    Terms with n < k are annihilated exactly by support arithmetic; that
    is checked here, not assumed.
    """
    size = len(family)
    n_terms = size if n_terms is None else min(int(n_terms), size)
    if not 1 <= k <= n_terms:
        raise PreconditionError("k", f"k must lie in 1..{n_terms}, got {k}")
    if len(sched) < k + 1:
        raise PreconditionError("schedule", f"need alpha({k + 1}) for the bound")
    m = support_profile(family)
    alpha_k = sched.alpha(k)
    for n in range(1, k):
        if alpha_k - sched.alpha(n) < m[n - 1]:
            raise ScheduleViolationError(
                f"term n={n} is not annihilated at k={k}: "
                f"alpha({k})-alpha({n}) = {alpha_k - sched.alpha(n)} < m({n}) = {m[n - 1]}"
            )
    tail = _shifted_tail_sum(family, sched, lam, k, n_terms)
    measured = norm_sq(tail)
    if upper is None:
        upper = family.declared_upper or empirical_frame_bounds(family)[1]
    gap = sched.gap(k)
    bound = (upper * lam * lam / (lam * lam - 1.0)) * scale_power(lam, -2 * gap)
    return measured, bound


def suborbit_family(
    family: FrameFamily, sched: PowerSchedule, lam: float, count: int, n_terms: int
) -> FrameFamily:
    """The approximating family {T**alpha(k) phi} for k = 1..count,
    materialised through the telescoped form f_k + tail so that only
    nonpositive exponents ever appear."""
    elems = []
    for k in range(1, count + 1):
        elems.append(family[k - 1] + _shifted_tail_sum(family, sched, lam, k, n_terms))
    return FrameFamily(tuple(elems))


VERIFY_COLUMNS = ("k", "alpha_k", "gap", "measured", "residual_bound", "budget_eps_2k", "pass")


@dataclass
class VerificationOutcome:
    """Everything a verification run produced."""

    table: VerificationTable
    report: object
    suborbit: FrameFamily
    schedule: PowerSchedule
    generator: object
    section: dict

    @property
    def all_passed(self) -> bool:
        extra = all(
            bool(self.section[key])
            for key in ("union_is_eps_approximation", "branch_budgets_hold")
            if key in self.section
        )
        return self.table.all_pass and self.report.all_bounds_hold and extra


def verify_finite_support(
    family: FrameFamily,
    lam: float,
    eps: float,
    upper: float | None = None,
    count: int | None = None,
    n_terms: int | None = None,
    sched: PowerSchedule | None = None,
) -> VerificationOutcome:
    """Full pipeline: schedule, generator, per-k residual rows, then the
    perturbation report for (family, suborbit).

    Requires eps below the empirical lower bound of the verified section.
    The default schedule follows the finite-support gap rule; a caller may
    pass any schedule satisfying the gap conditions.
    """
    size = len(family)
    count = size if count is None else min(int(count), size)
    n_terms = min(count + 8, size) if n_terms is None else min(int(n_terms), size)
    if count > n_terms:
        raise PreconditionError("count", f"cannot verify {count} rows with {n_terms} terms")
    section = FrameFamily(family.elements[:count])
    a_emp, b_emp = empirical_frame_bounds(section)
    if not 0 < eps < a_emp:
        raise PreconditionError(
            "epsilon", f"need 0 < eps < A_emp, got eps={eps} with A_emp={a_emp}"
        )
    if upper is None:
        if family.declared_upper is not None:
            upper = family.declared_upper
        else:
            b_all = b_emp
            if n_terms > count:
                b_all = empirical_frame_bounds(FrameFamily(family.elements[:n_terms]))[1]
            upper = float(2 ** max(1, math.ceil(math.log2(b_all))))
    m = support_profile(family)
    if sched is None:
        sched = schedule_finite_support(m, lam, upper, eps, max(count, n_terms) + 1)
    generator = build_generator(family, sched, lam, n_terms=n_terms, upper=upper)

    table = VerificationTable(VERIFY_COLUMNS)
    for k in range(1, count + 1):
        measured, bound = residual_finite_support(
            family, sched, lam, k, n_terms=n_terms, upper=upper
        )
        measured_total = measured + generator.tail_bound
        budget = eps * 2.0 ** (-k)
        table.add_row(
            k=k,
            alpha_k=sched.alpha(k),
            gap=sched.gap(k),
            measured=measured_total,
            residual_bound=bound,
            budget_eps_2k=budget,
            **{"pass": measured_total <= bound and measured_total <= budget},
        )

    approx = suborbit_family(family, sched, lam, count, n_terms)
    report = perturbation_report(
        section, approx, eps, lower=a_emp, upper=max(upper, b_emp)
    )
    return VerificationOutcome(
        table=table,
        report=report,
        suborbit=approx,
        schedule=sched,
        generator=generator,
        section={
            "kind": "l2n",
            "section_size": count,
            "n_terms": n_terms,
            "lambda": lam,
            "epsilon": eps,
            "upper_used": upper,
            "lower_empirical": a_emp,
            "upper_empirical": b_emp,
        },
    )
