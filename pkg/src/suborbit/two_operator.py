"""Two-operator suborbit approximation for compactly supported functions.

A family of compactly supported sampled functions is split into the
sub-family supported in [0, inf) and the rest.  The positive branch is
approximated by suborbits of the truncated translation T1 generated by
phi1 = sum U1**alpha(n) g_n; the remaining branch by suborbits of T2
(cutoff at L) generated by phi2 = sum U2**gamma(n) h_n.  Gap conditions
alpha(k+1)-alpha(k) >= b(k) and gamma(k+1)-gamma(k) >= L - c(k) keep the
shifted blocks disjoint and make the early terms vanish under the
truncations, so the residual telescopes exactly as in sequence space.

Support intervals are tracked as exact rationals with the right-open
convention: a function whose last nonzero sample sits at index i has
support inside [i0/q, (i+1)/q).  With that convention T1-annihilation
needs gap >= b(n) while T2-annihilation needs the strict gap
> L - c(n), i.e. one extra grid step when equality would occur, because
the sample at the closed left endpoint c(n) would otherwise land exactly
on the cutoff.

The Gabor pipeline enumerates the modulated translates of a window in a
unit-step order (consecutive elements differ by one step in exactly one
of the two lattice indices) starting from the window itself, and uses the
closed-form dyadic schedules.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import GridMismatchError, PreconditionError, ScheduleViolationError
from .finite_support import PowerSchedule, VerificationOutcome, _ceil_int, _exp_or_zero
from .frames import (
    empirical_frame_bounds,
    geometric_domination,
    is_eps_approximation,
    perturbation_report,
)
from .reporting import VerificationTable
from .vectors import FrameFamily, SampledFunction, norm_sq, scale_power

TWO_OPERATOR_COLUMNS = (
    "branch", "k", "alpha_k", "gap", "measured", "residual_bound", "budget_eps_2k", "pass"
)


@dataclass(frozen=True)
class SupportIntervalProfile:
    """Per-element support intervals of the two branches, exact rationals.

    ``a``/``b`` bound the positive branch, ``c``/``d`` the other one;
    ``L`` is the largest interval length over both branches and doubles
    as the cutoff of the second translation operator.
    """

    a: tuple
    b: tuple
    c: tuple
    d: tuple
    L: Fraction

    def __post_init__(self):
        for ak in self.a:
            if ak < 0:
                raise PreconditionError("a", f"positive-branch support starts at {ak} < 0")
        for ck in self.c:
            if ck >= 0:
                raise PreconditionError("c", f"remaining-branch support starts at {ck} >= 0")


def _interval(f: SampledFunction) -> tuple[Fraction, Fraction]:
    span = f.support_interval()
    if span is None:
        return Fraction(0), Fraction(0)
    return span


class Partition(NamedTuple):
    positive: FrameFamily | None
    remaining: FrameFamily | None
    profile: SupportIntervalProfile
    positive_positions: tuple
    remaining_positions: tuple
    warnings: tuple


def partition_frame(family: FrameFamily) -> Partition:
    """Split into the branch supported in [0, inf) and the rest.

    An empty branch is flagged (that branch of the construction is then
    disabled), not an error: at desk scale a finite section may easily
    miss one side.
    """
    pos, rem, pos_idx, rem_idx = [], [], [], []
    for idx, f in enumerate(family.elements):
        if not isinstance(f, SampledFunction):
            raise PreconditionError("elements", "partition needs sampled functions")
        lo, _ = _interval(f)
        if f.is_zero() or lo >= 0:
            pos.append(f)
            pos_idx.append(idx)
        else:
            rem.append(f)
            rem_idx.append(idx)
    a = tuple(_interval(g)[0] for g in pos)
    b = tuple(_interval(g)[1] for g in pos)
    c = tuple(_interval(h)[0] for h in rem)
    d = tuple(_interval(h)[1] for h in rem)
    lengths = [bk - ak for ak, bk in zip(a, b)] + [dk - ck for ck, dk in zip(c, d)]
    L = max(lengths) if lengths else Fraction(0)
    warnings = []
    if not pos:
        warnings.append("positive branch is empty; it is disabled for this section")
    if not rem:
        warnings.append("remaining branch is empty; it is disabled for this section")
    return Partition(
        positive=FrameFamily(tuple(pos)) if pos else None,
        remaining=FrameFamily(tuple(rem)) if rem else None,
        profile=SupportIntervalProfile(a=a, b=b, c=c, d=d, L=L),
        positive_positions=tuple(pos_idx),
        remaining_positions=tuple(rem_idx),
        warnings=tuple(warnings),
    )


def _grid_steps(value: Fraction, q: int, what: str) -> int:
    steps = Fraction(value) * q
    if steps.denominator != 1:
        raise GridMismatchError(f"{what} = {value} does not land on the 1/{q} grid")
    return int(steps)


def _roundup_grid(lower_exact: Fraction, lower_float: float, q: int) -> Fraction:
    """Smallest grid multiple >= both the exact and the float lower bounds."""
    steps = _ceil_int(lower_float * q)
    exact_steps = math.ceil(lower_exact * q)
    return Fraction(max(steps, exact_steps), q)


def _log_gap_term_two(k: int, lam: float, upper: float, eps: float) -> float:
    # each branch works against eps/2, hence 2B/eps inside the logarithm
    return (
        k * math.log(2.0)
        + math.log(2.0 * upper / eps)
        + math.log(lam * lam / (lam * lam - 1.0))
    ) / (2.0 * math.log(lam))


def schedules_l2r(
    profile: SupportIntervalProfile,
    lam: float,
    upper: float,
    eps: float,
    count: int,
    q: int,
) -> tuple[PowerSchedule, PowerSchedule]:
    """Gap rules for the two branches, rounded up to grid multiples:

        alpha-gap(k) = max(b(k),      [k ln2 + ln(2B/eps) + ln(lam^2/(lam^2-1))] / (2 ln lam))
        gamma-gap(k) = max(L - c(k),  same logarithmic term),

    the gamma gap bumped one grid step when it would equal L - c(k)
    exactly (see the module docstring).
    """
    if not lam > 1.0:
        raise PreconditionError("lambda", f"need lambda > 1, got {lam}")
    if not eps > 0:
        raise PreconditionError("epsilon", "must be positive")
    step = Fraction(1, q)
    alphas = [Fraction(0)]
    gammas = [Fraction(0)]
    prov_a, prov_g = [], []
    for k in range(1, count):
        log_term = _log_gap_term_two(k, lam, upper, eps)
        bk = profile.b[k - 1] if k - 1 < len(profile.b) else Fraction(0)
        gap_a = _roundup_grid(bk, max(float(bk), log_term), q)
        alphas.append(alphas[-1] + gap_a)
        prov_a.append("support" if float(bk) >= log_term else "log-term")
        ck = profile.c[k - 1] if k - 1 < len(profile.c) else Fraction(0)
        need = profile.L - ck
        gap_g = _roundup_grid(need, max(float(need), log_term), q)
        if gap_g <= need:
            gap_g = need + step
        gammas.append(gammas[-1] + gap_g)
        prov_g.append("support" if float(need) >= log_term else "log-term")
    return (
        PowerSchedule(tuple(alphas), tuple(prov_a)),
        PowerSchedule(tuple(gammas), tuple(prov_g)),
    )


# ---------------------------------------------------------------------------
# generators and residuals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FunctionGeneratorTerm:
    n: int
    alpha: Fraction
    block: SampledFunction

    @property
    def exponent(self):
        return -self.alpha


@dataclass(frozen=True)
class FunctionGenerator:
    """Truncated generator series over sampled functions."""

    terms: tuple
    n_terms: int
    tail_bound: float
    lam: float
    moves_left: bool
    skipped: tuple = ()

    def phi(self) -> SampledFunction:
        acc = None
        for term in self.terms:
            piece = scale_power(self.lam, term.exponent) * term.block
            acc = piece if acc is None else acc + piece
        if acc is None:
            raise PreconditionError("terms", "generator has no representable terms")
        return acc

    def exponent_range(self):
        exps = [term.exponent for term in self.terms]
        return (min(exps), max(exps)) if exps else (Fraction(0), Fraction(0))


def _build_function_generator(
    family: FrameFamily,
    sched: PowerSchedule,
    lam: float,
    moves_left: bool,
    n_terms: int | None,
    upper: float,
) -> FunctionGenerator:
    """Sum the translated blocks; disjointness is checked sample-wise."""
    size = len(family)
    n_terms = size if n_terms is None else min(int(n_terms), size)
    need = n_terms + 1 if n_terms < size else n_terms
    if len(sched) < need:
        raise PreconditionError("schedule", f"schedule covers {len(sched)} powers, need {need}")
    q = family[0].q
    terms, skipped = [], []
    tail = 0.0
    log_lam = math.log(lam)
    edge = None  # max occupied index so far (right march) or min (left march)
    for n in range(1, n_terms + 1):
        alpha_n = Fraction(sched.alpha(n))
        steps = _grid_steps(alpha_n, q, f"power alpha({n})")
        block = family[n - 1].shift_steps(-steps if moves_left else steps)
        if not block.is_zero():
            lo, hi = block.i0, block.last_index()
            if moves_left:
                if edge is not None and hi >= edge:
                    raise ScheduleViolationError(
                        f"block {n} reaches sample {hi}, overlapping the previous block"
                    )
                edge = lo if edge is None else min(edge, lo)
            else:
                if edge is not None and lo <= edge:
                    raise ScheduleViolationError(
                        f"block {n} starts at sample {lo}, overlapping the previous block"
                    )
                edge = hi if edge is None else max(edge, hi)
        log_scale = -float(alpha_n) * log_lam
        if log_scale < -740.0:
            skipped.append(n)
            tail += _exp_or_zero(2.0 * log_scale + math.log(norm_sq(family[n - 1])))
            continue
        terms.append(FunctionGeneratorTerm(n=n, alpha=alpha_n, block=block))
    if n_terms < size:
        tail += (
            _exp_or_zero(-2.0 * float(sched.alpha(n_terms + 1)) * log_lam)
            * upper * lam * lam / (lam * lam - 1.0)
        )
    return FunctionGenerator(
        terms=tuple(terms),
        n_terms=n_terms,
        tail_bound=tail,
        lam=lam,
        moves_left=moves_left,
        skipped=tuple(skipped),
    )


def _assert_annihilation(
    sched: PowerSchedule, profile: SupportIntervalProfile, k: int, branch: str
) -> None:
    alpha_k = Fraction(sched.alpha(k))
    for n in range(1, k):
        delta = alpha_k - Fraction(sched.alpha(n))
        if branch == "positive":
            bn = profile.b[n - 1]
            if delta < bn:
                raise ScheduleViolationError(
                    f"term n={n} survives the [0,inf) cutoff at k={k}: "
                    f"shift {delta} < b({n}) = {bn}"
                )
        else:
            cn = profile.c[n - 1]
            if cn + delta <= profile.L:
                raise ScheduleViolationError(
                    f"term n={n} survives the (-inf,L] cutoff at k={k}: "
                    f"c({n}) + {delta} = {cn + delta} <= L = {profile.L}"
                )


def _tail_sum_functions(
    family: FrameFamily, sched: PowerSchedule, lam: float, k: int, n_terms: int,
    moves_left: bool,
) -> SampledFunction:
    q = family[0].q
    acc = SampledFunction(q, 0, [])
    alpha_k = Fraction(sched.alpha(k))
    log_lam = math.log(lam)
    for n in range(k + 1, n_terms + 1):
        delta = Fraction(sched.alpha(n)) - alpha_k
        if -float(delta) * log_lam < -740.0:
            continue
        steps = _grid_steps(delta, q, f"power gap alpha({n})-alpha({k})")
        shifted = family[n - 1].shift_steps(-steps if moves_left else steps)
        acc = acc + scale_power(lam, -delta) * shifted
    return acc


def residual_two_operator(
    family: FrameFamily,
    sched: PowerSchedule,
    lam: float,
    k: int,
    profile: SupportIntervalProfile,
    branch: str = "positive",
    n_terms: int | None = None,
    upper: float | None = None,
) -> tuple[float, float]:
    """Measured and bounded squared residual on one branch.

    The early terms are annihilated by the cutoff; that is asserted
    through the exact support intervals before the tail is summed.
    """
    if branch not in ("positive", "remaining"):
        raise PreconditionError("branch", "must be 'positive' or 'remaining'")
    size = len(family)
    n_terms = size if n_terms is None else min(int(n_terms), size)
    if not 1 <= k <= n_terms:
        raise PreconditionError("k", f"k must lie in 1..{n_terms}, got {k}")
    if len(sched) < k + 1:
        raise PreconditionError("schedule", f"need alpha({k + 1}) for the bound")
    _assert_annihilation(sched, profile, k, branch)
    tail = _tail_sum_functions(
        family, sched, lam, k, n_terms, moves_left=(branch == "remaining")
    )
    measured = norm_sq(tail)
    if upper is None:
        upper = family.declared_upper or empirical_frame_bounds(family)[1]
    gap = sched.gap(k)
    bound = (upper * lam * lam / (lam * lam - 1.0)) * scale_power(lam, -2 * Fraction(gap))
    return measured, bound


def branch_suborbit(
    family: FrameFamily, sched: PowerSchedule, lam: float, count: int, n_terms: int,
    moves_left: bool,
) -> FrameFamily:
    elems = []
    for k in range(1, count + 1):
        elems.append(
            family[k - 1]
            + _tail_sum_functions(family, sched, lam, k, n_terms, moves_left)
        )
    return FrameFamily(tuple(elems))


# ---------------------------------------------------------------------------
# Gabor enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GaborSpec:
    """Window, lattice steps and truncation window of a Gabor family.

    The enumeration needs ``m_range`` even and ``n_range >= 1`` so that a
    unit-step path through the whole index window exists starting from the
    window itself (a parity obstruction rules out odd widths).
    """

    window: SampledFunction
    a: Fraction
    b: float
    m_range: int
    n_range: int
    support_length: Fraction | None = None

    def __post_init__(self):
        if self.window.is_zero():
            raise PreconditionError("window", "the Gabor window must be nonzero")
        if self.window.i0 < 0:
            raise PreconditionError("window", "window support must lie in [0, C]")
        object.__setattr__(self, "a", Fraction(self.a))
        if self.a <= 0:
            raise PreconditionError("a", "time step must be positive")
        if (self.a * self.window.q).denominator != 1:
            raise GridMismatchError(
                f"time step a={self.a} does not land on the 1/{self.window.q} grid"
            )
        if not self.b > 0:
            raise PreconditionError("b", "frequency step must be positive")
        if self.m_range < 0 or self.m_range % 2 != 0:
            raise PreconditionError("m_range", "must be even (unit-step path parity)")
        if self.n_range < 1:
            raise PreconditionError("n_range", "must be at least 1")
        span = self.window.support_interval()
        length = span[1] - Fraction(0)
        if self.support_length is None:
            object.__setattr__(self, "support_length", length)
        else:
            object.__setattr__(self, "support_length", Fraction(self.support_length))
            if length > self.support_length:
                raise PreconditionError(
                    "support_length",
                    f"window occupies [0, {length}) but C = {self.support_length}",
                )


def modulate(f: SampledFunction, freq: float) -> SampledFunction:
    """Pointwise multiplication by exp(2 pi i freq x) on the grid."""
    vals = [
        s * cmath.exp(2j * math.pi * freq * ((f.i0 + i) / f.q))
        for i, s in enumerate(f.samples)
    ]
    return SampledFunction(f.q, f.i0, vals)


def _unit_step_path(m_range: int, height: int):
    """Unit-step enumeration of [-M, M] x [0, height] starting at (0, 0).

    For height = 0 only the m >= 0 half-row is reachable and emitted.
    """
    M = m_range
    path = [(m, 0) for m in range(0, M + 1)]
    if height == 0:
        return path
    for ci, m in enumerate(range(M, -1, -1)):
        rows = range(1, height + 1) if ci % 2 == 0 else range(height, 0, -1)
        path.extend((m, n) for n in rows)
    for ci, m in enumerate(range(-1, -M - 1, -1)):
        rows = range(height, -1, -1) if ci % 2 == 0 else range(0, height + 1)
        path.extend((m, n) for n in rows)
    return path


class GaborFamilies(NamedTuple):
    positive: FrameFamily
    remaining: FrameFamily
    positive_pairs: tuple       # (m, n) lattice indices in emission order
    remaining_pairs: tuple
    ell: tuple                  # per-k translation count for the positive branch
    r: tuple                    # per-k translation count for the remaining branch
    profile: SupportIntervalProfile
    support_length: Fraction
    a: Fraction


def gabor_family(spec: GaborSpec) -> GaborFamilies:
    """Enumerate the two Gabor branches in unit-step order.

    The positive branch starts at the window itself (m = n = 0); the
    remaining branch starts at its translate by -a.  Consecutive elements
    differ by one step in exactly one lattice index, which keeps the
    support growth per element at one translation step.
    """
    q = spec.window.q
    a_steps = int(Fraction(spec.a) * q)
    g_pairs = _unit_step_path(spec.m_range, spec.n_range)
    h_path = _unit_step_path(spec.m_range, spec.n_range - 1)
    h_pairs = [(m, -1 - r) for m, r in h_path]

    def element(m: int, n: int) -> SampledFunction:
        return modulate(spec.window.shift_steps(n * a_steps), m * spec.b)

    g_elems = tuple(element(m, n) for m, n in g_pairs)
    h_elems = tuple(element(m, n) for m, n in h_pairs)
    ell = tuple(n + 1 for _, n in g_pairs)
    r = tuple(-n for _, n in h_pairs)
    a = tuple(_interval(g)[0] for g in g_elems)
    b = tuple(_interval(g)[1] for g in g_elems)
    c = tuple(_interval(h)[0] for h in h_elems)
    d = tuple(_interval(h)[1] for h in h_elems)
    lengths = [bk - ak for ak, bk in zip(a, b)] + [dk - ck for ck, dk in zip(c, d)]
    profile = SupportIntervalProfile(a=a, b=b, c=c, d=d, L=max(lengths))
    return GaborFamilies(
        positive=FrameFamily(g_elems),
        remaining=FrameFamily(h_elems),
        positive_pairs=tuple(g_pairs),
        remaining_pairs=tuple(h_pairs),
        ell=ell,
        r=r,
        profile=profile,
        support_length=spec.support_length,
        a=spec.a,
    )


def gabor_schedules(
    support_length, a, N: int, j: int, count: int
) -> tuple[PowerSchedule, PowerSchedule]:
    """Closed-form dyadic schedules for the Gabor pipeline (lambda = sqrt 2,
    B = 2**N, eps = 2**-j):

        alpha(k) = (k-1) [k(a+1)/2 + C - a + N + j + 2]
        gamma(k) = (k-1) [k(a+1)/2 + C     + N + j + 2]

    computed in exact rational arithmetic.
    """
    if N < 1:
        raise PreconditionError("N", "must be a positive integer")
    if j < 1:
        raise PreconditionError("j", "must be a positive integer")
    C = Fraction(support_length)
    a = Fraction(a)
    alphas, gammas = [], []
    for k in range(1, count + 1):
        common = Fraction(k) * (a + 1) / 2 + C + N + j + 2
        alphas.append((k - 1) * (common - a))
        gammas.append((k - 1) * common)
    rule = tuple("gabor-closed-form" for _ in range(count - 1))
    return PowerSchedule(tuple(alphas), rule), PowerSchedule(tuple(gammas), rule)


# ---------------------------------------------------------------------------
# verification pipeline
# ---------------------------------------------------------------------------

def _interleave(first: list, second: list) -> list:
    out = []
    for i in range(max(len(first), len(second))):
        if i < len(first):
            out.append(first[i])
        if i < len(second):
            out.append(second[i])
    return out


def verify_two_operator(
    source,
    lam: float,
    eps: float,
    upper: float | None = None,
    count: int | None = None,
    n_terms: int | None = None,
    scheds: tuple[PowerSchedule, PowerSchedule] | None = None,
    N: int | None = None,
    j: int | None = None,
) -> VerificationOutcome:
    """Full two-branch pipeline for a partitioned family or a Gabor spec.

    ``count`` is per branch.  For a Gabor source with N and j given the
    closed-form schedules are used; otherwise the gap rules from the
    measured support profile.  Each branch works against half the eps
    budget; the union family is checked as one eps-approximation.
    """
    warnings: tuple = ()
    gabor_inputs = None
    if isinstance(source, GaborSpec):
        fam = gabor_family(source)
        g_family, h_family, profile = fam.positive, fam.remaining, fam.profile
        gabor_inputs = (fam.support_length, fam.a)
        order = _interleave(
            [("positive", i) for i in range(len(g_family))],
            [("remaining", i) for i in range(len(h_family))],
        )
    elif isinstance(source, FrameFamily):
        part = partition_frame(source)
        g_family, h_family, profile = part.positive, part.remaining, part.profile
        warnings = part.warnings
        tagged = {}
        for slot, idx in enumerate(part.positive_positions):
            tagged[idx] = ("positive", slot)
        for slot, idx in enumerate(part.remaining_positions):
            tagged[idx] = ("remaining", slot)
        order = [tagged[i] for i in range(len(source))]
    else:
        raise PreconditionError("source", "expected a FrameFamily or a GaborSpec")

    branches = {}
    if g_family is not None:
        branches["positive"] = g_family
    if h_family is not None:
        branches["remaining"] = h_family
    if not branches:
        raise PreconditionError("source", "both branches are empty")

    sizes = [len(f) for f in branches.values()]
    count = min(sizes) if count is None else min(int(count), *sizes)
    n_terms = min(count + 8, max(sizes)) if n_terms is None else int(n_terms)

    union_positions = [
        (name, slot) for name, slot in order if slot < count and name in branches
    ]
    union_family = FrameFamily(
        tuple(branches[name][slot] for name, slot in union_positions)
    )
    a_emp, b_emp = empirical_frame_bounds(union_family)
    if not 0 < eps < a_emp:
        raise PreconditionError(
            "epsilon", f"need 0 < eps < A_emp, got eps={eps} with A_emp={a_emp}"
        )
    if upper is None:
        if N is not None:
            upper = float(2 ** N)
        else:
            used = FrameFamily(tuple(
                f for fam in branches.values()
                for f in fam.elements[: min(n_terms, len(fam))]
            ))
            upper = empirical_frame_bounds(used)[1]
    upper = max(upper, b_emp)

    q = next(iter(branches.values()))[0].q
    if scheds is None:
        need = max(count, n_terms) + 1
        if gabor_inputs is not None and N is not None and j is not None:
            scheds = gabor_schedules(gabor_inputs[0], gabor_inputs[1], N, j, need)
        else:
            scheds = schedules_l2r(profile, lam, upper, eps, need, q)
    sched_map = {"positive": scheds[0], "remaining": scheds[1]}

    table = VerificationTable(TWO_OPERATOR_COLUMNS)
    approx_elems = {}
    generators = {}
    for name, family in branches.items():
        sched = sched_map[name]
        if len(sched) < count + 1:
            raise PreconditionError(
                "schedule", f"need {count + 1} powers to verify {count} rows, "
                            f"schedule covers {len(sched)}"
            )
        terms_here = min(n_terms, len(family))
        if terms_here < len(family):
            # the analytic tail needs one power beyond the last kept term
            terms_here = min(terms_here, len(sched) - 1)
        gen = _build_function_generator(
            family, sched, lam, moves_left=(name == "remaining"),
            n_terms=terms_here, upper=upper,
        )
        generators[name] = gen
        for k in range(1, count + 1):
            measured, bound = residual_two_operator(
                family, sched, lam, k, profile, branch=name,
                n_terms=terms_here, upper=upper,
            )
            measured_total = measured + gen.tail_bound
            budget = eps * 2.0 ** (-k) / 2.0
            table.add_row(
                branch=name,
                k=k,
                alpha_k=sched.alpha(k),
                gap=sched.gap(k),
                measured=measured_total,
                residual_bound=bound,
                budget_eps_2k=budget,
                **{"pass": measured_total <= bound and measured_total <= budget},
            )
        approx_elems[name] = branch_suborbit(
            family, sched, lam, count, terms_here, moves_left=(name == "remaining")
        ).elements

    union_approx = FrameFamily(
        tuple(approx_elems[name][slot] for name, slot in union_positions)
    )
    domination_ok = True
    for name, family in branches.items():
        section = FrameFamily(family.elements[:count])
        ok, _ = geometric_domination(
            section, FrameFamily(approx_elems[name]), eps / 2.0
        )
        domination_ok = domination_ok and ok
    union_ok = is_eps_approximation(union_family, union_approx, eps)
    report = perturbation_report(union_family, union_approx, eps, lower=a_emp, upper=upper)

    return VerificationOutcome(
        table=table,
        report=report,
        suborbit=union_approx,
        schedule=scheds[0],
        generator=generators,
        section={
            "kind": "l2r",
            "section_size_per_branch": count,
            "n_terms": n_terms,
            "lambda": lam,
            "epsilon": eps,
            "upper_used": upper,
            "lower_empirical": a_emp,
            "upper_empirical": b_emp,
            "branches": sorted(branches),
            "union_is_eps_approximation": union_ok,
            "branch_budgets_hold": domination_ok,
            "cutoff_L": str(profile.L),
            "warnings": list(warnings),
        },
    )
