"""Constructive approximation of frames by suborbits of bounded operators.

The library builds, for a given frame section, a generator vector and a
strictly increasing power schedule such that the suborbit of a scaled
shift (or truncated translation) operator approximates the frame to a
prescribed tolerance, and it numerically verifies every bound involved:
per-element residual bounds, the eps-approximation property, perturbed
frame bounds, operator gaps, excess preservation and linear independence.
"""

from .errors import (
    DegenerateFamilyError,
    GridMismatchError,
    IncompatibleOperandsError,
    MaterializationError,
    PreconditionError,
    ScheduleViolationError,
    SuborbitError,
)
from .finite_support import (
    GeneratorVector,
    PowerSchedule,
    Sqrt2Config,
    VerificationOutcome,
    build_generator,
    residual_finite_support,
    schedule_finite_support,
    schedule_sqrt2,
    suborbit_family,
    support_profile,
    verify_finite_support,
)
from .frames import (
    PerturbationReport,
    empirical_frame_bounds,
    excess_finite,
    geometric_domination,
    gram_matrix,
    independence_margin,
    is_eps_approximation,
    pairwise_deficit,
    perturbation_report,
    perturbed_bounds,
    synthesis_gap,
)
from .jacobi import jacobi_eigh, jacobi_eigvalsh
from .localized import (
    LocalizationProfile,
    build_generator_localized,
    check_localization,
    exponential_profile_family,
    residual_localized,
    schedule_localized,
    verify_localized,
)
from .operators import (
    ShiftPower,
    TranslationPower,
    apply_T_power,
    apply_translation_power,
    apply_U_power,
)
from .scenarios import (
    scenario_suborbit_independence,
    scenario_two_orbit_example,
    two_orbit_family,
)
from .two_operator import (
    GaborSpec,
    SupportIntervalProfile,
    gabor_family,
    gabor_schedules,
    partition_frame,
    residual_two_operator,
    schedules_l2r,
    verify_two_operator,
)
from .vectors import (
    CoordinateVector,
    FrameFamily,
    SampledFunction,
    ScaledVector,
    basis_vector,
    canonical_basis_family,
    inner,
    norm_sq,
)

__version__ = "0.1.0"
