"""Finite-section frame algebra.

Everything here works on the Gram matrix of a finite family, so the only
eigenproblems are Hermitian ones and no rectangular factorisation is ever
formed.  Operator norms of synthesis-operator differences come from the
Gram matrix of the difference family; frame operators and their
pseudo-inverses are represented on an orthonormal basis of the joint span
extracted from the Gram matrix of the union family.

Frame bounds of an infinite family are only ever approximated by a finite
section; every report states the section size through the length of the
family it was computed from and never claims more.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFamilyError, PreconditionError
from .jacobi import jacobi_eigh, jacobi_eigvalsh
from .vectors import FrameFamily, inner, norm_sq

#: default relative eigenvalue tolerance: scale-invariant rank decisions
DEFAULT_REL_TOL = 1e-10


def gram_matrix(family: FrameFamily) -> np.ndarray:
    """Hermitian Gram matrix G[j, k] = <f_k, f_j>."""
    elems = family.elements
    n = len(elems)
    g = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        g[j, j] = norm_sq(elems[j])
        for k in range(j + 1, n):
            val = inner(elems[k], elems[j])
            g[j, k] = val
            g[k, j] = val.conjugate()
    return g


def empirical_frame_bounds(family: FrameFamily, tol: float | None = None) -> tuple[float, float]:
    """Optimal frame bounds of the family for its own finite-dimensional span.

    Returns (A_emp, B_emp): the smallest Gram eigenvalue exceeding ``tol``
    and the largest Gram eigenvalue.  ``tol`` defaults to the
    scale-invariant threshold DEFAULT_REL_TOL times the largest eigenvalue.
    """
    evals = jacobi_eigvalsh(gram_matrix(family))
    top = float(evals[-1])
    thr = tol if tol is not None else DEFAULT_REL_TOL * max(top, 0.0)
    kept = [float(e) for e in evals if e > thr]
    if not kept:
        raise DegenerateFamilyError(
            f"all {len(evals)} Gram eigenvalues lie at or below tol={thr}"
        )
    return kept[0], top


def _rank(evals: np.ndarray, rel_tol: float) -> int:
    top = float(evals[-1])
    if top <= 0.0:
        return 0
    return int(sum(1 for e in evals if e > rel_tol * top))


def excess_finite(family: FrameFamily, tol: float = DEFAULT_REL_TOL) -> int:
    """Kernel dimension of the finite Gram: section size minus Gram rank.

    ``tol`` is relative to the largest eigenvalue.  This is the testable
    finite-section surrogate for the excess of an infinite frame.
    """
    evals = jacobi_eigvalsh(gram_matrix(family))
    return len(family) - _rank(evals, tol)


def _difference_family(family: FrameFamily, other: FrameFamily) -> FrameFamily:
    if len(family) != len(other):
        raise PreconditionError(
            "length", f"families have different lengths {len(family)} vs {len(other)}"
        )
    return FrameFamily(tuple(f - g for f, g in zip(family.elements, other.elements)))


def synthesis_gap(family: FrameFamily, other: FrameFamily) -> float:
    """Operator norm of the difference of the two synthesis operators.

    Computed as the square root of the largest eigenvalue of the Gram
    matrix of the difference family {f_k - g_k}.
    """
    if len(family) != len(other):
        raise PreconditionError(
            "length", f"families have different lengths {len(family)} vs {len(other)}"
        )
    if all((f - g).is_zero() for f, g in zip(family.elements, other.elements)):
        return 0.0
    diff = _difference_family(family, other)
    evals = jacobi_eigvalsh(gram_matrix(diff))
    return math.sqrt(max(float(evals[-1]), 0.0))


def is_eps_approximation(family: FrameFamily, other: FrameFamily, eps: float) -> bool:
    """Whether the synthesis-operator gap squared is at most eps.

    Equivalent to the quantified condition that every finite coefficient
    sequence c satisfies ||sum c_k (f_k - g_k)||^2 <= eps * sum |c_k|^2.
    """
    if not eps > 0:
        raise PreconditionError("epsilon", "must be positive")
    return synthesis_gap(family, other) ** 2 <= eps


def pairwise_deficit(family: FrameFamily, other: FrameFamily) -> float:
    """Sum over k of ||f_k - g_k||^2."""
    if len(family) != len(other):
        raise PreconditionError(
            "length", f"families have different lengths {len(family)} vs {len(other)}"
        )
    return math.fsum(norm_sq(f - g) for f, g in zip(family.elements, other.elements))


def geometric_domination(
    family: FrameFamily, other: FrameFamily, eps: float
) -> tuple[bool, list[tuple[int, float, float]]]:
    """Check ||f_k - g_k||^2 <= eps * 2**-k for every k.

    Returns (ok, table) where the table rows are (k, measured, budget).
    """
    if len(family) != len(other):
        raise PreconditionError(
            "length", f"families have different lengths {len(family)} vs {len(other)}"
        )
    table = []
    ok = True
    for k, (f, g) in enumerate(zip(family.elements, other.elements), start=1):
        measured = norm_sq(f - g)
        budget = eps * 2.0 ** (-k)
        table.append((k, measured, budget))
        if measured > budget:
            ok = False
    return ok, table


def independence_margin(family: FrameFamily) -> float:
    """Smallest Gram eigenvalue of the norm-normalised family.

    A strictly positive margin certifies linear independence of the finite
    section; the value is clamped at zero so an exactly dependent family
    reports 0 rather than rounding noise.
    """
    normalised = []
    for k, f in enumerate(family.elements, start=1):
        ns = norm_sq(f)
        if ns == 0:
            raise PreconditionError("elements", f"element {k} is the zero vector")
        normalised.append((1.0 / math.sqrt(ns)) * f)
    evals = jacobi_eigvalsh(gram_matrix(FrameFamily(tuple(normalised))))
    return max(float(evals[0]), 0.0)


# ---------------------------------------------------------------------------
# perturbation report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerturbationReport:
    """Measured operator gaps next to their analytic bounds.

    ``spans_differ`` flags that the two families span different subspaces,
    in which case every operator was restricted to the joint span; the
    flag is informational and excluded from the JSON serialisation, which
    carries exactly the quantitative fields.
    """

    epsilon: float
    synthesis_gap: float
    frame_op_gap: float
    inv_frame_op_gap: float
    bound_synthesis: float
    bound_frame_op: float
    bound_inv: float
    new_lower_bound: float
    new_upper_bound: float
    excess_original: int
    excess_perturbed: int
    all_bounds_hold: bool
    spans_differ: bool = False

    def to_json(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "synthesis_gap": self.synthesis_gap,
            "frame_op_gap": self.frame_op_gap,
            "inv_frame_op_gap": self.inv_frame_op_gap,
            "bound_synthesis": self.bound_synthesis,
            "bound_frame_op": self.bound_frame_op,
            "bound_inv": self.bound_inv,
            "new_lower_bound": self.new_lower_bound,
            "new_upper_bound": self.new_upper_bound,
            "excess_original": self.excess_original,
            "excess_perturbed": self.excess_perturbed,
            "all_bounds_hold": self.all_bounds_hold,
        }


def perturbed_bounds(eps: float, lower: float, upper: float) -> tuple[float, float]:
    """Frame bounds guaranteed for any eps-approximation of a frame with
    bounds (lower, upper): (sqrt(A) - sqrt(eps))^2 and (sqrt(B) + sqrt(eps))^2."""
    return (
        lower * (1.0 - math.sqrt(eps / lower)) ** 2,
        upper * (1.0 + math.sqrt(eps / upper)) ** 2,
    )


def _span_coordinates(union: FrameFamily, rel_tol: float):
    """Coordinates of every union element on an orthonormal basis of the
    joint span, derived purely from the union Gram matrix.

    Returns (coords, rank) with coords of shape (rank, 2K): column k holds
    the coefficients of union element k on the orthonormal basis.
    """
    p = gram_matrix(union)
    evals, evecs = jacobi_eigh(p)
    top = float(evals[-1])
    if top <= 0.0:
        raise DegenerateFamilyError("union family is numerically zero")
    keep = [i for i, e in enumerate(evals) if e > rel_tol * top]
    lam = np.array([evals[i] for i in keep])
    v = evecs[:, keep]
    c = v / np.sqrt(lam)[None, :]
    coords = c.conj().T @ p
    return coords, len(keep)


def _pseudo_inverse_hermitian(s: np.ndarray, rel_tol: float) -> np.ndarray:
    evals, evecs = jacobi_eigh(s)
    top = float(max(evals[-1], 0.0))
    inv = np.zeros_like(evals)
    for i, e in enumerate(evals):
        if e > rel_tol * top:
            inv[i] = 1.0 / e
    return (evecs * inv[None, :]) @ evecs.conj().T


def _op_norm_hermitian(s: np.ndarray) -> float:
    evals = jacobi_eigvalsh(s)
    return float(max(abs(evals[0]), abs(evals[-1])))


def perturbation_report(
    family: FrameFamily,
    other: FrameFamily,
    eps: float,
    lower: float | None = None,
    upper: float | None = None,
    tol: float = DEFAULT_REL_TOL,
    slack: float = 1e-9,
) -> PerturbationReport:
    """Measure all operator gaps between a family and a perturbation of it
    and compare them against the analytic perturbation bounds.

    ``lower`` and ``upper`` default to the empirical bounds of the original
    family's section.  Requires 0 < eps < lower.  Frame operators and their
    pseudo-inverses are restricted to the joint span of the two families;
    when the spans differ the report flags it.  ``slack`` is the absolute
    tolerance applied to every bound comparison.
    """
    if len(family) != len(other):
        raise PreconditionError(
            "length", f"families have different lengths {len(family)} vs {len(other)}"
        )
    k = len(family)
    a_emp, b_emp = empirical_frame_bounds(family)
    lower = a_emp if lower is None else float(lower)
    upper = b_emp if upper is None else float(upper)
    if not 0 < eps < lower:
        raise PreconditionError(
            "epsilon", f"need 0 < eps < A, got eps={eps} with A={lower}"
        )
    if lower > upper:
        raise PreconditionError("upper", f"A={lower} exceeds B={upper}")

    gap_u = synthesis_gap(family, other)

    union = FrameFamily(tuple(family.elements) + tuple(other.elements))
    coords, rank = _span_coordinates(union, tol)
    a_f = coords[:, :k]
    a_g = coords[:, k:]
    s_f = a_f @ a_f.conj().T
    s_g = a_g @ a_g.conj().T
    gap_s = _op_norm_hermitian(s_f - s_g)
    inv_f = _pseudo_inverse_hermitian(s_f, tol)
    inv_g = _pseudo_inverse_hermitian(s_g, tol)
    gap_inv = _op_norm_hermitian(inv_f - inv_g)

    rank_f = _rank(jacobi_eigvalsh(gram_matrix(family)), tol)
    rank_g = _rank(jacobi_eigvalsh(gram_matrix(other)), tol)
    # equal spans exactly when both ranks match the joint-span dimension
    spans_differ = not (rank == rank_f == rank_g)

    bound_u = math.sqrt(eps)
    bound_s = math.sqrt(eps * upper) * (2.0 + math.sqrt(eps / upper))
    bound_inv = bound_s / (lower ** 2 * (1.0 - math.sqrt(eps / lower)) ** 2)
    new_lower, new_upper = perturbed_bounds(eps, lower, upper)

    excess_f = len(family) - rank_f
    excess_g = len(other) - rank_g

    a_other, b_other = empirical_frame_bounds(other)
    holds = (
        gap_u <= bound_u + slack
        and gap_s <= bound_s + slack
        and gap_inv <= bound_inv + slack
        and a_other >= new_lower - slack
        and b_other <= new_upper + slack
        and excess_f == excess_g
    )

    return PerturbationReport(
        epsilon=float(eps),
        synthesis_gap=gap_u,
        frame_op_gap=gap_s,
        inv_frame_op_gap=gap_inv,
        bound_synthesis=bound_u,
        bound_frame_op=bound_s,
        bound_inv=bound_inv,
        new_lower_bound=new_lower,
        new_upper_bound=new_upper,
        excess_original=excess_f,
        excess_perturbed=excess_g,
        all_bounds_hold=holds,
        spans_differ=spans_differ,
    )
