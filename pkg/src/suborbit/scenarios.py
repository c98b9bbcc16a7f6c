"""Named verification scenarios, runnable from the CLI.

Each scenario produces a deterministic JSON-ready report of the form
{"scenario": ..., "params": ..., "checks": [{name, measured, bound, pass}]}
given its seed.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import PreconditionError
from .frames import excess_finite, independence_margin
from .vectors import CoordinateVector, FrameFamily, basis_vector, inner, norm_sq


def _check(name: str, measured, bound, passed: bool) -> dict:
    return {"name": name, "measured": measured, "bound": bound, "pass": bool(passed)}


def _shift_up(v: CoordinateVector, n: int) -> CoordinateVector:
    """Plain (unscaled) index shift e_k -> e_{k+n}."""
    return v.shift(n)


def two_orbit_family(dim: int) -> FrameFamily:
    """The redundant family {e_k + e_{k+1}} followed by {e_k - e_{k+1}},
    k = 1..dim-1, inside the first ``dim`` coordinates."""
    plus = [basis_vector(k) + basis_vector(k + 1) for k in range(1, dim)]
    minus = [basis_vector(k) - basis_vector(k + 1) for k in range(1, dim)]
    return FrameFamily(tuple(plus + minus))


def scenario_two_orbit_example(dim: int, seed: int = 0, trials: int = 100) -> dict:
    """Linear dependency, orbit identity, dual reconstruction and excess of
    the two-orbit family at finite dimension ``dim``.

    The family is linearly dependent (so it cannot be a single operator
    orbit) yet is a frame with dual {e_k / 2} on each half; both facts are
    checked numerically, the first one exactly.
    """
    if dim < 4:
        raise PreconditionError("D", "the scenario needs dimension at least 4")
    fam = two_orbit_family(dim)
    checks = []

    e = basis_vector
    dependency = (e(1) + e(2)) - (e(1) - e(2)) - (e(2) + e(3)) - (e(2) - e(3))
    checks.append(
        _check("dependency_relation_is_zero", norm_sq(dependency), 0.0,
               dependency.is_zero())
    )

    seed_plus = e(1) + e(2)
    seed_minus = e(1) - e(2)
    orbit_ok = True
    for n in range(0, dim - 2):
        if _shift_up(seed_plus, n) != e(n + 1) + e(n + 2):
            orbit_ok = False
        if _shift_up(seed_minus, n) != e(n + 1) - e(n + 2):
            orbit_ok = False
    checks.append(_check("orbit_identity_exact", 0.0 if orbit_ok else 1.0, 0.0, orbit_ok))

    rng = np.random.default_rng(seed)
    interior = dim // 2
    worst = 0.0
    for _ in range(trials):
        coeffs = rng.uniform(-1.0, 1.0, (interior, 2))
        f = CoordinateVector({j + 1: complex(c[0], c[1]) for j, c in enumerate(coeffs)})
        recon = CoordinateVector()
        for k in range(1, dim):
            c_k = inner(f, 0.5 * e(k))
            recon = recon + c_k * (e(k) + e(k + 1)) + c_k * (e(k) - e(k + 1))
        err = math.sqrt(norm_sq(f - recon))
        worst = max(worst, err)
    checks.append(_check("dual_reconstruction_error", worst, 1e-12, worst <= 1e-12))

    excess = excess_finite(fam)
    checks.append(_check("excess_positive", excess, 0, excess > 0))

    return {
        "scenario": "two_orbit",
        "params": {"D": dim, "seed": seed, "trials": trials},
        "checks": checks,
    }


def scenario_suborbit_independence(
    suborbit: FrameFamily, threshold: float = 1e-10, label: str = "suborbit"
) -> dict:
    """Certify linear independence of a constructed suborbit section.

    Reports the smallest Gram eigenvalue of the normalised family rather
    than a bare boolean; independence is certified only up to this margin.
    """
    margin = independence_margin(suborbit)
    return {
        "scenario": "suborbit_independence",
        "params": {"label": label, "size": len(suborbit), "threshold": threshold},
        "checks": [_check("independence_margin", margin, threshold, margin > threshold)],
    }
