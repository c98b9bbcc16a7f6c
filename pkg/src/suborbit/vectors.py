"""Value types for sequence-space and sampled-function vectors.

Two concrete vector kinds are provided:

* :class:`CoordinateVector` - a finitely supported vector in l2(N),
  complex amplitudes indexed from 1.
* :class:`SampledFunction` - a compactly supported function on R sampled
  on the uniform grid {i/q}, left-endpoint convention, so the indicator
  of [0,1] at grid q is q samples of value 1 at x = 0, 1/q, ..., (q-1)/q
  and has norm exactly 1.

Both are immutable after construction.  :class:`ScaledVector` attaches an
exact lambda-exponent to either kind so that operator powers never force
a lambda**p evaluation until a materialisation is explicitly requested.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import (
    GridMismatchError,
    IncompatibleOperandsError,
    MaterializationError,
    PreconditionError,
)

# exp() overflows just above this; materialisation refuses to get close
_LOG_HUGE = 700.0
_LOG_TINY = -740.0


def _canonical_entries(entries: Mapping[int, complex] | Iterable[tuple[int, complex]]):
    if isinstance(entries, Mapping):
        items = entries.items()
    else:
        items = entries
    out: dict[int, complex] = {}
    for idx, amp in sorted(items):
        idx = int(idx)
        if idx < 1:
            raise PreconditionError("index", f"coordinate index {idx} is < 1")
        amp = complex(amp)
        if amp != 0:
            out[idx] = out.get(idx, 0j) + amp
            if out[idx] == 0:
                del out[idx]
    return out


class CoordinateVector:
    """Finitely supported vector in l2(N), indices starting at 1.

    Stored in canonical form: only nonzero amplitudes are kept, sorted by
    index so that every iteration over the entries is deterministic.
    """

    __slots__ = ("_entries", "support_bound")

    def __init__(self, entries=(), support_bound: int | None = None):
        self._entries = _canonical_entries(entries)
        if support_bound is not None:
            support_bound = int(support_bound)
            if support_bound < 1:
                raise PreconditionError("support_bound", "must be a positive integer")
            hi = max(self._entries) if self._entries else 0
            if hi > support_bound:
                raise PreconditionError(
                    "support_bound", f"stored index {hi} exceeds declared bound {support_bound}"
                )
        self.support_bound = support_bound

    # --- inspection -----------------------------------------------------
    def items(self):
        return self._entries.items()

    def indices(self):
        return self._entries.keys()

    def get(self, index: int) -> complex:
        return self._entries.get(index, 0j)

    def max_index(self) -> int | None:
        """Largest index carrying a nonzero amplitude, or None for the zero vector."""
        return max(self._entries) if self._entries else None

    def is_zero(self) -> bool:
        return not self._entries

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, CoordinateVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self):
        return hash(tuple(self._entries.items()))

    def __repr__(self):
        inside = ", ".join(f"{k}: {v}" for k, v in self._entries.items())
        return f"CoordinateVector({{{inside}}})"

    # --- arithmetic -----------------------------------------------------
    def __add__(self, other: "CoordinateVector") -> "CoordinateVector":
        if not isinstance(other, CoordinateVector):
            raise IncompatibleOperandsError("can only add CoordinateVector to CoordinateVector")
        out = dict(self._entries)
        for idx, amp in other.items():
            s = out.get(idx, 0j) + amp
            if s == 0:
                out.pop(idx, None)
            else:
                out[idx] = s
        return CoordinateVector(out)

    def __sub__(self, other: "CoordinateVector") -> "CoordinateVector":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "CoordinateVector":
        scalar = complex(scalar)
        if scalar == 0:
            return CoordinateVector()
        return CoordinateVector({k: scalar * v for k, v in self._entries.items()})

    __rmul__ = __mul__

    def shift(self, offset: int) -> "CoordinateVector":
        """Move every index by ``offset``; indices pushed below 1 are dropped."""
        return CoordinateVector(
            {k + offset: v for k, v in self._entries.items() if k + offset >= 1}
        )

    # --- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {"entries": {str(k): [v.real, v.imag] for k, v in self._entries.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> "CoordinateVector":
        entries = {int(k): complex(re, im) for k, (re, im) in obj["entries"].items()}
        return cls(entries, support_bound=obj.get("support_bound"))


class SampledFunction:
    """Compactly supported function on R, sampled at x = i/q for integer i.

    ``i0`` is the global grid index of the first stored sample.  Canonical
    form trims exact zeros from both ends; the zero function is the empty
    sample list with i0 = 0.
    """

    __slots__ = ("q", "i0", "samples")

    def __init__(self, q: int, i0: int, samples: Iterable[complex]):
        q = int(q)
        if q < 1:
            raise PreconditionError("q", "grid denominator must be a positive integer")
        samples = [complex(s) for s in samples]
        lo = 0
        hi = len(samples)
        while lo < hi and samples[lo] == 0:
            lo += 1
        while hi > lo and samples[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            i0, samples = 0, []
        else:
            i0, samples = int(i0) + lo, samples[lo:hi]
        self.q = q
        self.i0 = i0
        self.samples = tuple(samples)

    # --- inspection -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.samples

    def last_index(self) -> int | None:
        return self.i0 + len(self.samples) - 1 if self.samples else None

    def sample_at(self, i: int) -> complex:
        j = i - self.i0
        if 0 <= j < len(self.samples):
            return self.samples[j]
        return 0j

    def support_interval(self) -> tuple[Fraction, Fraction] | None:
        """Closed-open support interval [i0/q, (i_last+1)/q), exact rationals."""
        if not self.samples:
            return None
        return Fraction(self.i0, self.q), Fraction(self.i0 + len(self.samples), self.q)

    def items(self):
        for j, s in enumerate(self.samples):
            yield self.i0 + j, s

    def __eq__(self, other):
        if not isinstance(other, SampledFunction):
            return NotImplemented
        return (self.q, self.i0, self.samples) == (other.q, other.i0, other.samples)

    def __hash__(self):
        return hash((self.q, self.i0, self.samples))

    def __repr__(self):
        return f"SampledFunction(q={self.q}, i0={self.i0}, n={len(self.samples)})"

    # --- arithmetic -----------------------------------------------------
    def _check_grid(self, other: "SampledFunction"):
        if not isinstance(other, SampledFunction):
            raise IncompatibleOperandsError("expected a SampledFunction")
        if self.q != other.q:
            raise IncompatibleOperandsError(f"grid mismatch: q={self.q} vs q={other.q}")

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        self._check_grid(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.i0, other.i0)
        hi = max(self.i0 + len(self.samples), other.i0 + len(other.samples))
        vals = [self.sample_at(i) + other.sample_at(i) for i in range(lo, hi)]
        return SampledFunction(self.q, lo, vals)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        return self + (-1.0) * other

    def __mul__(self, scalar) -> "SampledFunction":
        scalar = complex(scalar)
        if scalar == 0:
            return SampledFunction(self.q, 0, [])
        return SampledFunction(self.q, self.i0, [scalar * s for s in self.samples])

    __rmul__ = __mul__

    def shift_steps(self, steps: int) -> "SampledFunction":
        """Translate by steps/q (positive moves the support right)."""
        return SampledFunction(self.q, self.i0 + int(steps), self.samples)

    def truncate_left_of_zero(self) -> "SampledFunction":
        """Apply the cutoff to [0, inf): drop samples at x < 0."""
        if self.is_zero() or self.i0 >= 0:
            return self
        return SampledFunction(self.q, 0, self.samples[-self.i0:])

    def truncate_right_of(self, max_step: int) -> "SampledFunction":
        """Apply the cutoff to (-inf, max_step/q]: drop samples at x > max_step/q."""
        if self.is_zero():
            return self
        last = self.i0 + len(self.samples) - 1
        if last <= max_step:
            return self
        keep = max_step - self.i0 + 1
        return SampledFunction(self.q, self.i0, self.samples[:keep] if keep > 0 else [])

    # --- constructors ---------------------------------------------------
    @classmethod
    def indicator(cls, q: int, lo, hi) -> "SampledFunction":
        """Indicator of [lo, hi) sampled at grid q; lo*q and hi*q must be integers."""
        lo_s = Fraction(lo) * q
        hi_s = Fraction(hi) * q
        if lo_s.denominator != 1 or hi_s.denominator != 1:
            raise GridMismatchError(f"interval [{lo}, {hi}) does not land on the 1/{q} grid")
        n = int(hi_s) - int(lo_s)
        if n <= 0:
            return cls(q, 0, [])
        return cls(q, int(lo_s), [1.0 + 0j] * n)

    # --- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "q": self.q,
            "i0": self.i0,
            "samples": [[s.real, s.imag] for s in self.samples],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SampledFunction":
        return cls(obj["q"], obj["i0"], [complex(re, im) for re, im in obj["samples"]])


Vector = Union[CoordinateVector, SampledFunction]


def inner(u: Vector, v: Vector) -> complex:
    """Sesquilinear inner product, linear in the first slot.

    Coordinate vectors:  sum_j u_j * conj(v_j).
    Sampled functions:   (1/q) * sum_i u(x_i) * conj(v(x_i)), same q required.
    """
    if isinstance(u, CoordinateVector) and isinstance(v, CoordinateVector):
        if len(u) <= len(v):
            return sum((amp * v.get(idx).conjugate() for idx, amp in u.items()), 0j)
        return sum((u.get(idx) * amp.conjugate() for idx, amp in v.items()), 0j)
    if isinstance(u, SampledFunction) and isinstance(v, SampledFunction):
        u._check_grid(v)
        if u.is_zero() or v.is_zero():
            return 0j
        lo = max(u.i0, v.i0)
        hi = min(u.i0 + len(u.samples), v.i0 + len(v.samples))
        acc = 0j
        for i in range(lo, hi):
            acc += u.sample_at(i) * v.sample_at(i).conjugate()
        return acc / u.q
    raise IncompatibleOperandsError(
        f"cannot pair {type(u).__name__} with {type(v).__name__}"
    )


def norm_sq(u: Vector) -> float:
    """Squared norm, the real part of inner(u, u)."""
    if isinstance(u, CoordinateVector):
        return math.fsum(abs(amp) ** 2 for _, amp in u.items())
    if isinstance(u, SampledFunction):
        return math.fsum(abs(s) ** 2 for s in u.samples) / u.q
    raise IncompatibleOperandsError(f"no norm for {type(u).__name__}")


def basis_vector(k: int) -> CoordinateVector:
    """The canonical orthonormal basis vector e_k, k >= 1."""
    k = int(k)
    if k < 1:
        raise PreconditionError("k", "basis index must be >= 1")
    return CoordinateVector({k: 1.0 + 0j})


def scale_power(lam: float, exponent) -> float:
    """lam**exponent with an explicit error outside double range."""
    e = float(exponent)
    logf = e * math.log(lam)
    if logf > _LOG_HUGE:
        raise MaterializationError(
            f"lambda**{exponent} overflows double precision (lambda={lam})"
        )
    if logf < _LOG_TINY:
        raise MaterializationError(
            f"lambda**{exponent} underflows double precision (lambda={lam})"
        )
    return math.pow(lam, e)


@dataclass(frozen=True)
class ScaledVector:
    """A vector stored as lam**exponent * base.

    The exponent is kept exact (integer, or a Fraction for on-grid
    translation powers); nothing is multiplied out until materialize().
    """

    base: Vector
    lam: float
    exponent: Union[int, Fraction] = 0

    def __post_init__(self):
        if not self.lam > 1.0:
            raise PreconditionError("lambda", "scale base must satisfy lambda > 1")

    def materialize(self) -> Vector:
        """Fold the scale factor into the amplitudes.

        Raises MaterializationError when lam**exponent leaves double range
        rather than silently over- or underflowing.
        """
        if self.exponent == 0:
            return self.base
        if _is_zero(self.base):
            return self.base
        return scale_power(self.lam, self.exponent) * self.base

    def log_norm(self) -> float:
        """ln of the represented norm, computed without materialising."""
        ns = norm_sq(self.base)
        if ns == 0:
            return -math.inf
        return float(self.exponent) * math.log(self.lam) + 0.5 * math.log(ns)

    def renormalize(self) -> "ScaledVector":
        """Shift integer powers of lambda into the exponent until the base
        norm lies in [1/lambda, lambda]; the represented vector is unchanged."""
        ns = norm_sq(self.base)
        if ns == 0:
            return ScaledVector(self.base, self.lam, 0)
        k = math.floor(0.5 * math.log(ns) / math.log(self.lam))
        if k == 0:
            return self
        return ScaledVector(
            scale_power(self.lam, -k) * self.base, self.lam, self.exponent + k
        )

    def represents_same(self, other: "ScaledVector", rel_tol: float = 1e-12) -> bool:
        """Exponent-shifted comparison against another scaled vector."""
        if not isinstance(other, ScaledVector) or self.lam != other.lam:
            return False
        if _is_zero(self.base) or _is_zero(other.base):
            return _is_zero(self.base) and _is_zero(other.base)
        shift = self.exponent - other.exponent
        left = scale_power(self.lam, shift) * self.base
        diff_sq = norm_sq(left - other.base)
        ref = max(norm_sq(left), norm_sq(other.base))
        return diff_sq <= (rel_tol ** 2) * ref


def _is_zero(v: Vector) -> bool:
    return v.is_zero()


@dataclass(frozen=True)
class FrameFamily:
    """Ordered family of vectors with optional declared frame bounds."""

    elements: tuple
    declared_lower: float | None = None
    declared_upper: float | None = None

    def __post_init__(self):
        elems = tuple(self.elements)
        if not elems:
            raise PreconditionError("elements", "a frame family must be nonempty")
        kinds = {type(e) for e in elems}
        if len(kinds) != 1 or next(iter(kinds)) not in (CoordinateVector, SampledFunction):
            raise IncompatibleOperandsError("family elements must share a single vector kind")
        if isinstance(elems[0], SampledFunction):
            qs = {e.q for e in elems}
            if len(qs) != 1:
                raise IncompatibleOperandsError(f"family mixes grids {sorted(qs)}")
        object.__setattr__(self, "elements", elems)
        a, b = self.declared_lower, self.declared_upper
        if a is not None and not a > 0:
            raise PreconditionError("declared_lower", "frame bound A must be positive")
        if b is not None and not b > 0:
            raise PreconditionError("declared_upper", "frame bound B must be positive")
        if a is not None and b is not None and a > b:
            raise PreconditionError("declared_lower", f"A={a} exceeds B={b}")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k):
        return self.elements[k]

    @property
    def kind(self):
        return type(self.elements[0])


def canonical_basis_family(n: int) -> FrameFamily:
    """The first n canonical basis vectors e_1, ..., e_n."""
    return FrameFamily(tuple(basis_vector(k) for k in range(1, n + 1)),
                       declared_lower=1.0, declared_upper=1.0)
