"""Closed-form powers of the scaled shift and translation operators.

Sequence space carries the scaled left shift T(x1, x2, ...) = lambda(x2, x3, ...)
and the scaled right shift U(x1, x2, ...) = lambda^-1 (0, x1, x2, ...).

Function space carries four scaled translations; t >= 0, on-grid:

    T1: f  ->  lambda^t f(. + t) restricted to [0, inf)
    U1: f  ->  lambda^-t f(. - t)
    T2: f  ->  lambda^t f(. - t) restricted to (-inf, L]
    U2: f  ->  lambda^-t f(. + t)

Powers are always applied in closed form (index arithmetic on the support
plus one exact exponent), never as iterated multiplications, so the
lambda-exponent ledger stays an exact integer or an exact multiple of 1/q.
Single steps of the truncated operators compose to the single final
truncation because each step moves the support further into the kept
half-line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import GridMismatchError, PreconditionError
from .vectors import CoordinateVector, SampledFunction, ScaledVector


@dataclass(frozen=True)
class ShiftPower:
    """A power of the scaled left shift (T) or right shift (U)."""

    direction: str  # "left" or "right"
    power: int
    lam: float

    def __post_init__(self):
        if self.direction not in ("left", "right"):
            raise PreconditionError("direction", "must be 'left' or 'right'")
        if self.power < 0:
            raise PreconditionError("power", "must be a nonnegative integer")
        if not self.lam > 1.0:
            raise PreconditionError("lambda", "must satisfy lambda > 1")

    def apply(self, v):
        if self.direction == "left":
            return apply_T_power(v, self.power, self.lam)
        return apply_U_power(v, self.power, self.lam)


@dataclass(frozen=True)
class TranslationPower:
    """A power of one of the four truncated scaled translations.

    ``t`` is the translation amount in real units; it must land on the
    grid of the function it is applied to.  ``cutoff`` is the right
    support cutoff L, required for the "T2" operator only.
    """

    operator: str  # "T1", "U1", "T2", "U2"
    t: Union[int, Fraction]
    lam: float
    cutoff: Union[int, Fraction, None] = None

    def __post_init__(self):
        if self.operator not in ("T1", "U1", "T2", "U2"):
            raise PreconditionError("operator", "must be one of T1, U1, T2, U2")
        if Fraction(self.t) < 0:
            raise PreconditionError("t", "translation power must be nonnegative")
        if not self.lam > 1.0:
            raise PreconditionError("lambda", "must satisfy lambda > 1")
        if self.operator == "T2" and self.cutoff is None:
            raise PreconditionError("cutoff", "the T2 operator needs its cutoff L")

    def apply(self, f):
        return apply_translation_power(f, self)


def _split_scaled(v, lam: float):
    if isinstance(v, ScaledVector):
        if v.lam != lam:
            raise PreconditionError("lambda", f"scaled vector carries lambda={v.lam}, operator uses {lam}")
        return v.base, v.exponent
    return v, 0


def apply_T_power(v, p: int, lam: float) -> ScaledVector:
    """p-fold scaled left shift: drops the first p coordinates, exponent +p."""
    if p < 0:
        raise PreconditionError("p", "power must be nonnegative")
    base, e = _split_scaled(v, lam)
    if not isinstance(base, CoordinateVector):
        raise PreconditionError("v", "shift operators act on coordinate vectors")
    return ScaledVector(base.shift(-p), lam, e + p)


def apply_U_power(v, p: int, lam: float) -> ScaledVector:
    """p-fold scaled right shift: moves index j to j + p, exponent -p."""
    if p < 0:
        raise PreconditionError("p", "power must be nonnegative")
    base, e = _split_scaled(v, lam)
    if not isinstance(base, CoordinateVector):
        raise PreconditionError("v", "shift operators act on coordinate vectors")
    return ScaledVector(base.shift(p), lam, e - p)


def _steps_on_grid(t, q: int) -> int:
    steps = Fraction(t) * q
    if steps.denominator != 1:
        raise GridMismatchError(f"translation by {t} does not land on the 1/{q} grid")
    return int(steps)


def apply_translation_power(f, op: TranslationPower) -> ScaledVector:
    """Apply one of the four translation operators at power t in closed form."""
    base, e = _split_scaled(f, op.lam)
    if not isinstance(base, SampledFunction):
        raise PreconditionError("f", "translation operators act on sampled functions")
    q = base.q
    s = _steps_on_grid(op.t, q)
    t = Fraction(op.t)
    name = op.operator
    if name == "T1":
        out = base.shift_steps(-s).truncate_left_of_zero()
        return ScaledVector(out, op.lam, e + t)
    if name == "U1":
        return ScaledVector(base.shift_steps(s), op.lam, e - t)
    if name == "T2":
        # x <= L holds at grid point i/q exactly when i <= floor(L*q)
        max_step = math.floor(Fraction(op.cutoff) * q)
        out = base.shift_steps(s).truncate_right_of(max_step)
        return ScaledVector(out, op.lam, e + t)
    out = base.shift_steps(-s)
    return ScaledVector(out, op.lam, e - t)
