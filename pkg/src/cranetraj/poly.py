"""Closed-form polynomial trajectory segments with analytic derivatives.

Two profiles are used: a degree-7 polynomial for the hoist (rest-to-rest with
zero velocity/acceleration/jerk at both ends) and a degree-11 polynomial for
the flat outputs of the trolley and slew operations (rest-to-rest with
derivatives 1..5 zero at both ends). Coefficients live in the normalized-time
power basis, value(t) = sum_r c_r (t/T)^r, so the duration stays a free
scalar during optimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Boundary-condition solutions for the unit step (start 0, end 1).
# Degree 7: value and derivatives 1..3 pinned at both ends.
_HOIST_STEP = np.array([0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0])
# Degree 11: value and derivatives 1..5 pinned at both ends.
_FLAT_STEP = np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
                       462.0, -1980.0, 3465.0, -3080.0, 1386.0, -252.0])

MAX_DERIVATIVE_ORDER = 5
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class SegmentDomainError(ValueError):
    """Evaluation outside [0, T] or derivative order out of range."""


def _derivative_coeffs(coeffs: np.ndarray, order: int) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    for _ in range(order):
        c = c[1:] * np.arange(1, c.size)
    return c


@dataclass(frozen=True)
class PolySegment:
    """Single-variable polynomial trajectory over a fixed duration."""

    coeffs: np.ndarray      # power-basis coefficients in normalized time
    duration: float         # s
    _dcoeffs: tuple = field(init=False, repr=False, compare=False)
    _dfloats: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.duration <= 0.0:
            raise SegmentDomainError("duration must be positive")
        coeffs = np.asarray(self.coeffs, dtype=float)
        object.__setattr__(self, "coeffs", coeffs)
        dcoeffs = tuple(
            _derivative_coeffs(coeffs, k) for k in range(MAX_DERIVATIVE_ORDER + 1))
        object.__setattr__(self, "_dcoeffs", dcoeffs)
        # highest power first, for scalar Horner evaluation
        object.__setattr__(self, "_dfloats",
                           tuple(tuple(c[::-1].tolist()) for c in dcoeffs))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def eval(self, t, order: int = 0):
        """Value of the order-th time derivative at time t (scalar or array).

        The order-k derivative scales as T^(-k) through the normalized-time
        chain rule. Scalars take a pure-float Horner path (hot inside the
        optimizer's peak refinement and the integrator).
        """
        if not 0 <= order <= MAX_DERIVATIVE_ORDER:
            raise SegmentDomainError(f"derivative order {order} not in 0..{MAX_DERIVATIVE_ORDER}")
        tol = 1e-9 * max(1.0, self.duration)
        if isinstance(t, (float, int)):
            if t < -tol or t > self.duration + tol:
                raise SegmentDomainError("time outside [0, duration]")
            tau = min(max(t / self.duration, 0.0), 1.0)
            value = 0.0
            for c in self._dfloats[order]:
                value = value * tau + c
            return value / self.duration ** order
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < -tol) or np.any(t_arr > self.duration + tol):
            raise SegmentDomainError("time outside [0, duration]")
        tau = np.clip(t_arr / self.duration, 0.0, 1.0)
        c = self._dcoeffs[order]
        value = np.zeros_like(tau)
        for k in range(c.size - 1, -1, -1):
            value = value * tau + c[k]
        value = value / self.duration ** order
        return float(value) if t_arr.ndim == 0 else value

    def sample(self, n: int, order: int = 0):
        """Evaluate on a uniform n-point grid over [0, T]."""
        return self.eval(np.linspace(0.0, self.duration, n), order)


def hoist_profile(start: float, end: float, duration: float) -> PolySegment:
    """Degree-7 rest-to-rest hoist trajectory from start to end over duration."""
    if duration <= 0.0:
        raise SegmentDomainError("duration must be positive")
    coeffs = _HOIST_STEP * (end - start)
    coeffs[0] = start
    return PolySegment(coeffs, duration)


def flat_profile_11(start: float, end: float, duration: float) -> PolySegment:
    """Degree-11 rest-to-rest flat-output trajectory (derivatives 1..5 zero
    at both ends)."""
    if duration <= 0.0:
        raise SegmentDomainError("duration must be positive")
    coeffs = _FLAT_STEP * (end - start)
    coeffs[0] = start
    return PolySegment(coeffs, duration)


def from_bezier(control_points, duration: float) -> PolySegment:
    """Build a segment from Bernstein control points.

    value(tau) = sum_r b_r C(n,r) tau^r (1-tau)^(n-r); converted to the power
    basis. Kept as a constructor so the control-point boundary solutions can
    be checked against the closed-form power coefficients.
    """
    b = np.asarray(control_points, dtype=float)
    n = b.size - 1
    coeffs = np.zeros(n + 1)
    for k in range(n + 1):
        acc = 0.0
        for r in range(k + 1):
            acc += b[r] * math.comb(n, r) * math.comb(n - r, k - r) * (-1.0) ** (k - r)
        coeffs[k] = acc
    return PolySegment(coeffs, duration)


def peak_abs(fn, duration: float, grid: int = 1001, refine_iters: int = 3) -> float:
    """Max of |fn(t)| over [0, duration] by dense sampling plus golden-section
    refinement around the grid maximizer.

    fn must accept a scalar or 1-D array of times. The trajectory signals here
    have few, well-separated extrema, so one refined bracket suffices.
    """
    ts = np.linspace(0.0, duration, grid)
    vals = np.abs(np.asarray(fn(ts), dtype=float))
    i = int(np.argmax(vals))
    best = float(vals[i])
    lo = ts[max(i - 1, 0)]
    hi = ts[min(i + 1, grid - 1)]
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = abs(float(fn(c)))
    fd = abs(float(fn(d)))
    for _ in range(refine_iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = abs(float(fn(c)))
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = abs(float(fn(d)))
        best = max(best, fc, fd)
    return best


def peak_abs_derivative(seg: PolySegment, order: int, grid: int = 1001,
                        refine_iters: int = 3) -> float:
    """Max over [0, T] of |order-th derivative| of the segment."""
    return peak_abs(lambda t: seg.eval(t, order), seg.duration, grid, refine_iters)
