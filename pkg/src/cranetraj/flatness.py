"""Differential-flatness maps for the trolley-payload and jib-payload systems.

For a trolley move the payload position along the jib, d_L, is a flat output:
the trolley state and the radial swing angle are algebraic in d_L and its
time derivatives. For a slew the payload Cartesian coordinates (x_L, y_L) are
flat outputs; the slew angle is recovered from the "trolley image" point

    (x_T, y_T) = (x_L + (D_H/g) * x_L'', y_L + (D_H/g) * y_L'')

which coincides with the trolley position when the planned payload motion is
dynamically consistent. With the polynomial flat profiles used here the image
point leaves the radius-D_T circle between the endpoints (the payload path is
the chord); ``image_radius_error`` quantifies that inconsistency, and the
swing formulas remain the planner's prediction rather than an exact inverse
of the dynamics. At the operation endpoints the maps are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ParameterError
from .poly import PolySegment


class DegenerateConfigurationError(ValueError):
    """Both image coordinates vanish; the slew angle is undefined."""


class InconsistentJetError(ValueError):
    """Image point too far from the trolley circle for the requested check."""


def jet(seg: PolySegment, t):
    """Derivatives 0..5 of a segment at time t, stacked on the first axis."""
    return np.stack([seg.eval(t, k) for k in range(6)])


@dataclass
class TrolleyState:
    """Trolley DOF and radial swing recovered from one flat jet (array-friendly)."""
    d_T: np.ndarray
    d_T_dot: np.ndarray
    d_T_ddot: np.ndarray
    alpha: np.ndarray
    alpha_dot: np.ndarray


@dataclass
class SlewState:
    """Slew DOF and both swing angles recovered from the two flat jets."""
    theta: np.ndarray
    theta_dot: np.ndarray
    theta_ddot: np.ndarray
    alpha: np.ndarray
    alpha_dot: np.ndarray
    beta: np.ndarray
    beta_dot: np.ndarray


def trolley_from_flat(flat_jet, D_H: float, g: float = 9.8) -> TrolleyState:
    """Map a flat jet (derivatives 0..5 of d_L) to the trolley state.

    d_T = d_L + (D_H/g) d_L'', alpha = -d_L''/g, and their derivatives.
    Exact for the small-angle planar pendulum.
    """
    if D_H <= 0.0:
        raise ParameterError("D_H must be positive")
    d = np.asarray(flat_jet, dtype=float)
    k = D_H / g
    return TrolleyState(
        d_T=d[0] + k * d[2],
        d_T_dot=d[1] + k * d[3],
        d_T_ddot=d[2] + k * d[4],
        alpha=-d[2] / g,
        alpha_dot=-d[3] / g,
    )


def slew_flat_boundaries(theta_i: float, theta_f: float, D_T: float):
    """Endpoint payload coordinates (x_i, y_i, x_f, y_f) for a slew from
    theta_i to theta_f at trolley radius D_T."""
    if D_T <= 0.0:
        raise ParameterError("D_T must be positive")
    return (
        D_T * np.cos(theta_i), D_T * np.sin(theta_i),
        D_T * np.cos(theta_f), D_T * np.sin(theta_f),
    )


def image_point(jet_x, jet_y, D_H: float, g: float = 9.8):
    """Trolley-image coordinates and their first two derivatives.

    Returns (x_T, y_T, x_T', y_T', x_T'', y_T'') as arrays.
    """
    jx = np.asarray(jet_x, dtype=float)
    jy = np.asarray(jet_y, dtype=float)
    k = D_H / g
    return (
        jx[0] + k * jx[2], jy[0] + k * jy[2],
        jx[1] + k * jx[3], jy[1] + k * jy[3],
        jx[2] + k * jx[4], jy[2] + k * jy[4],
    )


def image_radius_error(jet_x, jet_y, D_T: float, D_H: float, g: float = 9.8):
    """Relative deviation of the image point from the trolley circle,
    (|image| - D_T)/D_T. Zero iff the planned jets are dynamically consistent
    with a trolley fixed at radius D_T."""
    x_T, y_T, *_ = image_point(jet_x, jet_y, D_H, g)
    return (np.hypot(x_T, y_T) - D_T) / D_T


def slew_from_flat(jet_x, jet_y, D_T: float, D_H: float, g: float = 9.8,
                   consistency_tol: float | None = None) -> SlewState:
    """Map the two flat jets (derivatives 0..5 of x_L, y_L) to the slew state.

    theta is the two-argument arctangent of the image point (quadrant-safe).
    Its rates come from the quotient forms obtained by differentiating the
    cosine relation (denominator y_T) or the sine relation (denominator x_T);
    per sample the form with the larger-magnitude denominator is used, which
    stays regular when the slew crosses an axis. The swing angles and their
    rates are algebraic in the jets.

    consistency_tol, when given, bounds the allowed relative deviation of the
    image point from the trolley circle; exceeding it raises
    InconsistentJetError. The polynomial flat profiles are off-circle between
    the endpoints by O(D_T * (arc/2)^2), so strict tolerances only make sense
    at operation boundaries.
    """
    if D_T <= 0.0 or D_H <= 0.0:
        raise ParameterError("D_T and D_H must be positive")
    jx = np.asarray(jet_x, dtype=float)
    jy = np.asarray(jet_y, dtype=float)
    x_T, y_T, xd_T, yd_T, xdd_T, ydd_T = image_point(jx, jy, D_H, g)

    scale = max(D_T, 1.0)
    if np.any((np.abs(x_T) < 1e-9 * scale) & (np.abs(y_T) < 1e-9 * scale)):
        raise DegenerateConfigurationError("image point at the origin")
    if consistency_tol is not None:
        err = np.max(np.abs(np.hypot(x_T, y_T) - D_T)) / D_T
        if err > consistency_tol:
            raise InconsistentJetError(
                f"image point off the trolley circle by {err:.3e} relative "
                f"(allowed {consistency_tol:.3e})")

    theta = np.arctan2(y_T, x_T)
    use_x = np.abs(y_T) >= np.abs(x_T)
    # Quotient forms; the unused branch may divide by a small number, so
    # compute both with a guarded denominator and select.
    y_safe = np.where(y_T == 0.0, 1.0, y_T)
    x_safe = np.where(x_T == 0.0, 1.0, x_T)
    theta_dot_x = -xd_T / y_safe
    theta_dot_y = yd_T / x_safe
    theta_dot = np.where(use_x, theta_dot_x, theta_dot_y)
    theta_ddot_x = -(x_T * theta_dot ** 2 + xdd_T) / y_safe
    theta_ddot_y = (y_T * theta_dot ** 2 + ydd_T) / x_safe
    theta_ddot = np.where(use_x, theta_ddot_x, theta_ddot_y)

    x, y = jx[0], jy[0]
    xd, yd = jx[1], jy[1]
    xdd, ydd = jx[2], jy[2]
    x3, y3 = jx[3], jy[3]
    alpha = (x * x + y * y + (D_H / g) * (x * xdd + y * ydd) - D_T * D_T) / (D_H * D_T)
    beta = (y * xdd - x * ydd) / (g * D_T)
    alpha_dot = (2.0 * (x * xd + y * yd)) / (D_H * D_T) \
        + (xd * xdd + x * x3 + yd * ydd + y * y3) / (g * D_T)
    beta_dot = (yd * xdd + y * x3 - xd * ydd - x * y3) / (g * D_T)

    return SlewState(theta, theta_dot, theta_ddot,
                     alpha, alpha_dot, beta, beta_dot)
