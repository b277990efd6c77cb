"""Front-quality metrics and the a-posteriori fuzzy selection rule."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass


class UndefinedMetricError(ValueError):
    """The metric is undefined for the given front (e.g. a singleton)."""


def _points(front):
    """Accept a ParetoSet, a list of Individuals, or raw (f1, f2) pairs."""
    members = getattr(front, "members", front)
    out = []
    for m in members:
        if hasattr(m, "f1"):
            out.append((float(m.f1), float(m.f2)))
        else:
            out.append((float(m[0]), float(m[1])))
    return out


def spacing(front) -> float:
    """Schott spacing: sample standard deviation of nearest-neighbor
    Manhattan distances in objective space. Lower means a more even spread."""
    pts = _points(front)
    n = len(pts)
    if n < 2:
        raise UndefinedMetricError("spacing needs at least two members")
    dists = []
    for i, (a1, a2) in enumerate(pts):
        best = math.inf
        for j, (b1, b2) in enumerate(pts):
            if i != j:
                d = abs(a1 - b1) + abs(a2 - b2)
                if d < best:
                    best = d
        dists.append(best)
    mean = sum(dists) / n
    return math.sqrt(sum((d - mean) ** 2 for d in dists) / (n - 1))


def hyperarea_detail(front, reference=(1.0, 1.0), ideal=None, nadir=None):
    """Area dominated by the front up to the reference point.

    With ideal/nadir given, objectives are first mapped to
    (f - ideal)/(nadir - ideal) per axis. Points not dominating the
    reference are excluded; returns (area, excluded_count).
    """
    pts = _points(front)
    r1, r2 = float(reference[0]), float(reference[1])
    if ideal is not None or nadir is not None:
        if ideal is None or nadir is None:
            raise ValueError("ideal and nadir must be given together")
        i1, i2 = ideal
        n1, n2 = nadir
        s1 = (n1 - i1) or 1.0
        s2 = (n2 - i2) or 1.0
        pts = [((p1 - i1) / s1, (p2 - i2) / s2) for p1, p2 in pts]
    kept = [(p1, p2) for p1, p2 in pts if p1 <= r1 and p2 <= r2]
    excluded = len(pts) - len(kept)
    if excluded:
        warnings.warn(f"hyperarea: {excluded} point(s) outside the reference box",
                      stacklevel=2)
    if not kept:
        return 0.0, excluded
    kept.sort(key=lambda p: (p[0], p[1]))
    area = 0.0
    best_f2 = math.inf
    xs = [p[0] for p in kept] + [r1]
    for i, (p1, p2) in enumerate(kept):
        best_f2 = min(best_f2, p2)
        width = xs[i + 1] - p1
        if width > 0.0:
            area += width * (r2 - best_f2)
    return area, excluded


def hyperarea(front, reference=(1.0, 1.0), ideal=None, nadir=None) -> float:
    return hyperarea_detail(front, reference, ideal, nadir)[0]


def fuzzy_select(front):
    """Pick one solution via mean linear fuzzy memberships.

    mu_k(x) = (f_k_max - f_k(x)) / (f_k_max - f_k_min) per objective, their
    mean mu_bar scores each member; the argmax wins, ties broken by smaller
    f1. A zero objective range makes that membership 1 for all members.
    Returns (member, mu_bar_max).
    """
    members = list(getattr(front, "members", front))
    if not members:
        raise UndefinedMetricError("fuzzy selection needs a non-empty front")
    f1 = [m.f1 for m in members]
    f2 = [m.f2 for m in members]
    r1 = max(f1) - min(f1)
    r2 = max(f2) - min(f2)
    best, best_mu = None, -1.0
    for m in members:
        mu1 = (max(f1) - m.f1) / r1 if r1 > 0.0 else 1.0
        mu2 = (max(f2) - m.f2) / r2 if r2 > 0.0 else 1.0
        mu = 0.5 * (mu1 + mu2)
        if mu > best_mu or (mu == best_mu and best is not None and m.f1 < best.f1):
            best, best_mu = m, mu
    return best, best_mu


@dataclass(frozen=True)
class FrontMetrics:
    spacing: float
    hyperarea: float
    runtime: float  # s, copied from the run provenance


def compute_front_metrics(pareto, reference=(1.0, 1.0), ideal=None,
                          nadir=None) -> FrontMetrics:
    return FrontMetrics(
        spacing=spacing(pareto),
        hyperarea=hyperarea(pareto, reference, ideal, nadir),
        runtime=pareto.provenance.runtime,
    )
