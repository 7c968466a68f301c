"""Kolmogorov distance and error statistics.

The one-dimensional distance is exact: the supremum over origin-anchored
half-lines is attained at an atom of the discrete measure, approached from
the left or hit from the right, so both one-sided limits are checked at
every atom.  A single-sided evaluation can be off by up to one atom mass.

In two or more dimensions the supremum is approximated on the grid formed
by the atoms' coordinate projections, thinned so the number of evaluation
boxes stays at or below 10^4.  That value is a lower bound on the true
distance and is labeled accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dacore import DiscretePosterior
from .sampling import RepresentationPointSet

_MAX_BOXES = 10_000


@dataclass
class CdfOracle:
    """Reference CDF of the target measure at boxes anchored at -inf."""

    cdf: callable
    dim: int


def as_weighted_points(obj):
    """Coerce dp / RP set / (points, weights) / bare sample to (points, weights)."""
    if isinstance(obj, DiscretePosterior):
        return obj.support, obj.masses
    if isinstance(obj, RepresentationPointSet):
        return obj.points, np.full(len(obj.points), 1.0 / len(obj.points))
    if isinstance(obj, tuple) and len(obj) == 2:
        pts = np.atleast_2d(np.asarray(obj[0], dtype=np.float64))
        w = np.asarray(obj[1], dtype=np.float64)
        return pts, w / np.sum(w)
    pts = np.asarray(obj, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    return pts, np.full(pts.shape[0], 1.0 / pts.shape[0])


def _collapse_1d(x, w):
    """Sorted unique atom locations with aggregated masses and cumulative sums."""
    order = np.argsort(x, kind="stable")
    xs, inverse = np.unique(x[order], return_inverse=True)
    agg = np.zeros(xs.size)
    np.add.at(agg, inverse, w[order])
    return xs, np.cumsum(agg)


def kolmogorov_discrete(sample, reference) -> float:
    """Kolmogorov distance between a weighted point set and a reference.

    ``reference`` is either a :class:`CdfOracle` or (in one dimension) a
    second weighted point set, in which case the distance is the exact sup
    over the union of jump points and is symmetric in its arguments.
    """
    pts, w = as_weighted_points(sample)
    if isinstance(reference, CdfOracle):
        if pts.shape[1] != reference.dim:
            raise ValueError("dimension mismatch between sample and oracle")
        if reference.dim == 1:
            xs, cum = _collapse_1d(pts[:, 0], w)
            f = np.asarray([reference.cdf(np.array([v])) for v in xs], dtype=np.float64)
            left = np.concatenate([[0.0], cum[:-1]])
            return float(max(np.max(np.abs(cum - f)), np.max(np.abs(left - f))))
        return _kd_grid(pts, w, reference)
    rpts, rw = as_weighted_points(reference)
    if pts.shape[1] != 1 or rpts.shape[1] != 1:
        raise ValueError("the two-distribution form is one-dimensional only")
    return _kd_two_discrete_1d(pts[:, 0], w, rpts[:, 0], rw)


def _kd_two_discrete_1d(x1, w1, x2, w2) -> float:
    jumps = np.unique(np.concatenate([x1, x2]))
    xs1, c1 = _collapse_1d(x1, w1)
    xs2, c2 = _collapse_1d(x2, w2)

    def cdf(xs, c, t, side):
        i = np.searchsorted(xs, t, side=side)
        return np.where(i > 0, c[np.maximum(i - 1, 0)], 0.0)

    best = 0.0
    for side in ("right", "left"):  # at the jump and just before it
        f1 = cdf(xs1, c1, jumps, side)
        f2 = cdf(xs2, c2, jumps, side)
        best = max(best, float(np.max(np.abs(f1 - f2))))
    return best


def _kd_grid(pts, w, oracle: CdfOracle) -> float:
    d = pts.shape[1]
    axes = []
    per_axis = max(2, int(_MAX_BOXES ** (1.0 / d)))
    for j in range(d):
        vals = np.unique(pts[:, j])
        if vals.size > per_axis:
            take = np.linspace(0, vals.size - 1, per_axis).round().astype(int)
            vals = vals[np.unique(take)]
        axes.append(vals)
    mesh = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=1)
    best = 0.0
    for x in mesh:
        emp = float(np.sum(w[np.all(pts <= x[None, :], axis=1)]))
        best = max(best, abs(emp - float(oracle.cdf(x))))
    return best


def error_stats(estimates, truth) -> dict:
    """Per-run squared Euclidean errors with their mean and spread.

    Returns ``{"se": list, "mse": float, "std": float, "degenerate": bool}``;
    a single run has no spread, reported as std 0.0 with the flag set.
    """
    est = [np.atleast_1d(np.asarray(e, dtype=np.float64)) for e in estimates]
    if not est:
        raise ValueError("estimates must be nonempty")
    t = np.atleast_1d(np.asarray(truth, dtype=np.float64))
    for e in est:
        if e.shape != t.shape:
            raise ValueError("estimate and truth shapes disagree")
    se = [float(np.sum((e - t) ** 2)) for e in est]
    degenerate = len(se) == 1
    std = 0.0 if degenerate else float(np.std(se, ddof=1))
    return {"se": se, "mse": float(np.mean(se)), "std": std, "degenerate": degenerate}
