"""Discrete posterior construction and posterior summaries.

``discretize`` turns an unnormalized target density, a proposal, and a
support point set into a fully known discrete distribution: it evaluates the
log-weights g_i = -ell(h(a_i)) - log psi(h(a_i)), shifts by tau* = max g_i,
and normalizes exp(g_i - tau*).  Everything downstream (moments, quantiles,
CDF values) is computed from the resulting atoms and masses.

Evaluations can be chunked and run on several worker threads, but chunk
boundaries are fixed independently of the worker count and the final
reduction is sequential in index order, so results are bit-identical for
any number of workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import NoMassError, TargetEvaluationError
from .proposal import Proposal
from .qmc import SupportPointSet

_CHUNK = 8192  # fixed evaluation chunk size; never depends on worker count


@dataclass
class TargetDensity:
    """A target known through its negative log-density ell(x) = -log f(x).

    ``neg_log_density`` maps one point (a length-d array) to a float and
    must return +inf exactly where f vanishes; NaN is treated as a bug in
    the callback.  ``neg_log_density_batch``, when given, maps an (n, d)
    array to an (n,) array and is used for vectorized evaluation.

    ``support`` lists one entry per coordinate: ``"real"``, ``"positive"``,
    or ``("interval", low, high)``.
    """

    neg_log_density: callable
    dim: int
    support: tuple
    name: str = "target"
    neg_log_density_batch: callable = None

    def __post_init__(self):
        self.support = tuple(self.support)
        if len(self.support) != self.dim:
            raise ValueError("support signature length must equal dim")

    def nll(self, y: np.ndarray) -> np.ndarray:
        """Evaluate ell on an (n, d) array, returning shape (n,)."""
        y = np.atleast_2d(np.asarray(y, dtype=np.float64))
        if self.neg_log_density_batch is not None:
            out = np.asarray(self.neg_log_density_batch(y), dtype=np.float64)
        else:
            out = np.fromiter(
                (self.neg_log_density(row) for row in y), dtype=np.float64, count=y.shape[0]
            )
        return out


@dataclass
class DiscretePosterior:
    """A discrete distribution on M support points in target space."""

    support: np.ndarray
    masses: np.ndarray
    log_weights: np.ndarray
    shift: float
    acceptance_rate: float
    source: dict = field(default_factory=dict)
    support_signature: tuple = ()

    @property
    def m(self) -> int:
        return self.support.shape[0]

    @property
    def dim(self) -> int:
        return self.support.shape[1]

    def mean(self) -> np.ndarray:
        return self.masses @ self.support

    def covariance(self) -> np.ndarray:
        # two-pass form around the computed mean avoids cancellation
        centered = self.support - self.mean()
        return (self.masses[:, None] * centered).T @ centered

    def std(self) -> np.ndarray:
        return np.sqrt(np.diag(self.covariance()))

    def moment(self, k) -> float:
        return moment(self, k)

    def marginal_quantile(self, coord: int, alpha: float) -> float:
        return marginal_quantile(self, coord, alpha)

    def cdf_at(self, x) -> float:
        return cdf_at(self, x)

    def to_csv(self, path, extra_header=()) -> None:
        """Columns y_1..y_d, mass, log_weight; metadata in '#' header lines."""
        d = self.dim
        cols = [f"y_{j + 1}" for j in range(d)] + ["mass", "log_weight"]
        body = np.column_stack([self.support, self.masses, self.log_weights])
        with open(path, "w") as f:
            for line in extra_header:
                f.write(f"# {line}\n")
            f.write(f"# M={self.m} R={self.acceptance_rate:.17g} shift={self.shift:.17g}\n")
            f.write(",".join(cols) + "\n")
            np.savetxt(f, body, delimiter=",", fmt="%.17g")


def discretize(
    target: TargetDensity,
    proposal: Proposal,
    pts: SupportPointSet,
    workers: int = 1,
) -> DiscretePosterior:
    """Build the discrete posterior of ``target`` on ``pts`` via ``proposal``.

    Raises
    ------
    NoMassError
        If every point gets log-weight -inf (acceptance rate zero); the
        proposal needs to be revised.
    TargetEvaluationError
        If the target callback returns NaN, naming the offending point.
    """
    if not (target.dim == proposal.dim == pts.dim):
        raise ValueError(
            f"dimension mismatch: target {target.dim}, proposal {proposal.dim}, points {pts.dim}"
        )
    u = pts.points
    m = pts.m
    starts = list(range(0, m, _CHUNK))

    def eval_chunk(lo):
        hi = min(lo + _CHUNK, m)
        y, logpsi = proposal.map_points(u[lo:hi])
        ell = target.nll(y)
        return y, ell, logpsi

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(eval_chunk, starts))
    else:
        results = [eval_chunk(lo) for lo in starts]

    # fixed-order stitch: identical regardless of worker count
    support = np.concatenate([r[0] for r in results], axis=0)
    ell = np.concatenate([r[1] for r in results])
    logpsi = np.concatenate([r[2] for r in results])

    if np.any(np.isnan(ell)):
        i = int(np.flatnonzero(np.isnan(ell))[0])
        raise TargetEvaluationError(
            f"target {target.name!r} returned NaN at point {support[i].tolist()}"
        )
    g = np.where(np.isposinf(ell), -np.inf, -ell - logpsi)
    finite = np.isfinite(g)
    if not np.any(finite):
        raise NoMassError(
            "no mass found: every support point has zero weight; revise the proposal"
        )
    shift = float(np.max(g[finite]))
    w = np.exp(g - shift)
    masses = w / np.sum(w)
    rate = float(np.count_nonzero(masses > 0.0)) / m
    return DiscretePosterior(
        support=support,
        masses=masses,
        log_weights=g,
        shift=shift,
        acceptance_rate=rate,
        source={
            "generator": pts.generator,
            "skip": pts.skip,
            "m": m,
            "proposal": proposal.describe(),
            "target": target.name,
        },
        support_signature=target.support,
    )


def acceptance_rate(dp: DiscretePosterior) -> float:
    """Fraction of atoms with strictly positive mass."""
    return float(np.count_nonzero(dp.masses > 0.0)) / dp.m


def moment(dp: DiscretePosterior, k) -> float:
    """Mixed moment E[prod_j X_j^k_j] of the discrete posterior."""
    k = np.asarray(k)
    if k.size != dp.dim:
        raise ValueError("need one exponent per coordinate")
    return float(dp.masses @ np.prod(dp.support ** k[None, :], axis=1))


def marginal_quantile(dp: DiscretePosterior, coord: int, alpha: float) -> float:
    """First support value (sorted on ``coord``) where cumulative mass >= alpha.

    Sorting is stable, so ties keep their original atom order.
    """
    if not 0 <= coord < dp.dim:
        raise ValueError(f"coord must be in [0, {dp.dim})")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    x = dp.support[:, coord]
    order = np.argsort(x, kind="stable")
    cum = np.cumsum(dp.masses[order])
    i = int(np.searchsorted(cum, alpha, side="left"))
    i = min(i, dp.m - 1)  # guard against cum[-1] < alpha from rounding
    return float(x[order][i])


def cdf_at(dp: DiscretePosterior, x) -> float:
    """Mass of the box (-inf, x] (coordinatewise) under the discrete posterior."""
    x = np.asarray(x, dtype=np.float64)
    if x.size != dp.dim:
        raise ValueError("x must have one value per coordinate")
    inside = np.all(dp.support <= x[None, :], axis=1)
    return float(np.sum(dp.masses[inside]))
