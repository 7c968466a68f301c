"""Multi-stage discretization: run, estimate moments, refit, rerun.

Stage 1 uses the caller's proposal.  Every later stage rebuilds each
heavy-tailed block (mvnormal / mvcauchy) of the proposal around the
previous stage's posterior mean with the previous covariance as scale;
uniform-box and gamma blocks pass through unchanged.  Stages consume
disjoint slices of the generator sequence so no support point is reused.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import proposal as prop
from .dacore import DiscretePosterior, TargetDensity, discretize
from .exceptions import NoMassError, StageError
from .qmc import halton_points, midpoint_grid_1d, sobol_points

_RIDGE_EPS = 1e-8
LOW_ACCEPTANCE = 0.1


@dataclass
class StageReport:
    stage_index: int
    proposal: str
    m: int
    acceptance_rate: float
    mean: np.ndarray
    covariance: np.ndarray
    elapsed_seconds: float
    warning: str = None

    def to_dict(self) -> dict:
        return {
            "stage_index": self.stage_index,
            "proposal": self.proposal,
            "m": self.m,
            "acceptance_rate": self.acceptance_rate,
            "mean": np.asarray(self.mean).tolist(),
            "covariance": np.asarray(self.covariance).tolist(),
            "elapsed_seconds": self.elapsed_seconds,
            "warning": self.warning,
        }


def _stage_points(generator: str, m: int, d: int, offset: int, base_skip: int):
    if generator == "sobol":
        return sobol_points(m, d, skip=base_skip + offset)
    if generator == "halton":
        return halton_points(m, d, start=1 + offset)
    if generator == "midpoint1d":
        if d != 1:
            raise ValueError("midpoint1d requires a one-dimensional problem")
        return midpoint_grid_1d(m)
    raise ValueError(f"unknown generator {generator!r}")


def _regularized(cov: np.ndarray) -> np.ndarray:
    cov = 0.5 * (cov + cov.T)
    k = cov.shape[0]
    return cov + (_RIDGE_EPS * np.trace(cov) / k) * np.eye(k)


def _refit(current: prop.Proposal, mean: np.ndarray, cov: np.ndarray, family: str) -> prop.Proposal:
    """Rebuild heavy-tailed blocks from slice moments; keep the rest."""
    blocks = []
    at = 0
    for b in current.blocks:
        sl = slice(at, at + b.dim)
        if b.kind in ("mvnormal", "mvcauchy"):
            mu = mean[sl]
            scale = _regularized(cov[sl, sl])
            blocks.append(prop.mvnormal(mu, scale) if family == "mvnormal" else prop.mvcauchy(mu, scale))
        else:
            blocks.append(b)
        at += b.dim
    return prop.Proposal(blocks)


def run_stages(
    target: TargetDensity,
    initial: prop.Proposal,
    schedule,
    n_stages: int,
    family: str = "mvcauchy",
    base_skip: int = 1,
    workers: int = 1,
):
    """Run ``n_stages`` rounds of discretization with moment-matched refits.

    ``schedule`` is a list of (M, generator) pairs, one per stage (extra
    entries are ignored).  Returns the final posterior and one
    :class:`StageReport` per executed stage.

    Raises :class:`StageError` if a stage ends with zero acceptance; the
    reports gathered so far ride on the exception.  A stage with acceptance
    below 0.1 only gets a warning string in its report.
    """
    if n_stages < 1:
        raise ValueError("n_stages must be >= 1")
    if len(schedule) < n_stages:
        raise ValueError("schedule must provide one (M, generator) entry per stage")
    if family not in ("mvcauchy", "mvnormal"):
        raise ValueError("family must be 'mvcauchy' or 'mvnormal'")

    reports: list[StageReport] = []
    current = initial
    offset = 0
    dp: DiscretePosterior = None
    for stage in range(1, n_stages + 1):
        m, generator = schedule[stage - 1]
        pts = _stage_points(generator, m, target.dim, offset, base_skip)
        offset += m
        t0 = time.perf_counter()
        try:
            dp = discretize(target, current, pts, workers=workers)
        except NoMassError as exc:
            d = target.dim
            reports.append(
                StageReport(
                    stage_index=stage,
                    proposal=current.describe(),
                    m=m,
                    acceptance_rate=0.0,
                    mean=np.full(d, np.nan),
                    covariance=np.full((d, d), np.nan),
                    elapsed_seconds=time.perf_counter() - t0,
                    warning="acceptance rate 0: no support point received mass",
                )
            )
            raise StageError(f"stage {stage} found no mass; revise the proposal", reports) from exc
        elapsed = time.perf_counter() - t0
        report = StageReport(
            stage_index=stage,
            proposal=current.describe(),
            m=m,
            acceptance_rate=dp.acceptance_rate,
            mean=dp.mean(),
            covariance=dp.covariance(),
            elapsed_seconds=elapsed,
        )
        if dp.acceptance_rate < LOW_ACCEPTANCE:
            report.warning = (
                f"acceptance rate {dp.acceptance_rate:.4f} below {LOW_ACCEPTANCE}: "
                "significant region not found or exploration scope too wide"
            )
        reports.append(report)
        if stage < n_stages:
            current = _refit(current, report.mean, report.covariance, family)
    return dp, reports
