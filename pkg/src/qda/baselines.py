"""Metropolis-Hastings and exact Monte Carlo reference methods.

Both exist so the discretization pipeline can be benchmarked against the
standard approaches on the bundled targets.  Chains are seeded and fully
reproducible; independent repetitions should derive their seeds from a
master seed plus the repetition index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dacore import TargetDensity
from .models.beta_mixture import beta_mixture_sample
from .models.gauss2d import normal2d_sample
from .models.linreg import linreg_exact_sample
from .proposal import Proposal


@dataclass
class MHConfig:
    kind: str  # "independence" | "random_walk"
    chain_length: int
    burn_in: int = None
    seed: int = 0
    proposal: Proposal = None  # independence kind
    step_scale: np.ndarray = None  # random_walk kind
    initial: np.ndarray = None

    def __post_init__(self):
        if self.burn_in is None:
            self.burn_in = self.chain_length // 10
        if not self.chain_length > self.burn_in >= 0:
            raise ValueError("need chain_length > burn_in >= 0")
        if self.kind == "independence" and self.proposal is None:
            raise ValueError("independence sampler needs a proposal")
        if self.kind == "random_walk" and self.step_scale is None:
            raise ValueError("random-walk sampler needs a step scale")


def mh_chain(target: TargetDensity, cfg: MHConfig):
    """Run one chain; returns (post-burn-in states, acceptance fraction).

    Independence chains draw candidates from the proposal transport and use
    the ratio exp(ell(x) - ell(y) + log psi(x) - log psi(y)); random walks
    add centered normal steps and need no proposal correction.  Chains start
    at ``cfg.initial`` (random walk) or the proposal's center point.
    """
    rng = np.random.default_rng(cfg.seed)
    d = target.dim

    if cfg.kind == "independence":
        u = np.clip(rng.random((cfg.chain_length, d)), 1e-15, 1.0 - 1e-15)
        cand, cand_logpsi = cfg.proposal.map_points(u)
        x, logpsi_x = cfg.proposal.map_point(np.full(d, 0.5))
    elif cfg.kind == "random_walk":
        if cfg.initial is None:
            raise ValueError("random-walk sampler needs an initial state")
        x = np.asarray(cfg.initial, dtype=np.float64).copy()
        logpsi_x = 0.0
        step = np.broadcast_to(np.asarray(cfg.step_scale, dtype=np.float64), (d,))
        cand_noise = rng.standard_normal((cfg.chain_length, d)) * step
    else:
        raise ValueError(f"unknown sampler kind {cfg.kind!r}")

    ell_x = float(target.neg_log_density(x))
    if not np.isfinite(ell_x):
        raise ValueError("initial state has zero density; pick a feasible start")

    log_accept_u = np.log(rng.random(cfg.chain_length))
    out = np.empty((cfg.chain_length, d))
    accepted = 0
    for t in range(cfg.chain_length):
        if cfg.kind == "independence":
            y, logpsi_y = cand[t], float(cand_logpsi[t])
        else:
            y, logpsi_y = x + cand_noise[t], 0.0
        ell_y = float(target.neg_log_density(y))
        log_ratio = (ell_x - ell_y) + (logpsi_x - logpsi_y)
        if log_accept_u[t] < log_ratio:
            x, ell_x, logpsi_x = y, ell_y, logpsi_y
            accepted += 1
        out[t] = x
    return out[cfg.burn_in :], accepted / cfg.chain_length


def exact_mc(model: str, n: int, seed: int, data=None) -> np.ndarray:
    """Independent exact draws for models with a closed-form sampler."""
    if model == "beta_mixture":
        return beta_mixture_sample(n, seed)
    if model == "normal2d":
        return normal2d_sample(n, seed)
    if model == "linreg":
        if data is None:
            raise ValueError("linreg exact sampling needs the dataset")
        return linreg_exact_sample(data, n, seed)
    raise ValueError(f"no exact sampler for model {model!r}")
