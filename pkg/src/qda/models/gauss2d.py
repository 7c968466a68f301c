"""Two-dimensional benchmark targets: a correlated normal and a banana shape.

The banana density is phi(x1; 0, 100) * phi(x2 + 0.03 x1^2 - 3; 0, 1);
both marginal means are exactly zero (E x2 = 3 - 0.03 E x1^2 = 0).
"""

from __future__ import annotations

import numpy as np
from scipy.stats import multivariate_normal

from ..dacore import TargetDensity
from ..metrics import CdfOracle

NORMAL2D_MEAN = np.array([2.0, -1.0])
NORMAL2D_COV = np.array([[4.0, 0.5], [0.5, 1.0]])
BANANA_MEAN = np.array([0.0, 0.0])

_PREC = np.linalg.inv(NORMAL2D_COV)
_LOGDET = float(np.log(np.linalg.det(2.0 * np.pi * NORMAL2D_COV)))


def normal2d_nll(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    d = x - NORMAL2D_MEAN
    return float(0.5 * d @ _PREC @ d + 0.5 * _LOGDET)


def _normal2d_batch(y: np.ndarray) -> np.ndarray:
    d = y - NORMAL2D_MEAN
    return 0.5 * np.einsum("ij,jk,ik->i", d, _PREC, d) + 0.5 * _LOGDET


def normal2d_target() -> TargetDensity:
    return TargetDensity(
        neg_log_density=normal2d_nll,
        dim=2,
        support=("real", "real"),
        name="normal2d",
        neg_log_density_batch=_normal2d_batch,
    )


def normal2d_sample(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    L = np.linalg.cholesky(NORMAL2D_COV)
    return NORMAL2D_MEAN + rng.standard_normal((n, 2)) @ L.T


def normal2d_oracle() -> CdfOracle:
    mvn = multivariate_normal(mean=NORMAL2D_MEAN, cov=NORMAL2D_COV)
    return CdfOracle(cdf=lambda x: float(mvn.cdf(np.asarray(x))), dim=2)


_BANANA_CONST = 0.5 * np.log(2.0 * np.pi * 100.0) + 0.5 * np.log(2.0 * np.pi)


def banana_nll(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(
        0.5 * x[0] ** 2 / 100.0 + 0.5 * (x[1] + 0.03 * x[0] ** 2 - 3.0) ** 2 + _BANANA_CONST
    )


def _banana_batch(y: np.ndarray) -> np.ndarray:
    x1, x2 = y[:, 0], y[:, 1]
    return 0.5 * x1**2 / 100.0 + 0.5 * (x2 + 0.03 * x1**2 - 3.0) ** 2 + _BANANA_CONST


def banana_target() -> TargetDensity:
    return TargetDensity(
        neg_log_density=banana_nll,
        dim=2,
        support=("real", "real"),
        name="banana",
        neg_log_density_batch=_banana_batch,
    )
