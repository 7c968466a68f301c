"""Equal-weight mixture of Beta(6, 3) and Beta(2, 7) on (0, 1)."""

from __future__ import annotations

import numpy as np
from scipy.special import betainc, betaln

from ..dacore import TargetDensity
from ..metrics import CdfOracle

_A1, _B1 = 6.0, 3.0
_A2, _B2 = 2.0, 7.0
_LOGC1 = -betaln(_A1, _B1)
_LOGC2 = -betaln(_A2, _B2)


def _mixture_pdf(x: np.ndarray) -> np.ndarray:
    p1 = np.exp(_LOGC1 + (_A1 - 1) * np.log(x) + (_B1 - 1) * np.log1p(-x))
    p2 = np.exp(_LOGC2 + (_A2 - 1) * np.log(x) + (_B2 - 1) * np.log1p(-x))
    return 0.5 * p1 + 0.5 * p2


def beta_mixture_nll(x) -> float:
    """Negative log of the mixture density; +inf outside (0, 1)."""
    x = float(np.asarray(x).reshape(()) if np.ndim(x) == 0 else np.asarray(x)[0])
    if not 0.0 < x < 1.0:
        return np.inf
    return float(-np.log(_mixture_pdf(np.array([x]))[0]))


def _nll_batch(y: np.ndarray) -> np.ndarray:
    x = y[:, 0]
    out = np.full(x.shape, np.inf)
    ok = (x > 0.0) & (x < 1.0)
    with np.errstate(divide="ignore"):
        out[ok] = -np.log(_mixture_pdf(x[ok]))
    return out


def beta_mixture_target() -> TargetDensity:
    return TargetDensity(
        neg_log_density=beta_mixture_nll,
        dim=1,
        support=(("interval", 0.0, 1.0),),
        name="beta_mixture",
        neg_log_density_batch=_nll_batch,
    )


def beta_mixture_cdf(x) -> float:
    """Mixture CDF as a weighted sum of regularized incomplete betas."""
    x = float(np.clip(np.asarray(x).ravel()[0], 0.0, 1.0))
    return float(0.5 * betainc(_A1, _B1, x) + 0.5 * betainc(_A2, _B2, x))


def beta_mixture_oracle() -> CdfOracle:
    return CdfOracle(cdf=beta_mixture_cdf, dim=1)


def beta_mixture_mean() -> float:
    """0.5 * 6/9 + 0.5 * 2/9 = 4/9."""
    return 0.5 * (_A1 / (_A1 + _B1)) + 0.5 * (_A2 / (_A2 + _B2))


def beta_mixture_sample(n: int, seed: int) -> np.ndarray:
    """Exact draws using the mixture structure (component flip, then beta)."""
    rng = np.random.default_rng(seed)
    pick = rng.random(n) < 0.5
    out = np.where(pick, rng.beta(_A1, _B1, size=n), rng.beta(_A2, _B2, size=n))
    return out[:, None]
