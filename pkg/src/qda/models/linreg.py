"""Gaussian linear regression with the noninformative 1/sigma^2 prior, plus
its exact conjugate posterior, and the Bayesian lasso variant.

Parameter layout for the regression targets is (beta_0, beta_1..beta_d,
sigma^2); the lasso target appends lambda, giving dimension d + 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import proposal as prop
from ..dacore import TargetDensity


@dataclass
class LinRegData:
    """Observations plus the sufficient statistics the posteriors need."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    gamma_hat: np.ndarray
    s2: float
    beta_true: np.ndarray = None
    beta0_true: float = None

    @property
    def n(self) -> int:
        return self.z.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    @property
    def ztz_inv(self) -> np.ndarray:
        return np.linalg.inv(self.z.T @ self.z)


def make_linreg_data(
    d: int,
    n: int = None,
    seed: int = 0,
    beta0: float = 3.0,
    sigma2: float = 1.0,
) -> LinRegData:
    """Synthetic regression data: coefficients (-1, 2, 1.5, 0, ..., 0),
    equicorrelated predictors N(0, 0.5 11' + 0.5 I), default n = d + 100.
    """
    if n is None:
        n = d + 100
    rng = np.random.default_rng(seed)
    cov = 0.5 * np.ones((d, d)) + 0.5 * np.eye(d)
    x = rng.standard_normal((n, d)) @ np.linalg.cholesky(cov).T
    beta = np.zeros(d)
    beta[: min(3, d)] = [-1.0, 2.0, 1.5][: min(3, d)]
    y = beta0 + x @ beta + np.sqrt(sigma2) * rng.standard_normal(n)
    return _with_stats(x, y, beta_true=beta, beta0_true=beta0)


def _with_stats(x: np.ndarray, y: np.ndarray, **extra) -> LinRegData:
    n = x.shape[0]
    z = np.column_stack([np.ones(n), x])
    if np.linalg.matrix_rank(z) < z.shape[1]:
        raise np.linalg.LinAlgError("design matrix (1 X) is rank deficient")
    gamma_hat, *_ = np.linalg.lstsq(z, y, rcond=None)
    dof = n - x.shape[1] - 1
    s2 = float(np.sum((y - z @ gamma_hat) ** 2) / dof)
    return LinRegData(x=x, y=y, z=z, gamma_hat=gamma_hat, s2=s2, **extra)


def linreg_nlp(gamma, sigma2: float, data: LinRegData) -> float:
    """(n/2 + 1) log sigma^2 + ||y - Z gamma||^2 / (2 sigma^2); +inf if sigma^2 <= 0."""
    if sigma2 <= 0.0:
        return np.inf
    r = data.y - data.z @ np.asarray(gamma, dtype=np.float64)
    return float((data.n / 2.0 + 1.0) * np.log(sigma2) + r @ r / (2.0 * sigma2))


def linreg_target(data: LinRegData) -> TargetDensity:
    p = data.d + 1

    def batch(theta: np.ndarray) -> np.ndarray:
        gam, sig2 = theta[:, :p], theta[:, p]
        out = np.full(theta.shape[0], np.inf)
        ok = sig2 > 0.0
        if np.any(ok):
            r = data.y[:, None] - data.z @ gam[ok].T
            rss = np.sum(r * r, axis=0)
            out[ok] = (data.n / 2.0 + 1.0) * np.log(sig2[ok]) + rss / (2.0 * sig2[ok])
        return out

    return TargetDensity(
        neg_log_density=lambda t: linreg_nlp(t[:p], t[p], data),
        dim=p + 1,
        support=("real",) * p + ("positive",),
        name="linreg",
        neg_log_density_batch=batch,
    )


def linreg_proposal(data: LinRegData) -> prop.Proposal:
    """Cauchy(gamma_hat, s^2 (Z'Z)^-1) for the coefficients times
    Gamma(n-d-1, s^2/(n-d-1)) for the noise variance."""
    dof = data.n - data.d - 1
    return prop.Proposal(
        [
            prop.mvcauchy(data.gamma_hat, data.s2 * data.ztz_inv),
            prop.gamma_block(dof, data.s2 / dof),
        ]
    )


def linreg_exact_moments(data: LinRegData) -> dict:
    """Closed-form posterior moments: gamma | y has mean gamma_hat and the
    noise variance (n-d-1) s^2 Inv-chi^2_{n-d-1} has mean (n-d-1)s^2/(n-d-3)."""
    dof = data.n - data.d - 1
    if dof <= 2:
        raise ValueError("need n > d + 3 for the variance posterior mean to exist")
    return {
        "gamma_mean": data.gamma_hat.copy(),
        "sigma2_mean": dof * data.s2 / (dof - 2.0),
    }


def linreg_exact_sample(data: LinRegData, n: int, seed: int) -> np.ndarray:
    """Independent posterior draws of (gamma, sigma^2) from the conjugate form.

    sigma^2 = (n-d-1) s^2 / chi^2_{n-d-1}; gamma | sigma^2 is normal around
    gamma_hat with covariance sigma^2 (Z'Z)^-1.
    """
    rng = np.random.default_rng(seed)
    dof = data.n - data.d - 1
    sig2 = dof * data.s2 / rng.chisquare(dof, size=n)
    L = np.linalg.cholesky(data.ztz_inv)
    gam = data.gamma_hat + np.sqrt(sig2)[:, None] * (rng.standard_normal((n, data.d + 1)) @ L.T)
    return np.column_stack([gam, sig2])


def blasso_lambda_max(sigma2: float, n: int, d: int) -> float:
    """Upper endpoint 4 sigma sqrt(n log d) of the shrinkage prior's support."""
    return 4.0 * np.sqrt(sigma2) * np.sqrt(n * np.log(d))


def blasso_nlp(beta, beta0: float, sigma2: float, lam: float, data: LinRegData) -> float:
    """Negative log joint of the lasso posterior as printed: the gaussian
    misfit plus lambda * sum |beta_j| under the box constraint on lambda."""
    if sigma2 <= 0.0 or lam < 0.0 or lam > blasso_lambda_max(sigma2, data.n, data.d):
        return np.inf
    beta = np.asarray(beta, dtype=np.float64)
    r = data.y - beta0 - data.x @ beta
    return float(
        (data.n / 2.0 + 1.0) * np.log(sigma2)
        + r @ r / (2.0 * sigma2)
        + lam * np.sum(np.abs(beta))
    )


def blasso_target(data: LinRegData) -> TargetDensity:
    d = data.d
    p = d + 1  # intercept + coefficients

    def batch(theta: np.ndarray) -> np.ndarray:
        gam, sig2, lam = theta[:, :p], theta[:, p], theta[:, p + 1]
        out = np.full(theta.shape[0], np.inf)
        ok = (sig2 > 0.0) & (lam >= 0.0) & (lam <= blasso_lambda_max(sig2, data.n, d))
        if np.any(ok):
            r = data.y[:, None] - data.z @ gam[ok].T
            rss = np.sum(r * r, axis=0)
            pen = lam[ok] * np.sum(np.abs(gam[ok, 1:]), axis=1)
            out[ok] = (data.n / 2.0 + 1.0) * np.log(sig2[ok]) + rss / (2.0 * sig2[ok]) + pen
        return out

    return TargetDensity(
        neg_log_density=lambda t: blasso_nlp(t[1 : p], t[0], t[p], t[p + 1], data),
        dim=p + 2,
        support=("real",) * p + ("positive", "positive"),
        name="blasso",
        neg_log_density_batch=batch,
    )


def blasso_proposal(data: LinRegData) -> prop.Proposal:
    """The regression proposal extended with a uniform block for lambda.

    The box reaches the support endpoint evaluated at sigma = 2s; posterior
    mass beyond twice the residual scale is negligible, so the box covers
    essentially all of lambda's data-dependent support.
    """
    dof = data.n - data.d - 1
    return prop.Proposal(
        [
            prop.mvcauchy(data.gamma_hat, data.s2 * data.ztz_inv),
            prop.gamma_block(dof, data.s2 / dof),
            prop.uniform_box([0.0], [blasso_lambda_max(4.0 * data.s2, data.n, data.d)]),
        ]
    )
