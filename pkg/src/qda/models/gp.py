"""Gaussian-process regression with a low-rank random-feature covariance.

The model is y_i = g(x_i)' beta + Z(x_i) + eps_i with a squared-exponential
correlation exp(-sum_j eta_j (x_j - x'_j)^2), noise-to-process variance
ratio rho, and the prior (1/sigma^2) exp(-(sum_j eta_j + rho)/2) on the
positive parameters.  The n x n correlation matrix is approximated by
Zm Zm' + rho I with Zm = [cos(X Pi), sin(X Pi)] / sqrt(m), which lets every
solve and determinant go through the 2m x 2m matrix Zm' Zm + rho I.

The frequency matrix Pi must follow N(0, diag(2 eta)) columns.  To keep the
negative log-posterior a deterministic function of theta, a standard-normal
base matrix is drawn once per configuration (seeded) and rescaled by
sqrt(2 eta) at every evaluation, which has the required distribution.

Parameter layout: theta = (beta_1..beta_q, sigma^2, eta_1..eta_d, rho).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..dacore import DiscretePosterior, TargetDensity


def _linear_basis(x: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones(x.shape[0]), x])


@dataclass
class GPConfig:
    """Data, basis, and feature settings for one regression run."""

    x: np.ndarray
    y: np.ndarray
    m: int = 50
    basis: callable = _linear_basis
    feature_seed: int = 0
    g_matrix: np.ndarray = field(init=False)
    base_features: np.ndarray = field(init=False)

    def __post_init__(self):
        self.x = np.atleast_2d(np.asarray(self.x, dtype=np.float64))
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.m < 1:
            raise ValueError("m must be >= 1")
        self.g_matrix = self.basis(self.x)
        rng = np.random.default_rng(self.feature_seed)
        self.base_features = rng.standard_normal((self.x.shape[1], self.m))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d(self) -> int:
        return self.x.shape[1]

    @property
    def q(self) -> int:
        return self.g_matrix.shape[1]

    @property
    def dim(self) -> int:
        return self.q + 1 + self.d + 1

    def support(self) -> tuple:
        return ("real",) * self.q + ("positive",) + ("positive",) * self.d + ("positive",)

    def split(self, theta: np.ndarray):
        q, d = self.q, self.d
        return theta[:q], float(theta[q]), theta[q + 1 : q + 1 + d], float(theta[q + 1 + d])


def rff_design(x: np.ndarray, eta: np.ndarray, base: np.ndarray) -> np.ndarray:
    """Feature matrix [cos(X Pi), sin(X Pi)] / sqrt(m), Pi = sqrt(2 eta) * base."""
    pi = np.sqrt(2.0 * eta)[:, None] * base
    ang = x @ pi
    m = base.shape[1]
    return np.concatenate([np.cos(ang), np.sin(ang)], axis=1) / np.sqrt(m)


def woodbury_inverse(zm: np.ndarray, rho: float) -> np.ndarray:
    """(Zm Zm' + rho I_n)^-1 through the 2m x 2m inner solve."""
    n, k = zm.shape
    inner = zm.T @ zm + rho * np.eye(k)
    c = cho_factor(inner, lower=True)
    return (np.eye(n) - zm @ cho_solve(c, zm.T)) / rho


class _RffSolve:
    """Factorized access to (Zm Zm' + rho I)^-1 products and log-determinant."""

    def __init__(self, zm: np.ndarray, rho: float):
        self.zm = zm
        self.rho = rho
        n, k = zm.shape
        inner = zm.T @ zm + rho * np.eye(k)
        try:
            self.chol = cho_factor(inner, lower=True)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError(
                f"inner 2m x 2m factorization failed at rho={rho:.3e}"
            ) from exc
        self.logdet = (n - k) * np.log(rho) + 2.0 * np.sum(
            np.log(np.diag(self.chol[0]))
        )

    def solve(self, b: np.ndarray) -> np.ndarray:
        return (b - self.zm @ cho_solve(self.chol, self.zm.T @ b)) / self.rho


def gp_nlp(theta, config: GPConfig) -> float:
    """Negative log posterior with the low-rank covariance; +inf off support."""
    theta = np.asarray(theta, dtype=np.float64)
    beta, sigma2, eta, rho = config.split(theta)
    if sigma2 <= 0.0 or rho <= 0.0 or np.any(eta <= 0.0):
        return np.inf
    zm = rff_design(config.x, eta, config.base_features)
    fac = _RffSolve(zm, rho)
    r = config.y - config.g_matrix @ beta
    quad = float(r @ fac.solve(r))
    return float(
        (config.n / 2.0 + 1.0) * np.log(sigma2)
        + 0.5 * fac.logdet
        + quad / (2.0 * sigma2)
        + 0.5 * (np.sum(eta) + rho)
    )


def gp_target(config: GPConfig) -> TargetDensity:
    return TargetDensity(
        neg_log_density=lambda t: gp_nlp(t, config),
        dim=config.dim,
        support=config.support(),
        name="gp",
    )


def _predictive_moments(theta: np.ndarray, config: GPConfig, x_star: np.ndarray):
    beta, sigma2, eta, rho = config.split(theta)
    zm = rff_design(config.x, eta, config.base_features)
    fac = _RffSolve(zm, rho)
    z_star = rff_design(np.atleast_2d(x_star), eta, config.base_features)[0]
    r_star = zm @ z_star
    r = config.y - config.g_matrix @ beta
    g_star = config.basis(np.atleast_2d(x_star))[0]
    mu = float(g_star @ beta + r_star @ fac.solve(r))
    var = float(sigma2 * (1.0 + rho - r_star @ fac.solve(r_star)))
    return mu, var


def gp_predict(dp: DiscretePosterior, config: GPConfig, x_star):
    """Point prediction and predictive density at a new input.

    Returns ``(y_hat, density)`` where y_hat = sum_i p_i mu(x*, theta_i)
    and ``density`` evaluates the posterior predictive mixture
    sum_i p_i phi(y; mu_i, var_i) over the positive-mass atoms.
    """
    x_star = np.asarray(x_star, dtype=np.float64)
    keep = np.flatnonzero(dp.masses > 0.0)
    mus = np.empty(keep.size)
    variances = np.empty(keep.size)
    for out_i, i in enumerate(keep):
        mus[out_i], variances[out_i] = _predictive_moments(dp.support[i], config, x_star)
    weights = dp.masses[keep]
    y_hat = float(weights @ mus)

    def density(y):
        y = np.asarray(y, dtype=np.float64)
        z = (y[..., None] - mus) / np.sqrt(variances)
        pdf = np.exp(-0.5 * z * z) / np.sqrt(2.0 * np.pi * variances)
        return pdf @ weights

    return y_hat, density


def gp_synthetic_data(n: int, d: int, seed: int, noise: float = 0.1):
    """Smooth test surface: sum of sin(2 pi x_j) plus a linear trend + noise."""
    rng = np.random.default_rng(seed)
    x = rng.random((n, d))
    signal = np.sum(np.sin(2.0 * np.pi * x), axis=1) + x @ np.linspace(0.5, 1.0, d)
    y = signal + noise * rng.standard_normal(n)
    return x, y
