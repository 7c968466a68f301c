"""Deterministic Bayesian computation on quasi-Monte Carlo support points.

The pipeline: generate a low-discrepancy point set on the unit hypercube
(:mod:`qda.qmc`), transport it onto the target's support through a proposal
density (:mod:`qda.proposal`), normalize the density values into a discrete
posterior (:mod:`qda.dacore`), and read every posterior quantity off that
fully known discrete distribution.  :mod:`qda.sampling` compresses or
resamples the result, :mod:`qda.adaptive` iterates with moment-matched
proposals, :mod:`qda.metrics` scores approximations, :mod:`qda.models`
bundles benchmark targets, and :mod:`qda.baselines` provides the
Metropolis-Hastings and exact Monte Carlo reference methods.
"""

__version__ = "0.1.0"

from .adaptive import StageReport, run_stages
from .baselines import MHConfig, exact_mc, mh_chain
from .dacore import (
    DiscretePosterior,
    TargetDensity,
    acceptance_rate,
    cdf_at,
    discretize,
    marginal_quantile,
    moment,
)
from .exceptions import (
    CapacityError,
    DomainError,
    NoMassError,
    StageError,
    TargetEvaluationError,
)
from .metrics import CdfOracle, error_stats, kolmogorov_discrete
from .proposal import (
    Proposal,
    ProposalBlock,
    gamma_block,
    gamma_quantile,
    inv_norm_cdf,
    mvcauchy,
    mvnormal,
    uniform_box,
)
from .qmc import SupportPointSet, from_array, halton_points, midpoint_grid_1d, sobol_points
from .sampling import RepresentationPointSet, draw, representation_points

__all__ = [n for n in dir() if not n.startswith("_")]
