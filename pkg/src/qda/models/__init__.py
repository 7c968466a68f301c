from .beta_mixture import (
    beta_mixture_cdf,
    beta_mixture_mean,
    beta_mixture_nll,
    beta_mixture_oracle,
    beta_mixture_sample,
    beta_mixture_target,
)
from .gauss2d import (
    BANANA_MEAN,
    NORMAL2D_COV,
    NORMAL2D_MEAN,
    banana_nll,
    banana_target,
    normal2d_nll,
    normal2d_oracle,
    normal2d_sample,
    normal2d_target,
)
from .linreg import (
    LinRegData,
    blasso_lambda_max,
    blasso_nlp,
    blasso_proposal,
    blasso_target,
    linreg_exact_moments,
    linreg_exact_sample,
    linreg_nlp,
    linreg_proposal,
    linreg_target,
    make_linreg_data,
)
from .gp import (
    GPConfig,
    gp_nlp,
    gp_predict,
    gp_synthetic_data,
    gp_target,
    rff_design,
    woodbury_inverse,
)
from .user import plugin_target, subprocess_target

__all__ = [n for n in dir() if not n.startswith("_")]
