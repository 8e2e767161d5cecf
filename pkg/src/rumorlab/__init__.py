"""rumorlab: exact thresholds and stochastic simulation for rumor spread on trees.

The package pairs every closed-form quantity (offspring laws, generating
functions, critical thresholds, survival probabilities) with an independent
stochastic oracle (branching-process Monte Carlo and an event-driven
simulator of the actual continuous-time dynamics).
"""

from .errors import NumericFault
from .specfun import (
    EXACT_LIMIT,
    ExactScalar,
    GammaArgs,
    gamma_asymptotic_log,
    gamma_recurrence_residual,
    partial_exp_sum,
    scaled_incomplete_gamma,
)
from .laws import (
    PgfSpec,
    Pmf,
    beta_gap,
    beta_paper,
    beta_series,
    beta_value,
    law_N,
    law_N_prime,
    law_X,
    law_X_prime,
    mean_N,
    mean_X,
    pgf_N_prime,
    pgf_X_prime,
    tv_distance,
)
from .thresholds import (
    RootResult,
    ThresholdReport,
    alpha_critical,
    asymptotic_h_bound,
    max_h,
    p_critical,
    psi_root,
    theta,
    theta_double_sum,
)
from .gw import (
    EstimateCI,
    GwOutcome,
    GwSpec,
    coupled_monotonicity_trial,
    extinction_by_iteration,
    sample_offspring,
    simulate_gw,
    survival_mc,
    wilson_interval,
)
from .treegen import ROOT, TreeTopology, VertexId, VertexRole, cayley, children, hub_path
from .ctmc import (
    SimOutcome,
    SurvivalEstimate,
    estimate_survival_ctmc,
    offspring_empirical,
    path_traversal_empirical,
    simulate_mt,
)

__version__ = "0.1.0"

__all__ = [
    "EXACT_LIMIT",
    "EstimateCI",
    "ExactScalar",
    "GammaArgs",
    "GwOutcome",
    "GwSpec",
    "NumericFault",
    "PgfSpec",
    "Pmf",
    "ROOT",
    "RootResult",
    "SimOutcome",
    "SurvivalEstimate",
    "ThresholdReport",
    "TreeTopology",
    "VertexId",
    "VertexRole",
    "alpha_critical",
    "asymptotic_h_bound",
    "beta_gap",
    "beta_paper",
    "beta_series",
    "beta_value",
    "cayley",
    "children",
    "coupled_monotonicity_trial",
    "estimate_survival_ctmc",
    "extinction_by_iteration",
    "gamma_asymptotic_log",
    "gamma_recurrence_residual",
    "hub_path",
    "law_N",
    "law_N_prime",
    "law_X",
    "law_X_prime",
    "max_h",
    "mean_N",
    "mean_X",
    "offspring_empirical",
    "p_critical",
    "partial_exp_sum",
    "path_traversal_empirical",
    "pgf_N_prime",
    "pgf_X_prime",
    "psi_root",
    "sample_offspring",
    "scaled_incomplete_gamma",
    "simulate_gw",
    "simulate_mt",
    "survival_mc",
    "theta",
    "theta_double_sum",
    "tv_distance",
    "wilson_interval",
]
