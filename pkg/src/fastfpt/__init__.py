"""First-passage times for a growing population of searchers.

Searchers are injected at a constant rate and search independently; the
package computes when the k-th of them first reaches the target: exact
survival and density formulas driven by adaptive quadrature, fast-rate
limit laws (Weibull and Gumbel minima and their k-th order extensions),
scaling constants in explicit and Lambert-W form, and counter-seeded Monte
Carlo verification with interchangeable compiled and pure numpy backends.
"""

from .asymptotics import (LimitLaw, ScalingConstants, YkLaw, ZkLaw,
                          equivalent_initial_searchers, limit_density_zk,
                          limit_survival_yk, mean_estimate, moment_limit_exp,
                          moment_limit_power, scaling_exp_lambertw,
                          scaling_exp_theorem, scaling_power)
from .immigration import (CumulativeIntegralTable, KthFptDistribution,
                          QuadratureError, exactly_j_found_probability,
                          integral_one_minus_s, kth_density, kth_survival,
                          mean_kth_fpt_numeric, short_time_law_integral,
                          survival_with_immigration)
from .montecarlo import (McCampaign, McResult, empirical_survival, ks_distance,
                         ks_two_sample, run_campaign, simulate_trial)
from .survival import (CtmcNetwork, ExpLaw, ExponentialFixture,
                       HalfLineDiffusion, PowerFixture, PowerLaw,
                       SphereEscape3D, SurvivalModel, ctmc_from_json,
                       ctmc_sample_tau, ctmc_short_time_law, ctmc_survival,
                       grid_network, halfline_sample_tau, halfline_survival,
                       sphere_sample_tau, sphere_survival)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # survival models
    "SurvivalModel", "HalfLineDiffusion", "SphereEscape3D", "CtmcNetwork",
    "PowerFixture", "ExponentialFixture", "PowerLaw", "ExpLaw",
    "halfline_survival", "halfline_sample_tau", "sphere_survival",
    "sphere_sample_tau", "ctmc_survival", "ctmc_sample_tau",
    "ctmc_short_time_law", "ctmc_from_json", "grid_network",
    # immigration
    "QuadratureError", "CumulativeIntegralTable", "KthFptDistribution",
    "integral_one_minus_s", "short_time_law_integral",
    "survival_with_immigration", "kth_survival", "kth_density",
    "exactly_j_found_probability", "mean_kth_fpt_numeric",
    # asymptotics
    "ScalingConstants", "LimitLaw", "YkLaw", "ZkLaw", "scaling_power",
    "scaling_exp_theorem", "scaling_exp_lambertw", "limit_survival_yk",
    "limit_density_zk", "moment_limit_power", "moment_limit_exp",
    "mean_estimate", "equivalent_initial_searchers",
    # monte carlo
    "McCampaign", "McResult", "simulate_trial", "run_campaign",
    "empirical_survival", "ks_distance", "ks_two_sample",
]
