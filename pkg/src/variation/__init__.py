"""
FrozenTime - Variation Module

How fast a loop function changes in time:
- Snapshot-difference norms ||nabla h_t||_{sigma inf}
- N-width average variation rates and their supremum
- The coefficients c_{sigma,sigma0}(G, t) and c_{sigma,N}(G)
"""

from .rates import (
    VariationTrace,
    snapshot_delta_norm,
    variation_trace,
    n_width_average,
    n_width_averages,
    sup_n_width,
    c_sigma_sigma0,
    c_coeff_trace,
    c_sigma_N,
    product_variation_bound,
    prior_variation_rate,
)

__all__ = [
    "VariationTrace",
    "snapshot_delta_norm",
    "variation_trace",
    "n_width_average",
    "n_width_averages",
    "sup_n_width",
    "c_sigma_sigma0",
    "c_coeff_trace",
    "c_sigma_N",
    "product_variation_bound",
    "prior_variation_rate",
]
