"""Simulator for a 1D random brickwork circuit with a single many-body scar.

The local two-site gate acts as the identity on |00> and as a fresh
Haar-random unitary on the orthogonal complement.  The package provides

* gate sampling and Monte Carlo estimation of the folded (replica-averaged)
  channels, plus a brute-force small-system oracle (`haar`, `channels`,
  `oracle`);
* exact and stochastic interface dynamics of the averaged single-copy
  sector: biased walks, the walker-pair transfer chain, order-parameter
  relaxation (`interface`, `orderparam`);
* the two-copy formalism: seven-element site basis, Gram/gate matrices,
  finite-chain and light-cone evolution, Renyi-2 entropy and OTOC
  (`gram`, `pairstate`, `lightcone`, `analytics`);
* a reproducible experiment CLI (`cli`).
"""

__version__ = "0.1.0"

from .interface import VelocityDiffusion, analytic_profile, velocity_diffusion
from .orderparam import PerturbationParams, absorbing_probability, order_parameter
from .analytics import critical_lambda, otoc_plateau, page_curve

__all__ = [
    "__version__",
    "VelocityDiffusion",
    "analytic_profile",
    "velocity_diffusion",
    "PerturbationParams",
    "absorbing_probability",
    "order_parameter",
    "critical_lambda",
    "otoc_plateau",
    "page_curve",
]
