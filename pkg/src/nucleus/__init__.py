"""Nuclearity indices, approximation numbers and entropy growth orders
for finite-rank operators between Euclidean spaces."""

from ._errors import ComputationError, InputError, NucleusError, ParameterError
from .cost import CostReport, conjugate_exponent, math_cost, phys_cost
from .decomp import (
    Decomposition,
    nu2_trace,
    pietsch_bound,
    pietsch_decompose,
    reconstruct,
    spectral_decompose,
)
from .dilution import (
    alpha_window,
    default_alpha,
    dilute_uniform,
    independent_dilute,
    independent_factor,
    schauder_schedule,
    schauder_sum,
    uniform_factor,
)
from .entropy import (
    EigenvalueModel,
    EntropyBounds,
    GrowthReport,
    entropy_bounds,
    growth_orders,
    m_of_eps,
)
from .gibbs import EnergySpectrum, SweepTable, beta_sweep, gibbs_operator, gibbs_weights
from .linop import (
    Operator,
    SingularSpectrum,
    approximation_numbers,
    as_operator,
    rho_p,
    singular_spectrum,
)
from .mixednorm import NormBound, two_to_q_norm

__version__ = "0.1.0"
