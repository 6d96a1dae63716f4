"""Explicit steady states of the aggregation equation with power-law kernels.

K(x) = |x|^a/a - |x|^b/b.  The package builds compactly supported radial
equilibria from weighted power-kernel identities on a ball, inverts
first-kind integral equations on an interval, and checks the results by
singular quadrature and by a particle gradient-descent oracle.
"""

from .config import DEFAULTS, Tolerances
from .kernel import DeltaPair, PowerLawKernel
from .quadrature import QuadratureError, QuadratureSpec, RadialDensity
from .specfun import DomainError
from .steady1d import SteadyState1D, construct_a2, construct_b2
from .steadyhd import SteadyStateHD, construct_hd
from .verify import euler_lagrange_report, particle_descent

__all__ = [
    "DEFAULTS",
    "DeltaPair",
    "DomainError",
    "PowerLawKernel",
    "QuadratureError",
    "QuadratureSpec",
    "RadialDensity",
    "SteadyState1D",
    "SteadyStateHD",
    "Tolerances",
    "construct_a2",
    "construct_b2",
    "construct_hd",
    "euler_lagrange_report",
    "particle_descent",
]

__version__ = "0.1.0"
