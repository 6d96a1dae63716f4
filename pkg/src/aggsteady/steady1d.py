"""Explicit one-dimensional steady states for b = 2 or a = 2.

Densities are returned as :class:`~aggsteady.quadrature.RadialDensity`
sums of powers of (R^2 - x^2), so every moment and the Lagrange
multiplier E = (K * rho)(0) follow from Beta-function integrals.
"""

import math
from dataclasses import dataclass

import numpy as np

from .kernel import DeltaPair, PowerLawKernel, delta_pair_energy_b2, optimal_delta_pair
from .quadrature import QuadratureSpec, RadialDensity, integrate_singular
from .specfun import DomainError, ball_log_moment, ball_moment, beta_fn

__all__ = [
    "DeltaPair",
    "PowerLawKernel",
    "SteadyState1D",
    "UnsupportedBranch",
    "construct_a2",
    "construct_b2",
    "delta_pair_optimal",
    "energy_b2_closed_form",
    "energy_of_family",
    "family_radius",
    "energy_of_family_derivative",
    "origin_potential",
    "rescaled_moment",
]

BRANCHES = ("b2", "a2_regular", "a2_family")


class UnsupportedBranch(DomainError):
    """Raised for exponents outside the explicit one-dimensional branches."""


@dataclass(frozen=True)
class SteadyState1D:
    a: float
    b: float
    R: float
    branch: str
    c: float
    M0: float
    density: RadialDensity
    E: float

    d = 1

    @property
    def kernel(self):
        return PowerLawKernel(self.a, self.b, 1, self.M0)

    @property
    def boundary_exponent(self):
        return self.density.boundary_exponent

    def __call__(self, x):
        return self.density(x)

    @property
    def valid(self):
        return all(c >= 0 for c, _ in self.density.terms)


def origin_potential(density, a, b, d=1):
    """E = (K * rho)(0) = int |y|^a/a rho - int |y|^b/b rho."""
    out = 0.0
    for expo, sign in ((a, 1.0), (b, -1.0)):
        for coef, beta in density.terms:
            if expo == 0:
                val = ball_log_moment(beta, d, density.R)
            else:
                val = ball_moment(expo, beta, d, density.R) / expo
            out += sign * coef * val
    return out


def construct_b2(a, M0=1.0):
    """Steady state for K = |x|^a/a - |x|^2/2 with 2 < a < 3."""
    if not 2.0 < a < 3.0:
        raise UnsupportedBranch(
            f"b = 2 branch needs a in (2, 3), got a={a}; for a >= 3 only delta pairs are stable"
        )
    cosa = math.cos(a * math.pi / 2.0)
    R = (-cosa / ((a - 1.0) * math.pi) * beta_fn(0.5, (3.0 - a) / 2.0)) ** (1.0 / (a - 2.0))
    c = M0 / (a - 1.0)
    density = RadialDensity(R, ((-c * cosa / math.pi, (1.0 - a) / 2.0),))
    E = origin_potential(density, a, 2.0)
    return SteadyState1D(a, 2.0, R, "b2", 0.0, M0, density, E)


def _cos_ratio(b):
    # cos(pi b/2)/(1-b), continuous through b = 1 where it equals pi/2
    return 0.5 * math.pi * float(np.sinc((1.0 - b) / 2.0))


def family_radius(b, c):
    """Support radius of the a = 2 family from the unit-mass constraint."""
    bracket = beta_fn(0.5, (3.0 - b) / 2.0)
    if c:
        bracket += c * beta_fn(0.5, (1.0 - b) / 2.0)
    return (_cos_ratio(b) / math.pi * bracket) ** (-1.0 / (2.0 - b))


def construct_a2(b, c=0.0, M0=1.0):
    """Steady state for K = |x|^2/2 - |x|^b/b with -1 < b < 2.

    ``c`` weights the extra component c R^2 (R^2-x^2)^(-(1+b)/2), which is
    admissible only for -1 < b < 1 and must be nonnegative.  b = 0 uses the
    logarithmic kernel; b = 1 is handled by the continuous form of the
    prefactor cos(pi b/2)/(1-b).
    """
    if not -1.0 < b < 2.0:
        raise UnsupportedBranch(f"a = 2 branch needs b in (-1, 2), got b={b}")
    if c < 0:
        raise DomainError("c must be nonnegative for a nonnegative density")
    if c > 0 and b >= 1.0:
        raise UnsupportedBranch("the c-family exists only for b in (-1, 1)")
    R = family_radius(b, c)
    pref = M0 * _cos_ratio(b) / math.pi
    terms = [(pref, (1.0 - b) / 2.0)]
    if c > 0:
        terms.append((pref * c * R * R, -(1.0 + b) / 2.0))
    density = RadialDensity(R, tuple(terms))
    E = origin_potential(density, 2.0, b)
    branch = "a2_family" if c > 0 else "a2_regular"
    return SteadyState1D(2.0, b, R, branch, float(c), M0, density, E)


def energy_of_family(b, c, M0=1.0):
    """Closed-form multiplier E(c) of the a = 2, b in (0, 1) family."""
    if not 0.0 < b < 1.0:
        raise DomainError("closed form holds for b in (0, 1)")
    R = family_radius(b, c)
    bracket = 0.5 * ((1.0 - b) / (4.0 - b) + c) / ((1.0 - b) + (2.0 - b) * c)
    bracket -= c / (b * (1.0 - b)) + 1.0 / (2.0 * b)
    return M0 * bracket * R * R


def energy_of_family_derivative(b, c, M0=1.0):
    """dE/dc = M0 (2-b) R^2 c^2 / ((1-b)(1-b+(2-b)c)^2)."""
    R = family_radius(b, c)
    return M0 * (2.0 - b) * R * R * c * c / ((1.0 - b) * (1.0 - b + (2.0 - b) * c) ** 2)


def energy_b2_closed_form(a, M0=1.0):
    """E = (2-a) M0 R^2 / (a (4-a)) for the b = 2 state."""
    R = construct_b2(a, M0).R
    return (2.0 - a) / (a * (4.0 - a)) * M0 * R * R


def delta_pair_optimal(kernel):
    """Energy-optimal two-point competitor and its energy per mass."""
    if kernel.a <= 2.0:
        raise DomainError("need a > 2 for an attractive-dominant pair")
    pair, energy = optimal_delta_pair(kernel)
    if kernel.b == 2.0:
        energy = delta_pair_energy_b2(kernel.a, kernel.M0)
    return pair, energy


def rescaled_moment(state, order, spec=None, check=False):
    """R^(-order) * integral |y|^order rho(y) dy.

    The closed form comes from ball moments; with ``check`` it is
    confirmed by Gauss-Jacobi quadrature of each density term.
    """
    if order < 0 or order % 2:
        raise DomainError("order must be a nonnegative even integer")
    rho = state.density
    value = rho.moment(order, 1) / rho.R**order
    if check:
        spec = spec or QuadratureSpec()
        quad = 0.0
        for coef, beta in rho.terms:
            qs = QuadratureSpec(nodes=spec.nodes, left_exponent=beta, right_exponent=beta,
                                rel_tol=spec.rel_tol)
            quad += coef * integrate_singular(lambda y: np.abs(y) ** order, -rho.R, rho.R, qs)
        quad /= rho.R**order
        if abs(quad - value) > 1e3 * spec.rel_tol * abs(value):
            raise ArithmeticError(f"moment mismatch: closed form {value}, quadrature {quad}")
    return value
