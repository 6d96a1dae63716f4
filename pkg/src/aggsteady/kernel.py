"""Power-law interaction kernels and the two-point (delta pair) competitor."""

from dataclasses import dataclass

import numpy as np

from .specfun import DomainError


def power_term(x, p):
    """|x|^p / p with the convention |x|^0/0 := log|x|."""
    x = np.abs(np.asarray(x, dtype=float))
    if p == 0:
        return np.log(x)
    return x**p / p


def power_term_derivative(x, p):
    """d/dr of :func:`power_term` evaluated at r = |x|, i.e. r^(p-1)."""
    x = np.abs(np.asarray(x, dtype=float))
    return x ** (p - 1.0)


@dataclass(frozen=True)
class PowerLawKernel:
    """K(x) = |x|^a/a - |x|^b/b in dimension ``d`` for total mass ``M0``."""

    a: float
    b: float
    d: int = 1
    M0: float = 1.0

    def __post_init__(self):
        if not self.a > self.b > -self.d:
            raise DomainError(f"need a > b > -d, got a={self.a}, b={self.b}, d={self.d}")
        if self.M0 < 0:
            raise DomainError("mass must be nonnegative")

    def __call__(self, r):
        return power_term(r, self.a) - power_term(r, self.b)

    def derivative(self, r):
        """Radial derivative K'(r) = r^(a-1) - r^(b-1)."""
        return power_term_derivative(r, self.a) - power_term_derivative(r, self.b)


@dataclass(frozen=True)
class DeltaPair:
    """Two point masses M0/2 at +R0 and -R0 on the line."""

    R0: float
    M0: float = 1.0

    def __post_init__(self):
        if self.R0 <= 0:
            raise DomainError("R0 must be positive")

    def energy_per_mass(self, kernel):
        """(1/M0) * integral of rho (K * rho); self-interaction K(0) is dropped."""
        if kernel.b <= 0 or kernel.a <= 0:
            raise DomainError("delta self-energy diverges for nonpositive exponents")
        return 0.5 * self.M0 * float(kernel(2.0 * self.R0))

    def interaction_energy(self, kernel):
        return self.M0 * self.energy_per_mass(kernel)


def optimal_delta_pair(kernel):
    """Minimise (M0/2) K(2 R0) over R0 > 0.

    The stationarity condition K'(2 R0) = 0 gives (2 R0)^(a-b) = 1, so
    R0 = 1/2 for every pair a > b > 0.
    """
    if kernel.b <= 0:
        raise DomainError("delta pair energy diverges for b <= 0")
    pair = DeltaPair(R0=0.5, M0=kernel.M0)
    return pair, pair.energy_per_mass(kernel)


def delta_pair_energy_b2(a, M0=1.0):
    """Closed-form energy per mass (2-a) M0 / (4a) of the optimal pair when b = 2."""
    return (2.0 - a) * M0 / (4.0 * a)

