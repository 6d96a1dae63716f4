"""Radial steady states in R^d for even attractive exponent a = 2k.

The density is sought as

    rho(x) = sum_{j=1..k} A_j R^(2k-2j) (R^2-|x|^2)^(j-s),   s = (b+d)/2,

and each term has an explicit |x-y|^b potential on the ball, a polynomial
in |x|^2.  Matching powers of |x| gives A as a linear function of the
rescaled moments M_{2j} = R^(-2j) int |x|^(2j) rho, and the moment
definitions close into the eigenproblem R^(b-2k) M = D M.

Every coefficient that carries a factor b (the identity coefficients
with j >= 1 and the right-hand side F) is stored divided by b, so the
logarithmic case b = 0 needs no special treatment.
"""

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .config import DEFAULTS
from .kernel import PowerLawKernel
from .quadrature import RadialDensity, convolve_radial
from .specfun import (
    DomainError,
    angular_power_average,
    beta_continued,
    hyp2f1_poly,
    pochhammer,
)
from .steady1d import origin_potential

__all__ = [
    "IdentityCoefficients",
    "IdentityReport",
    "MomentVector",
    "SteadyStateHD",
    "a2_closed_form",
    "b_bar",
    "b_max_threshold",
    "b_upper",
    "check_identity_hd",
    "construct_hd",
    "fundamental_identity_check",
    "fundamental_identity_value",
    "governing_rhs_coefficients",
    "identity_coefficient",
    "identity_table",
    "moment_eigenproblem",
    "moment_matrix",
    "solve_coefficients",
]


def _ball_factor(d):
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0)


# -- thresholds ---------------------------------------------------------------


def b_max_threshold(a, d):
    """Upper limit of b for ball-supported states, ((3-d)a-10+7d-d^2)/(a+d-3)."""
    if a + d <= 3:
        raise DomainError(f"b_max is undefined for a + d <= 3 (a={a}, d={d})")
    return ((3.0 - d) * a - 10.0 + 7.0 * d - d * d) / (a + d - 3.0)


def b_upper(k, d):
    """Largest admissible b for the construction with a = 2k.

    This is min(a, b_max); for a = 2, d = 1 the threshold formula is 0/0
    and its limit 4 - d = 3 is used, so the bound is a = 2.
    """
    a = 2.0 * k
    bm = 4.0 - d if a + d == 3 else b_max_threshold(a, d)
    return min(a, bm)


def b_bar(d):
    """b above which the a = 4 density is negative at the origin."""
    return (2.0 + 2.0 * d - d * d) / (d + 1.0)


# -- identities ---------------------------------------------------------------


def _check_identity_range(k, b, d):
    if not -d < b < 2 + 2 * k - d:
        raise DomainError(f"identity diverges: need b in ({-d}, {2 + 2 * k - d}), got b={b}")


def _identity_prefactor(k, b, d):
    s = (b + d) / 2.0
    return _ball_factor(d) * beta_continued(s, k + 1.0 - s)


def identity_coefficient(k, j, b, d):
    """C_kj: coefficient of R^(2k-2j)|x|^(2j) in int (R^2-|y|^2)^(k-s)|x-y|^b dy."""
    _check_identity_range(k, b, d)
    if j < 0 or j > k:
        return 0.0
    return (
        _identity_prefactor(k, b, d)
        * pochhammer(-b / 2.0, j)
        * pochhammer(-k, j)
        / (math.factorial(j) * pochhammer(d / 2.0, j))
    )


def _reduced_coefficient(k, j, b, d):
    """C_kj / b for j >= 1, finite at b = 0."""
    _check_identity_range(k, b, d)
    if j < 1 or j > k:
        return 0.0
    return (
        _identity_prefactor(k, b, d)
        * -0.5
        * pochhammer(1.0 - b / 2.0, j - 1)
        * pochhammer(-k, j)
        / (math.factorial(j) * pochhammer(d / 2.0, j))
    )


@dataclass(frozen=True)
class IdentityCoefficients:
    """Table C[m, j] = C_mj for m, j = 0..k (zero above the diagonal j > m)."""

    k: int
    b: float
    d: int
    C: np.ndarray = field(repr=False)

    def polynomial(self, m, R, x):
        x = np.asarray(x, dtype=float)
        return sum(self.C[m, j] * R ** (2 * (m - j)) * x ** (2 * j) for j in range(m + 1))


def identity_table(k, b, d):
    C = np.zeros((k + 1, k + 1))
    for m in range(k + 1):
        for j in range(m + 1):
            C[m, j] = identity_coefficient(m, j, b, d)
    return IdentityCoefficients(k, b, d, C)


def check_identity_hd(k, b, d, R, x, spec=None):
    """(quadrature, polynomial, hypergeometric) values of the k-th identity at |x|."""
    _check_identity_range(k, b, d)
    s = (b + d) / 2.0
    rho = RadialDensity(R, ((1.0, k - s),))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    quad = convolve_radial(rho, b, x, d, spec)
    poly = sum(identity_coefficient(k, j, b, d) * R ** (2 * (k - j)) * x ** (2 * j)
               for j in range(k + 1))
    hyp = _identity_prefactor(k, b, d) * R ** (2 * k) * hyp2f1_poly(-b / 2.0, k, d / 2.0, (x / R) ** 2)
    return quad, poly, hyp


def fundamental_identity_value(b, d):
    """pi^(d/2+1) / (Gamma(d/2) sin((b+d) pi/2))."""
    if not -d < b < 2 - d:
        raise DomainError(f"need b in ({-d}, {2 - d}), got b={b}")
    return math.pi ** (d / 2.0 + 1.0) / (math.gamma(d / 2.0) * math.sin((b + d) * math.pi / 2.0))


@dataclass(frozen=True)
class IdentityReport:
    b: float
    d: int
    R: float
    x: tuple
    values: tuple
    exact: float
    max_rel_error: float


def fundamental_identity_check(b, d, R, x_samples, spec=None):
    """Quadrature of int (R^2-|y|^2)^(-(b+d)/2) |x-y|^b dy against its constant value."""
    exact = fundamental_identity_value(b, d)
    x = np.asarray(x_samples, dtype=float)
    if np.any(np.abs(x) >= R):
        raise DomainError("samples must lie inside the ball")
    rho = RadialDensity(R, ((1.0, -(b + d) / 2.0),))
    vals = convolve_radial(rho, b, np.abs(x), d, spec)
    err = float(np.max(np.abs(vals - exact)) / abs(exact))
    return IdentityReport(b, d, R, tuple(x.tolist()), tuple(vals.tolist()), exact, err)


# -- construction -------------------------------------------------------------


@dataclass(frozen=True)
class MomentVector:
    """Rescaled moments M_0, M_2, ..., M_{2k-2}."""

    values: tuple

    def __post_init__(self):
        if not all(v > 0 for v in self.values):
            raise DomainError(f"moments must be positive, got {self.values}")

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)

    def as_array(self):
        return np.array(self.values)


def _rhs_weights(k, d):
    """S_j with (1/2k) int |x-y|^(2k) rho dy = sum_j S_j/(2k) M_{2(k-j)} R^(2k-2j) |x|^(2j)."""
    S = np.zeros(k + 1)
    for j in range(k + 1):
        for l in range(0, min(j, k // 2) + 1):
            if 2 * l > k or j - l > k - 2 * l:
                continue
            S[j] += comb(k, 2 * l) * comb(k - 2 * l, j - l) * 4**l * angular_power_average(l, d)
    return S


def governing_rhs_coefficients(k, b, d, M, E, R=1.0):
    """F_0..F_k with b[(1/2k) int |x-y|^(2k) rho - E] = sum F_j R^(2k-2j) |x|^(2j).

    ``M`` holds M_0..M_{2k} (M_{2k} only enters F_0; missing entries count
    as zero).  F_0 is dimensionless: b (M_{2k}/(2k) - E/R^(2k)).
    """
    M = np.asarray(M, dtype=float)
    M = np.concatenate([M, np.zeros(max(0, k + 1 - M.size))])
    S = _rhs_weights(k, d)
    F = np.array([b * S[j] / (2.0 * k) * M[k - j] for j in range(k + 1)])
    F[0] -= b * E / R ** (2 * k)
    return F


def _upper_system(k, b, d):
    """U[i, j] = C_{j,i}/b for i, j = 1..k (upper triangular)."""
    U = np.zeros((k, k))
    for i in range(1, k + 1):
        for j in range(i, k + 1):
            U[i - 1, j - 1] = _reduced_coefficient(j, i, b, d)
    return U


def _rhs_map(k, d):
    """Q with F[1..k]/b = Q M, M = (M_0, ..., M_{2k-2})."""
    S = _rhs_weights(k, d)
    Q = np.zeros((k, k))
    for i in range(1, k + 1):
        Q[i - 1, k - i] = S[i] / (2.0 * k)
    return Q


def solve_coefficients(k, b, d, M):
    """A_1..A_k from matching the |x|^2, ..., |x|^(2k) coefficients."""
    _check_range(k, b, d)
    U = _upper_system(k, b, d)
    if np.any(np.abs(np.diag(U)) < 1e-300):
        raise np.linalg.LinAlgError(f"singular coefficient system at b={b}, d={d}")
    Q = _rhs_map(k, d)
    M = np.asarray(M, dtype=float)[:k]
    return np.linalg.solve(U, Q @ M)


def _moment_of_basis(k, b, d):
    """G[m, j] with M_{2m} = R^(2k-b) sum_j G[m, j] A_j."""
    s = (b + d) / 2.0
    G = np.zeros((k, k))
    for m in range(k):
        for j in range(1, k + 1):
            G[m, j - 1] = _ball_factor(d) * beta_continued(m + d / 2.0, j - s + 1.0)
    return G


def moment_matrix(k, b, d):
    """D with R^(b-2k) M = D M."""
    _check_range(k, b, d)
    U = _upper_system(k, b, d)
    return _moment_of_basis(k, b, d) @ np.linalg.solve(U, _rhs_map(k, d))


def moment_eigenproblem(k, b, d, M0=1.0):
    """Radius and moments from the unique positive eigenvector of D."""
    D = moment_matrix(k, b, d)
    vals, vecs = np.linalg.eig(D)
    picks = []
    for lam, v in zip(vals, vecs.T):
        if abs(lam.imag) > 1e-12 * abs(lam) or np.any(np.abs(v.imag) > 1e-12):
            continue
        v = v.real / v.real[0] if v.real[0] != 0 else v.real
        if lam.real > 0 and np.all(v > 0):
            picks.append((lam.real, v))
    if len(picks) != 1:
        raise ArithmeticError(
            f"expected one positive eigenpair of D, found {len(picks)} (k={k}, b={b}, d={d})"
        )
    lam, v = picks[0]
    R = lam ** (1.0 / (b - 2.0 * k))
    return R, MomentVector(tuple((M0 * v).tolist()))


def _check_range(k, b, d, physical=False):
    """Validate (k, b, d).

    The algebra (coefficients, D, eigenpair) only needs every term of
    rho to be integrable: b < min(2k, 4-d).  Constructed states also
    need b < b_max.
    """
    if k < 1 or int(k) != k:
        raise DomainError("k must be a positive integer")
    if d < 1 or int(d) != d:
        raise DomainError("d must be a positive integer")
    hi = b_upper(k, d) if physical else min(2.0 * k, 4.0 - d)
    if not -d < b < hi:
        raise DomainError(
            f"a={2 * k}, d={d}: ball-supported states need -d < b < {hi:.6g}, got b={b}"
        )


@dataclass(frozen=True)
class SteadyStateHD:
    d: int
    k: int
    b: float
    R: float
    A: tuple
    M: MomentVector
    valid: bool
    M0: float
    E: float
    density: RadialDensity = field(repr=False)

    @property
    def a(self):
        return 2.0 * self.k

    @property
    def kernel(self):
        return PowerLawKernel(self.a, self.b, self.d, self.M0)

    @property
    def boundary_exponent(self):
        return 1.0 - (self.b + self.d) / 2.0

    @property
    def rho_at_origin(self):
        s = (self.b + self.d) / 2.0
        return self.R ** (2 * self.k - 2 * s) * sum(self.A)

    def polynomial_part(self, r):
        """rho(r) (R^2-r^2)^s; its sign is the sign of the density."""
        r = np.asarray(r, dtype=float)
        gap = self.R**2 - r * r
        return sum(Aj * self.R ** (2 * self.k - 2 * j) * gap**j
                   for j, Aj in enumerate(self.A, start=1))

    def __call__(self, r):
        return self.density(r)


def construct_hd(k, b, d, M0=1.0, tol=None):
    """Steady state for K = |x|^(2k)/(2k) - |x|^b/b in R^d with mass M0.

    States whose density turns negative somewhere are returned with
    valid=False rather than rejected.
    """
    _check_range(k, b, d, physical=True)
    if M0 <= 0:
        raise DomainError("mass must be positive")
    tol = DEFAULTS.validity if tol is None else tol
    R, M = moment_eigenproblem(k, b, d, M0)
    A = solve_coefficients(k, b, d, M.as_array())
    s = (b + d) / 2.0
    terms = tuple((float(Aj) * R ** (2 * k - 2 * j), j - s) for j, Aj in enumerate(A, start=1))
    density = RadialDensity(R, terms)
    E = origin_potential(density, 2.0 * k, b, d)
    state = SteadyStateHD(d, k, b, R, tuple(float(x) for x in A), M, True, M0, E, density)
    poly = state.polynomial_part(np.linspace(0.0, R, DEFAULTS.profile_points))
    valid = bool(poly.min() >= -tol * np.abs(poly).max())
    return SteadyStateHD(d, k, b, R, state.A, M, valid, M0, E, density)


def a2_closed_form(b, d, M0=1.0):
    """(A_1, R) for a = 2 in closed form.

    sin((b+d) pi/2)/(b+d-2) is written as -(pi/2) sinc((b+d)/2 - 1), so
    the Newtonian case b = 2-d (uniform density, R = 1 at unit mass) is
    regular.
    """
    _check_range(1, b, d)
    s = (b + d) / 2.0
    A1 = d * M0 * math.gamma(d / 2.0) * float(np.sinc(s - 1.0)) / (2.0 * math.pi ** (d / 2.0))
    mass = A1 * _ball_factor(d) * beta_continued(d / 2.0, 2.0 - s) / M0
    return A1, mass ** (-1.0 / (2.0 - b))
