"""First-kind integral equations on [-R, R] with power-law kernels.

Two families are handled, both with nu in (0, 1):

* ``"absolute"``: integral |x-y|^(-nu) rho(y) dy = f(x)
* ``"signed"``:   integral (x-y)|x-y|^(-nu-1) rho(y) dy = f(x)

For polynomial right-hand sides the inversion formulas reduce to
fractional integrals of monomials (Beta functions) plus one principal
value integral, which is done numerically by :func:`pv_integrate`.
"""

import math
from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

import numpy as np

from .config import DEFAULTS
from .quadrature import (
    QuadratureSpec,
    RadialDensity,
    convolve_line,
    integrate_singular,
    pv_integrate,
)
from .specfun import DomainError, beta_fn

FAMILIES = ("absolute", "signed")


class UnsupportedProblem(ValueError):
    """Raised for right-hand sides without a catalogued closed form."""


@dataclass(frozen=True)
class FredholmProblem:
    nu: float
    R: float
    rhs: Sequence[float]
    family: str = "absolute"
    c_null: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.nu < 1.0:
            raise DomainError(f"nu={self.nu} must lie in (0, 1)")
        if self.R <= 0:
            raise DomainError("R must be positive")
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}")
        if len(self.rhs) == 0:
            raise DomainError("rhs needs at least one coefficient")


@dataclass(frozen=True)
class LineDensity:
    """Pointwise density on (-R, R) given by a formula in the signed variable."""

    R: float
    func: Callable[[float], float]
    boundary_exponent: float

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = np.array([self.func(float(v)) for v in x.ravel()]).reshape(x.shape)
        return out if out.ndim else float(out)

    __call__ = evaluate


# -- Plemelj closed forms -----------------------------------------------------


def _binom(a, m):
    out = 1.0
    for i in range(m):
        out *= (a - i) / (i + 1)
    return out


def plemelj_polynomial(alpha, beta, R):
    """Polynomial part at infinity of (z-R)^alpha (z+R)^beta, alpha+beta = n.

    Returned as coefficients in descending powers of z.
    """
    n = alpha + beta
    if abs(n - round(n)) > 1e-12 or round(n) < 0:
        raise DomainError("alpha + beta must be a nonnegative integer")
    n = int(round(n))
    return [
        R**m * sum(_binom(alpha, i) * (-1) ** i * _binom(beta, m - i) for i in range(m + 1))
        for m in range(n + 1)
    ]


def plemelj_pv(alpha, beta, R, x):
    """Closed form of P.V. integral of (R-y)^alpha (R+y)^beta / (y - x) over [-R, R].

    From the Plemelj formulae applied to (z-R)^alpha (z+R)^beta minus
    its polynomial part P: (pi/sin(pi alpha)) [cos(pi alpha) g(x) - P(x)].
    """
    coeffs = plemelj_polynomial(alpha, beta, R)
    x = np.asarray(x, dtype=float)
    g = (R - x) ** alpha * (R + x) ** beta
    return math.pi / math.sin(math.pi * alpha) * (math.cos(math.pi * alpha) * g - np.polyval(coeffs, x))


def pv_exponents(family, n, nu):
    """(alpha, beta) of the catalogued integrand (R-y)^alpha (R+y)^beta.

    ``n`` is the degree of the polynomial part: absolute family
    (R+y)^n ((R-y)/(R+y))^((1-nu)/2); signed family
    (R-y)^(1-nu/2) (R+y)^(n-1+nu/2).
    """
    if family == "absolute":
        alpha = (1.0 - nu) / 2.0
    elif family == "signed":
        alpha = 1.0 - nu / 2.0
    else:
        raise DomainError(f"unknown family {family!r}")
    return alpha, n - alpha


def pv_closed_form(family, n, nu, R, x):
    alpha, beta = pv_exponents(family, n, nu)
    return plemelj_pv(alpha, beta, R, x)


def pv_numeric(family, n, nu, R, x, spec=None):
    alpha, beta = pv_exponents(family, n, nu)
    spec = spec or QuadratureSpec(nodes=DEFAULTS.pv_panel_nodes)
    spec = QuadratureSpec(nodes=spec.nodes, left_exponent=beta, right_exponent=alpha,
                          pv_mode="symmetric-pair", rel_tol=spec.rel_tol)
    return pv_integrate(lambda y: (R - y) ** alpha * (R + y) ** beta, x, R, spec)


# -- solutions ----------------------------------------------------------------


def _trim(rhs):
    coeffs = [float(c) for c in rhs]
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    return coeffs


def solve_closed_form(problem):
    """Exact density for the catalogued right-hand sides.

    Absolute family: any combination of 1 and x^2.  Signed family: a
    multiple of x, with ``c_null`` times the null-space function
    (sin(pi nu/2)/pi) (R^2-x^2)^(nu/2-1) added.
    """
    nu, R = problem.nu, problem.R
    f = _trim(problem.rhs) + [0.0, 0.0, 0.0]
    if problem.family == "absolute":
        if any(f[3:]) or f[1]:
            raise UnsupportedProblem("closed forms exist for f = 1 and f = x^2 only")
        cosv = math.cos(math.pi * nu / 2.0)
        lead = (nu - 1.0) / 2.0
        terms = []
        c_low = f[0] * cosv / math.pi + f[2] * cosv * R * R / (math.pi * nu)
        terms.append((c_low, lead))
        if f[2]:
            terms.append((-2.0 * f[2] * cosv / (nu * (nu + 1.0) * math.pi), lead + 1.0))
        return RadialDensity(R, tuple(terms))
    if f[0] or any(f[2:]):
        raise UnsupportedProblem("the signed family has a closed form for f = x only")
    sinv = math.sin(math.pi * nu / 2.0)
    terms = [(f[1] * sinv / (nu * math.pi), nu / 2.0)]
    if problem.c_null:
        terms.append((problem.c_null * sinv / math.pi, nu / 2.0 - 1.0))
    return RadialDensity(R, tuple(terms))


def fractional_derivative_coeffs(rhs, R, nu):
    """Coefficients h_m with d/dx int_{-R}^x f(y)(x-y)^(nu-1) dy = sum h_m (x+R)^(m+nu-1).

    Each monomial (y+R)^m contributes (m+nu) B(m+1, nu).
    """
    f = [float(c) for c in rhs]
    shifted = [sum(f[j] * comb(j, m) * (-R) ** (j - m) for j in range(m, len(f)))
               for m in range(len(f))]
    return [g * (m + nu) * beta_fn(m + 1.0, nu) for m, g in enumerate(shifted)]


def _h(y, hc, R, nu):
    return sum(c * (y + R) ** (m + nu - 1.0) for m, c in enumerate(hc))


def _signed_edge_coefficient(hc, R, nu, spec):
    """Null-space weight carried by the c = 0 inversion formula at x = +R."""
    # (R^2-y^2)^(1-nu/2) h(y)/(y-R) = -(R-y)^(-nu/2) (R+y)^(nu/2) * sum h_m (R+y)^m
    qspec = QuadratureSpec(nodes=spec.nodes, left_exponent=nu / 2.0, right_exponent=-nu / 2.0,
                           rel_tol=spec.rel_tol)
    integral = integrate_singular(
        lambda y: sum(c * (y + R) ** m for m, c in enumerate(hc)), -R, R, qspec, check=False
    )
    return -math.sin(math.pi * nu / 2.0) / math.pi * integral


def solve_general(problem, spec=None):
    """Evaluate the general inversion formula for any polynomial right-hand side.

    For the signed family ``c_null`` is the coefficient of the edge
    singularity (sin(pi nu/2)/pi)(R^2-x^2)^(nu/2-1) at x = +R, which
    matches the closed form for f = x.
    """
    spec = spec or QuadratureSpec(nodes=DEFAULTS.pv_panel_nodes)
    nu, R = problem.nu, problem.R
    hc = fractional_derivative_coeffs(problem.rhs, R, nu)
    first = math.sin(math.pi * nu) / (2.0 * math.pi)

    if problem.family == "absolute":
        pref = -math.cos(math.pi * nu / 2.0) ** 2 / math.pi**2
        wexp = (1.0 - nu) / 2.0
        left, right, edge = (nu - 1.0) / 2.0, (1.0 - nu) / 2.0, (nu - 1.0) / 2.0
        null = 0.0
    else:
        pref = math.sin(math.pi * nu / 2.0) ** 2 / math.pi**2
        wexp = 1.0 - nu / 2.0
        left, right, edge = nu / 2.0, 1.0 - nu / 2.0, nu / 2.0 - 1.0
        shift = _signed_edge_coefficient(hc, R, nu, spec)
        null = (problem.c_null - shift) * math.sin(math.pi * nu / 2.0) / math.pi

    pspec = QuadratureSpec(nodes=spec.nodes, left_exponent=left, right_exponent=right,
                           pv_mode="symmetric-pair", rel_tol=spec.rel_tol)

    def numerator(y):
        return (R * R - y * y) ** wexp * _h(y, hc, R, nu)

    def rho(x):
        pv = pv_integrate(numerator, x, R, pspec)
        gap = (R * R - x * x) ** edge
        return first * _h(x, hc, R, nu) + pref * gap * pv + null * gap

    return LineDensity(R, rho, edge)


def apply_operator(density, problem, x, spec=None):
    """Left-hand side of the integral equation evaluated at points ``x``."""
    p = -problem.nu
    odd = problem.family == "signed"
    return convolve_line(density, p, x, spec, odd=odd)


# -- identities ---------------------------------------------------------------


def identity_closed_form(nu, R, x, order):
    """Right-hand sides of the two weighted power-kernel identities."""
    c = math.cos(nu * math.pi / 2.0)
    if abs(c) < 1e-14:
        raise DomainError(f"pole of the identity at nu={nu}")
    if order == "zeroth":
        return math.pi / c
    if order == "second":
        return -nu * (nu + 1.0) * math.pi / (2.0 * c) * x * x + (nu + 1.0) * math.pi / (2.0 * c) * R * R
    raise DomainError(f"unknown order {order!r}")


def check_identity_1d(nu, R, x, order, spec=None):
    """(quadrature, closed form) for the weighted identities on [-R, R].

    zeroth: integral |x-y|^(-nu) (R^2-y^2)^((nu-1)/2) dy, nu in (-1, 1);
    second: integral |x-y|^(-nu) (R^2-y^2)^((nu+1)/2) dy, nu in (-3, 1).
    """
    if order == "zeroth":
        lo, hi, expo = -1.0, 1.0, (nu - 1.0) / 2.0
    elif order == "second":
        lo, hi, expo = -3.0, 1.0, (nu + 1.0) / 2.0
    else:
        raise DomainError(f"unknown order {order!r}")
    if not lo < nu < hi:
        raise DomainError(f"nu={nu} outside ({lo}, {hi}) for the {order} identity")
    if not abs(x) < R:
        raise DomainError("x must lie inside (-R, R)")
    exact = identity_closed_form(nu, R, x, order)
    rho = RadialDensity(R, ((1.0, expo),))
    spec = spec or QuadratureSpec()
    value = float(convolve_line(rho, -nu, [x], spec)[0])
    return value, exact
