"""Gamma/Beta functions, terminating hypergeometric sums and ball moments."""

import math

import numpy as np
from scipy import special


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of a formula."""


def _is_nonpositive_integer(x):
    return x <= 0 and float(x).is_integer()


def gamma_fn(x):
    """Euler Gamma function for real ``x`` away from its poles.

    Negative non-integer arguments are handled by the reflection formula.
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise DomainError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * special.gamma(1.0 - x))
    return float(special.gamma(x))


def beta_fn(alpha, beta):
    """Beta integral B(alpha, beta); both arguments must be positive."""
    if alpha <= 0 or beta <= 0:
        raise DomainError(f"Beta integral diverges for ({alpha}, {beta})")
    return float(np.exp(special.betaln(alpha, beta)))


def beta_continued(alpha, beta):
    """Gamma-ratio form of the Beta function, valid off the poles.

    Agrees with :func:`beta_fn` for positive arguments and continues it
    to negative non-integer arguments where the integral diverges.
    """
    if alpha > 0 and beta > 0:
        return beta_fn(alpha, beta)
    if _is_nonpositive_integer(alpha + beta):
        return 0.0
    return gamma_fn(alpha) * gamma_fn(beta) / gamma_fn(alpha + beta)


def pochhammer(r, n):
    """Rising factorial (r)_n = r (r+1) ... (r+n-1), with (r)_0 = 1."""
    if n < 0 or int(n) != n:
        raise DomainError("n must be a nonnegative integer")
    out = 1.0
    for i in range(int(n)):
        out *= r + i
    return out


def hyp2f1_poly(p, k, c, z):
    """Terminating Gauss series 2F1(p, -k; c; z) for integer ``k >= 0``."""
    if k < 0 or int(k) != k:
        raise DomainError("k must be a nonnegative integer")
    z = np.asarray(z, dtype=float)
    total = np.zeros_like(z)
    term = np.ones_like(z)
    for j in range(int(k) + 1):
        total = total + term
        # ratio of consecutive terms
        term = term * (p + j) * (-k + j) / ((j + 1) * (c + j)) * z
    return total if total.ndim else float(total)


def sphere_area(d):
    """Surface area of the unit sphere in R^d (2 for d=1)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def ball_moment(alpha, beta, d, R):
    """Integral of |x|^alpha (R^2-|x|^2)^beta over the ball of radius R in R^d.

    Equals R^(alpha+2 beta+d) pi^(d/2)/Gamma(d/2) B((alpha+d)/2, beta+1);
    for d=1 this is the familiar symmetric integral over [-R, R].
    """
    if alpha + d <= 0 or beta + 1 <= 0:
        raise DomainError(f"nonintegrable exponents alpha={alpha}, beta={beta}, d={d}")
    if R <= 0:
        raise DomainError("R must be positive")
    scale = math.pi ** (d / 2.0) / math.gamma(d / 2.0)
    return R ** (alpha + 2 * beta + d) * scale * beta_fn((alpha + d) / 2.0, beta + 1.0)


def ball_log_moment(beta, d, R):
    """Integral of log|x| (R^2-|x|^2)^beta over the ball B_R in R^d.

    Obtained by differentiating :func:`ball_moment` in ``alpha`` at 0.
    """
    base = ball_moment(0.0, beta, d, R)
    dig = special.digamma(d / 2.0) - special.digamma(d / 2.0 + beta + 1.0)
    return base * (math.log(R) + 0.5 * dig)


def angular_power_average(m, d):
    """Mean of (u.v)^(2m) over unit vectors v on the sphere in R^d.

    Equals (2m-1)!! / (d (d+2) ... (d+2m-2)); odd powers average to zero.
    """
    if m < 0 or d < 1:
        raise DomainError("need m >= 0 and d >= 1")
    out = 1.0
    for i in range(int(m)):
        out *= (2 * i + 1) / (d + 2 * i)
    return out
