"""Endpoint-singular, principal-value and ball-convolution quadrature.

Every rule here is a Gauss-Jacobi rule whose weight carries the known
algebraic endpoint behaviour of the integrand, so smooth remainders
converge spectrally.  Convolutions over a ball are evaluated in polar
coordinates centred at the evaluation point (interior points) or in
shells around the origin (exterior points).
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy import integrate, special

from .config import DEFAULTS
from .specfun import DomainError, ball_moment, sphere_area


class QuadratureError(RuntimeError):
    """Raised when successive node counts disagree beyond the tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    nodes: int = DEFAULTS.nodes
    left_exponent: Optional[float] = 0.0
    right_exponent: Optional[float] = 0.0
    pv_mode: str = "none"
    rel_tol: float = DEFAULTS.rel_tol

    def __post_init__(self):
        if self.nodes < 2:
            raise DomainError("need at least two nodes")
        for e in (self.left_exponent, self.right_exponent):
            if e is not None and e <= -1:
                raise DomainError(f"endpoint exponent {e} is not integrable")
        if self.pv_mode not in ("none", "symmetric-pair"):
            raise DomainError(f"unknown pv_mode {self.pv_mode!r}")


@lru_cache(maxsize=512)
def gauss_jacobi(n, alpha, beta):
    """Nodes/weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta."""
    if alpha == 0.0 and beta == 0.0:
        x, w = special.roots_legendre(n)
    else:
        x, w = special.roots_jacobi(n, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def jacobi_rule(lo, hi, left, right, n):
    """Rule for integral over [lo, hi] of (y-lo)^left (hi-y)^right g(y) dy."""
    x, w = gauss_jacobi(n, float(right), float(left))
    half = 0.5 * (hi - lo)
    y = lo + half * (1.0 + x)
    return y, w * half ** (left + right + 1.0)


Coefficient = Union[float, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class RadialDensity:
    """rho(s) = sum_i c_i(s) (R^2 - s^2)^(beta_i) on the ball of radius R.

    Each coefficient ``c_i`` is a constant or a callable of the radius
    that must be smooth as a function of s^2.
    """

    R: float
    terms: Tuple[Tuple[Coefficient, float], ...]

    def __post_init__(self):
        if self.R <= 0:
            raise DomainError("support radius must be positive")
        for _, beta in self.terms:
            if beta <= -1:
                raise DomainError(f"edge exponent {beta} is not integrable")

    @classmethod
    def from_function(cls, R, func, boundary_exponent=0.0):
        """Wrap a pointwise profile with known edge power (R^2-s^2)^boundary_exponent."""

        def coef(s):
            return func(s) / (R * R - np.asarray(s) ** 2) ** boundary_exponent

        return cls(R, ((coef, boundary_exponent),))

    @property
    def boundary_exponent(self):
        return min(beta for _, beta in self.terms) if self.terms else 0.0

    def evaluate(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        out = np.zeros_like(r)
        inside = r < self.R
        s = r[inside]
        gap = self.R * self.R - s * s
        for coef, beta in self.terms:
            out[inside] += _coef(coef, s) * gap**beta
        return out if out.ndim else float(out)

    __call__ = evaluate

    def mass(self, d):
        """Total mass in R^d (constant coefficients only, closed form)."""
        return self.moment(0, d)

    def moment(self, order, d):
        total = 0.0
        for coef, beta in self.terms:
            if callable(coef):
                raise TypeError("closed-form moments need constant coefficients")
            total += coef * ball_moment(order, beta, d, self.R)
        return total


def _coef(coef, s):
    if callable(coef):
        return np.asarray(coef(s), dtype=float)
    return coef


def integrate_singular(f, lo, hi, spec=None, check=True):
    """Integral over [lo, hi] of f(y) (y-lo)^left (hi-y)^right.

    The weight exponents come from ``spec``.  When either exponent is
    None, ``f`` is taken as the full integrand and a double-exponential
    (tanh-sinh) rule is used instead.
    """
    spec = spec or QuadratureSpec()
    if hi <= lo:
        raise DomainError("need lo < hi")
    if spec.left_exponent is None or spec.right_exponent is None:
        res = integrate.tanhsinh(f, lo, hi, rtol=spec.rel_tol)
        if not res.success:
            raise QuadratureError("double-exponential rule did not converge")
        return float(res.integral)
    n = spec.nodes
    y, w = jacobi_rule(lo, hi, spec.left_exponent, spec.right_exponent, n)
    fy = np.asarray(f(y), dtype=float)
    value = float(np.dot(w, fy))
    if check:
        yc, wc = jacobi_rule(lo, hi, spec.left_exponent, spec.right_exponent, n // 2)
        coarse = float(np.dot(wc, f(yc)))
        scale = float(np.dot(w, np.abs(fy))) or 1.0
        if abs(value - coarse) > spec.rel_tol * scale:
            raise QuadratureError(
                f"no convergence: {coarse!r} ({n // 2} nodes) vs {value!r} ({n} nodes)"
            )
    return value


# -- principal values ---------------------------------------------------------


def pv_integrate(f, x, R, spec=None):
    """P.V. integral over [-R, R] of f(y)/(y-x).

    ``f`` is the full numerator; its endpoint behaviour (y+R)^left and
    (R-y)^right is read from ``spec``.  A symmetric window around ``x`` is
    folded into a regular integral and the rest is covered by panels whose
    length grows geometrically away from ``x``.
    """
    spec = spec or QuadratureSpec(nodes=DEFAULTS.pv_panel_nodes)
    if not -R < x < R:
        raise DomainError(f"x={x} must lie strictly inside (-{R}, {R})")
    left = spec.left_exponent or 0.0
    right = spec.right_exponent or 0.0
    n = spec.nodes
    delta = 0.5 * min(x + R, R - x)

    tg, wg = gauss_jacobi(n, 0.0, 0.0)
    t = 0.5 * delta * (tg + 1.0)
    total = 0.5 * delta * np.dot(wg, (f(x + t) - f(x - t)) / t)

    for sign, reach, expo in ((1.0, R - x, right), (-1.0, R + x, left)):
        edges = [delta]
        while 2.0 * edges[-1] < reach:
            edges.append(2.0 * edges[-1])
        # merge a sliver next to the edge into its neighbour
        if len(edges) > 1 and reach - edges[-1] < 0.5 * (edges[-1] - edges[-2]):
            edges.pop()
        edges.append(reach)
        for i in range(len(edges) - 1):
            last = i == len(edges) - 2
            e = expo if last else 0.0
            dist, wd = jacobi_rule(edges[i], edges[i + 1], 0.0, e, n)
            y = x + sign * dist
            fy = f(y)
            if last and e:
                fy = fy / (reach - dist) ** e
            total += np.dot(wd, fy / (y - x))
    return float(total)


# -- ball convolutions -------------------------------------------------------


def _angle_rule(d, n):
    """Rule for integral over the unit sphere as a function of u = cos(angle)."""
    if d == 1:
        return np.array([-1.0, 1.0]), np.array([1.0, 1.0])
    u, w = gauss_jacobi(n, (d - 3) / 2.0, (d - 3) / 2.0)
    return u, w * sphere_area(d - 1)


def _ray_angle_rule(r, R, d, n):
    """Angular rule in u = cos(angle) adapted to the evaluation radius.

    Near the support edge the integrand depends on sqrt(R^2 - r^2 + r^2 u^2),
    which is nearly singular at u = 0; the map u = sinh(A tau)/sinh(A)
    with sinh(A) = r/sqrt(R^2 - r^2) resolves that scale.  Each half of
    [-1, 1] keeps the Jacobi weight (1-u^2)^((d-3)/2) at its outer end.
    """
    if d == 1:
        u = np.array([-1.0, 1.0])
        return np.broadcast_to(u, (r.size, 2)), np.ones((r.size, 2))
    e = (d - 3) / 2.0
    x, w = gauss_jacobi(n, e, 0.0)
    tau = 0.5 * (1.0 + x)
    one_minus_tau = 0.5 * (1.0 - x)
    w = w * 0.5 ** (e + 1.0)
    A = np.arcsinh(r / np.sqrt(R * R - r * r))
    A = np.maximum(A, 1e-6)[:, None]
    shA = np.sinh(A)
    u = np.sinh(A * tau) / shA
    du = A * np.cosh(A * tau) / shA
    z = 0.5 * A * one_minus_tau
    # (1-u)/(1-tau), written to avoid cancellation near tau = 1
    ratio = np.cosh(0.5 * A * (1.0 + tau)) * A * np.sinh(z) / z / shA
    wt = w * du * ratio**e * (1.0 + u) ** e * sphere_area(d - 1)
    return np.concatenate([u, -u], axis=1), np.concatenate([wt, wt], axis=1)


def _ray_convolution(rho, p, x, d, n_t, n_u, odd=False):
    """Convolution at interior points using polar coordinates about x.

    In direction u (cosine to x) the ray leaves the ball at distance
    T(u); along it R^2 - |y|^2 = (T - t)(t + T2) and |x - y|^p = t^p,
    so the Jacobi weight t^(p+d-1) (T-t)^beta absorbs both endpoint
    singularities.  The substitution t = T2 (L^sigma - 1), L = 1 + T/T2,
    keeps (t + T2)^beta smooth when T2 is small (x near the edge).
    ``x`` may be signed in one dimension; ``odd`` switches to the
    kernel (x - y)|x - y|^(p-1).
    """
    R = rho.R
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u, wu = _ray_angle_rule(np.abs(x), R, d, n_u)
    x = x[:, None, None]
    u = u[:, :, None]
    wu = wu[:, :, None]
    root = np.sqrt(R * R - x * x * (1.0 - u * u))
    T = root - x * u
    T2 = root + x * u
    log_l = np.log1p(T / T2)
    q = p + d - 1.0
    total = 0.0
    for coef, beta in rho.terms:
        xi, wxi = gauss_jacobi(n_t, float(beta), float(q))
        sig = 0.5 * (1.0 + xi)[None, None, :]
        one_minus = 0.5 * (1.0 - xi)[None, None, :]
        wsig = (wxi * 0.5 ** (q + beta + 1.0))[None, None, :]
        grow = np.exp(sig * log_l)
        t = T2 * np.expm1(sig * log_l)
        t_over = T2 * np.expm1(sig * log_l) / sig
        gap_over = -T2 * np.exp(log_l) * np.expm1(-one_minus * log_l) / one_minus
        s2 = x * x + 2.0 * x * t * u + t * t
        vals = (
            _coef(coef, np.sqrt(np.maximum(s2, 0.0)))
            * t_over**q
            * gap_over**beta
            * (T2 * grow) ** beta
            * T2
            * log_l
            * grow
        )
        ray = np.sum(wsig * vals, axis=2, keepdims=True)
        if odd:
            ray = -u * ray
        total = total + np.sum(wu * ray, axis=(1, 2))
    return total


def _shell_convolution(rho, p, r, d, n_s, n_u):
    """Convolution via shells |y| = s; accurate when r is away from the support edge."""
    R = rho.R
    r = np.atleast_1d(np.asarray(r, dtype=float))[:, None, None]
    total = 0.0
    for coef, beta in rho.terms:
        if d == 1:
            y, wy = jacobi_rule(-R, R, beta, beta, n_s)
            vals = _coef(coef, np.abs(y)) * np.abs(r[:, :, 0] - y[None, :]) ** p
            total = total + np.sum(wy[None, :] * vals, axis=1)
            continue
        s, ws = jacobi_rule(0.0, R, d - 1.0, beta, n_s)
        ws = ws * _coef(coef, s) * (R + s) ** beta
        u, wu = _angle_rule(d, n_u)
        dist2 = r * r + s[None, :, None] ** 2 - 2.0 * r * s[None, :, None] * u[None, None, :]
        inner = np.sum(wu[None, None, :] * np.maximum(dist2, 0.0) ** (0.5 * p), axis=2)
        total = total + np.sum(ws[None, :] * inner, axis=1)
    return total


def _reduction_convolution_3d(rho, p, r, n):
    """Three-dimensional convolution through the even extension of rho to [-R, R]."""
    if p == -2:
        raise DomainError("the one-dimensional reduction is singular at p = -2")
    R = rho.R
    out = []
    for ri in np.atleast_1d(np.asarray(r, dtype=float)):
        if ri == 0.0:
            val = sum(
                _coef_moment(coef, beta, p, R, n) for coef, beta in rho.terms
            ) * 4.0 * math.pi
            out.append(val)
            continue
        acc = 0.0
        q = p + 2.0
        for coef, beta in rho.terms:
            if ri < R:
                pieces = [(-R, ri, beta, q, lambda s: (R - s) ** beta),
                          (ri, R, q, beta, lambda s: (R + s) ** beta)]
            else:
                pieces = [(-R, R, beta, beta, lambda s: 1.0)]
            for lo, hi, el, er, extra in pieces:
                y, w = jacobi_rule(lo, hi, el, er, n)
                core = _coef(coef, np.abs(y)) * y * extra(y)
                if ri >= R:
                    core = core * np.abs(ri - y) ** q
                acc += np.dot(w, core)
        out.append(-2.0 * math.pi / (q * ri) * acc)
    return np.array(out)


def _coef_moment(coef, beta, p, R, n):
    # integral_0^R s^(p+2) c(s) (R^2-s^2)^beta ds
    s, w = jacobi_rule(0.0, R, p + 2.0, beta, n)
    return np.dot(w, _coef(coef, s) * (R + s) ** beta)


def convolve_radial(rho, p, r, d, spec=None, method="auto"):
    """Integral over B_R of |x - y|^p rho(|y|) dy at |x| = r.

    ``method`` is ``"ray"`` (polar coordinates about x, interior points),
    ``"shell"`` (shells about the origin), ``"reduction"`` (d = 3 only,
    one-dimensional even extension) or ``"auto"``.  ``r`` may be an array.
    """
    spec = spec or QuadratureSpec()
    if p <= -d:
        raise DomainError(f"|x|^{p} is not locally integrable in dimension {d}")
    scalar = np.ndim(r) == 0
    r = np.abs(np.atleast_1d(np.asarray(r, dtype=float)))
    n = spec.nodes
    if method == "reduction":
        if d != 3:
            raise DomainError("the reduction formula is specific to d = 3")
        out = _reduction_convolution_3d(rho, p, r, n)
    elif method == "shell":
        out = _shell_convolution(rho, p, r, d, n, n)
    elif method in ("auto", "ray"):
        out = np.empty_like(r)
        inside = r < rho.R
        if method == "ray" and not inside.all():
            raise DomainError("the ray method needs points inside the support")
        n_ray = min(n, DEFAULTS.ray_nodes) if method == "auto" else n
        n_ang = min(n, DEFAULTS.angle_nodes) if method == "auto" else n
        if inside.any():
            out[inside] = _ray_convolution(rho, p, r[inside], d, n_ray, n_ang)
        if (~inside).any():
            out[~inside] = _shell_convolution(rho, p, r[~inside], d, n, n)
    else:
        raise DomainError(f"unknown method {method!r}")
    return float(out[0]) if scalar else out


def convolve_line(rho, p, x, spec=None, odd=False):
    """One-dimensional convolution at signed points ``x`` inside (-R, R).

    With ``odd`` the kernel is (x-y)|x-y|^(p-1) instead of |x-y|^p.
    """
    spec = spec or QuadratureSpec()
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(x) >= rho.R):
        raise DomainError("points must lie inside the support")
    return _ray_convolution(rho, p, x, 1, spec.nodes, 2, odd=odd)


def convolve_log(rho, r, d, spec=None, method="auto"):
    """Integral of log|x - y| rho(y) dy as the p-derivative of the power convolution at 0."""
    h = DEFAULTS.log_kernel_step

    def diff(step):
        return (convolve_radial(rho, step, r, d, spec, method)
                - convolve_radial(rho, -step, r, d, spec, method)) / (2.0 * step)

    return (4.0 * diff(0.5 * h) - diff(h)) / 3.0


def potential(rho, kernel, r, spec=None, method="auto"):
    """(K * rho)(x) at |x| = r for a power-law kernel."""
    d = kernel.d
    out = 0.0
    for expo, sign in ((kernel.a, 1.0), (kernel.b, -1.0)):
        if expo == 0:
            term = convolve_log(rho, r, d, spec, method)
        else:
            term = convolve_radial(rho, expo, r, d, spec, method) / expo
        out = out + sign * term
    return out


def interaction_energy(rho, kernel, spec=None):
    """Integral of rho (K * rho) over R^d (no factor 1/2).

    The outer radial integral uses a Jacobi rule matched to each density
    term; the inner potential comes from :func:`potential`.
    """
    if hasattr(rho, "interaction_energy"):
        return rho.interaction_energy(kernel)
    spec = spec or QuadratureSpec()
    d = kernel.d
    if not rho.terms or all((not callable(c)) and c == 0 for c, _ in rho.terms):
        return 0.0
    n = min(spec.nodes, 64)
    total = 0.0
    for coef, beta in rho.terms:
        s, w = jacobi_rule(0.0, rho.R, d - 1.0, beta, n)
        weight = w * _coef(coef, s) * (rho.R + s) ** beta
        total += np.dot(weight, potential(rho, kernel, s, spec))
    return float(total * sphere_area(d))
