"""Independent checks of constructed steady states.

* :func:`euler_lagrange_report` samples K * rho inside and outside the
  support and compares the energy with E * M0.
* :func:`particle_descent` relaxes N point masses by gradient descent on
  the discrete interaction energy, a mesh-free oracle for the support
  radius and profile.
* :func:`energy_compare` ranks candidate equilibria by interaction energy.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .kernel import DeltaPair
from .quadrature import RadialDensity, interaction_energy, potential
from .specfun import DomainError

__all__ = [
    "EnergyRanking",
    "ParticleConfig",
    "VerificationReport",
    "energy_compare",
    "euler_lagrange_report",
    "general_formula_suite",
    "histogram_distance",
    "identity_suite",
    "IdentityRow",
    "pv_suite",
    "particle_descent",
]

INTERIOR_SAMPLES = 15
EXTERIOR_SAMPLES = 10


@dataclass(frozen=True)
class VerificationReport:
    interior_constancy: float
    exterior_min_gap: float
    mass_error: float
    energy: float
    lagrange_E: float
    energy_error: float
    density_nonnegative: bool
    valid: bool
    notes: tuple = ()


def _state_parts(state, kernel):
    """(density, kernel, d, M0, nonnegative flag) for a state or a bare density."""
    if isinstance(state, RadialDensity):
        if kernel is None:
            raise DomainError("a bare density needs an explicit kernel")
        nonneg = all(not callable(c) and c >= 0 for c, _ in state.terms)
        return state, kernel, kernel.d, kernel.M0, nonneg
    kernel = kernel or state.kernel
    return state.density, kernel, state.d, state.M0, bool(getattr(state, "valid", True))


def euler_lagrange_report(state, kernel=None, spec=None, interior_tol=1e-6, exterior_tol=1e-8):
    """Sample K * rho at 15 interior and 10 exterior radii.

    E is the mean of the interior samples; the interior spread is taken
    relative to max(|E|, max |K * rho|) so a vanishing multiplier does
    not blow it up.
    """
    rho, kernel, d, M0, nonneg = _state_parts(state, kernel)
    R = rho.R
    inner = potential(rho, kernel, np.linspace(0.0, 0.99 * R, INTERIOR_SAMPLES), spec)
    outer = potential(rho, kernel, np.linspace(1.01 * R, 3.0 * R, EXTERIOR_SAMPLES), spec)
    E = float(np.mean(inner))
    scale = max(abs(E), float(np.max(np.abs(inner))), 1e-300)
    spread = float(np.ptp(inner)) / scale
    gap = float(np.min(outer - E))
    mass_error = abs(rho.mass(d) - M0) / M0
    energy = float(interaction_energy(rho, kernel, spec))
    energy_error = abs(energy - E * M0) / max(abs(E * M0), 1e-300)
    notes = []
    if not nonneg:
        notes.append("density is negative somewhere on its support")
    if spread >= interior_tol:
        notes.append(f"K*rho not constant on the support (spread {spread:.3g})")
    if gap < -exterior_tol:
        notes.append(f"K*rho drops below E outside the support (gap {gap:.3g})")
    valid = nonneg and spread < interior_tol and gap >= -exterior_tol
    return VerificationReport(spread, gap, mass_error, energy, E, energy_error, nonneg, valid,
                              tuple(notes))


# -- particles ----------------------------------------------------------------


@dataclass
class ParticleConfig:
    """N equal point masses M0/N in R^d."""

    positions: np.ndarray
    M0: float = 1.0
    iterations: int = 0
    max_force: float = math.inf
    converged: bool = False
    energies: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        if self.positions.ndim == 1:
            self.positions = self.positions[:, None]
        if self.positions.shape[0] < 2:
            raise DomainError("need at least two particles")
        if not np.all(np.isfinite(self.positions)):
            raise DomainError("positions must be finite")

    @property
    def N(self):
        return self.positions.shape[0]

    @property
    def masses(self):
        return np.full(self.N, self.M0 / self.N)

    def center_of_mass(self):
        return self.positions.mean(axis=0)

    def radius(self):
        """Largest distance from the centre of mass."""
        return float(np.max(np.linalg.norm(self.positions - self.center_of_mass(), axis=1)))


def _energy_velocity(x, kernel, M0):
    """Discrete energy and velocity -(M0/N) sum_j K'(r_ij) (x_i - x_j)/r_ij.

    Also returns the smallest pair distance.  K and K'(r)/r share the
    powers r^a and r^b.
    """
    n = x.shape[0]
    diff = x[:, None, :] - x[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(r2, 1.0)
    r = np.sqrt(r2)
    ra = r**kernel.a
    if kernel.b == 0:
        K = ra / kernel.a - np.log(r)
        coef = (ra - 1.0) / r2
    else:
        rb = r**kernel.b
        K = ra / kernel.a - rb / kernel.b
        coef = (ra - rb) / r2
    np.fill_diagonal(K, 0.0)
    np.fill_diagonal(coef, 0.0)
    np.fill_diagonal(r, np.inf)
    W = 0.5 * M0 * M0 * float(np.sum(K)) / n**2
    v = -M0 / n * np.einsum("ij,ijk->ik", coef, diff)
    return W, v, float(r.min())


def particle_descent(kernel, N, seed=0, step=None, max_iters=20000, force_tol=1e-9,
                     initial=None):
    """Relax N particles by gradient descent on (1/2N^2) sum_{i!=j} K(|x_i - x_j|).

    Steps follow the Barzilai-Borwein rule and are halved until the
    energy does not increase (to rounding), so the recorded energies are
    nonincreasing.  ``step`` fixes the first step size.
    """
    if N < 2:
        raise DomainError("need N >= 2")
    if kernel.b <= -kernel.d:
        raise DomainError("pair forces undefined for b <= -d")
    rng = np.random.default_rng(seed)
    d, M0 = kernel.d, kernel.M0
    if initial is None:
        x = rng.uniform(-0.5, 0.5, size=(N, d))
    else:
        x = np.array(initial, dtype=float).reshape(N, d)
    x -= x.mean(axis=0)
    config = ParticleConfig(x, M0)
    W, v, _ = _energy_velocity(x, kernel, M0)
    config.energies.append(W)
    tau = step if step is not None else 0.1
    x_prev = v_prev = None
    for it in range(1, max_iters + 1):
        if float(np.max(np.linalg.norm(v, axis=1))) < force_tol:
            break
        if x_prev is not None:
            s, y = x - x_prev, v_prev - v
            sy = float(np.sum(s * y))
            if sy > 0:
                tau = float(np.sum(s * s)) / sy
        slack = 64.0 * np.finfo(float).eps * abs(W)
        for _ in range(60):
            x_new = x + tau * v
            W_new, v_new, rmin = _energy_velocity(x_new, kernel, M0)
            if rmin < 1e-12 and kernel.b < 1:
                raise FloatingPointError("particle collision: step size too large")
            if W_new <= W + slack:
                break
            tau *= 0.5
        else:
            raise FloatingPointError("no energy-decreasing step found")
        x_prev, v_prev = x, v
        x, W, v = x_new, W_new, v_new
        config.energies.append(W)
        config.iterations = it
    config.positions = x
    config.max_force = float(np.max(np.linalg.norm(v, axis=1)))
    config.converged = config.max_force < force_tol
    return config


def histogram_distance(config, state, bins=None):
    """L1 distance between the 1D particle histogram and the mass of rho per bin.

    Both are normalised to unit mass; ``bins`` defaults to sqrt(N).
    """
    if config.positions.shape[1] != 1:
        raise DomainError("histogram comparison is one-dimensional")
    x = config.positions[:, 0] - config.center_of_mass()[0]
    bins = bins or max(2, int(round(math.sqrt(config.N))))
    R = state.R
    edges = np.linspace(-R, R, bins + 1)
    counts, _ = np.histogram(np.clip(x, -R, R), bins=edges)
    emp = counts / counts.sum()
    cdf = _line_cdf(state.density, edges)
    exact = np.diff(cdf) / (cdf[-1] - cdf[0])
    return float(np.sum(np.abs(emp - exact)))


def _line_cdf(rho, edges):
    """Mass of rho on [-R, e] for each edge.

    With u = (y+R)/(2R) each term c (R^2-y^2)^beta integrates to
    c (2R)^(2beta+1) B(beta+1, beta+1) I_u(beta+1, beta+1).
    """
    R = rho.R
    u = np.clip((np.asarray(edges, dtype=float) + R) / (2.0 * R), 0.0, 1.0)
    out = np.zeros_like(u)
    for coef, beta in rho.terms:
        if callable(coef):
            raise DomainError("histogram comparison needs constant coefficients")
        p = beta + 1.0
        out += coef * (2.0 * R) ** (2.0 * beta + 1.0) * math.exp(special.betaln(p, p)) * special.betainc(p, p, u)
    return out


# -- energy ranking -----------------------------------------------------------


@dataclass(frozen=True)
class EnergyRanking:
    entries: tuple  # (label, energy) sorted ascending

    @property
    def labels(self):
        return [lab for lab, _ in self.entries]

    @property
    def lowest(self):
        return self.entries[0]


def _label(state, i):
    if isinstance(state, DeltaPair):
        return f"delta_pair(R0={state.R0:g})"
    branch = getattr(state, "branch", None)
    c = getattr(state, "c", None)
    if branch is not None:
        return f"{branch}(c={c:g})" if c else branch
    return f"state{i}"


def energy_compare(kernel, states, spec=None):
    """Sort candidates by interaction energy int rho (K * rho)."""
    if not states:
        return EnergyRanking(())
    masses = {round(getattr(s, "M0", kernel.M0), 12) for s in states}
    if len(masses) > 1:
        raise DomainError("all candidates must share the same mass")
    rows = []
    for i, s in enumerate(states):
        if isinstance(s, DeltaPair):
            energy = s.interaction_energy(kernel)
        else:
            rho = s.density if hasattr(s, "density") else s
            energy = float(interaction_energy(rho, kernel, spec))
        rows.append((_label(s, i), energy))
    rows.sort(key=lambda r: r[1])
    return EnergyRanking(tuple(rows))


# -- identity suites ----------------------------------------------------------


@dataclass(frozen=True)
class IdentityRow:
    identity: str
    params: dict
    value: float
    exact: float

    @property
    def rel_error(self):
        return abs(self.value - self.exact) / max(abs(self.exact), 1e-300)


def _fault(fault, name, value):
    # flips the sign of one closed form; used to exercise failure reporting
    return -value if fault == name else value


def identity_suite(nu=None, R=None, fault=None, spec=None):
    """Weighted power-kernel identities checked against Gauss-Jacobi quadrature.

    With ``nu`` (and optionally ``R``) only the one-dimensional identities
    at that exponent are run.
    """
    from .fredholm1d import check_identity_1d
    from .steadyhd import check_identity_hd, fundamental_identity_check

    rows = []
    radii = [R] if R else [1.0, 1.7]
    zeroth = [nu] if nu is not None else [-0.5, 0.3, 0.7]
    second = [nu] if nu is not None else [-2.0, -0.5, 0.5]
    for order, nus in (("zeroth", zeroth), ("second", second)):
        for n_ in nus:
            for rad in radii:
                for x in (0.0, 0.4 * rad, -0.85 * rad):
                    try:
                        val, ex = check_identity_1d(n_, rad, x, order, spec)
                    except DomainError:
                        continue
                    rows.append(IdentityRow(f"1d_{order}", {"nu": n_, "R": rad, "x": x}, val,
                                            _fault(fault, f"1d_{order}", ex)))
    if nu is not None:
        return rows
    xs = (0.0, 0.45, 0.9)
    for d in (1, 2, 3):
        for b in np.linspace(-d, 2 - d, 5)[1:-1]:
            rep = fundamental_identity_check(float(b), d, 1.3, [1.3 * x for x in xs], spec)
            for x, val in zip(rep.x, rep.values):
                rows.append(IdentityRow("hd_fundamental", {"b": float(b), "d": d, "R": 1.3, "x": x},
                                        val, _fault(fault, "hd_fundamental", rep.exact)))
    for k in range(4):
        for d in (1, 2, 3):
            lo, hi = -d, 2 + 2 * k - d
            for b in np.linspace(lo, hi, 5)[1:-1]:
                quad, poly, _ = check_identity_hd(k, float(b), d, 1.2, [1.2 * x for x in xs], spec)
                for x, q, p in zip(xs, quad, poly):
                    rows.append(IdentityRow("hd_power", {"k": k, "b": float(b), "d": d, "R": 1.2,
                                                         "x": 1.2 * x},
                                            float(q), _fault(fault, "hd_power", float(p))))
    return rows


def pv_suite(fault=None, spec=None):
    """Closed-form principal values of (R-y)^alpha (R+y)^beta/(y-x), both families, n = 0, 1, 2."""
    from .fredholm1d import pv_closed_form, pv_numeric

    rows = []
    for family in ("absolute", "signed"):
        for n in (0, 1, 2):
            for nu in (0.2, 0.5, 0.8):
                for R in (0.7, 1.0, 2.5):
                    for t in (-0.9, -0.45, 0.0, 0.3, 0.95):
                        x = t * R
                        name = f"pv_{family}_{n}"
                        rows.append(IdentityRow(
                            name, {"nu": nu, "R": R, "x": x},
                            float(pv_numeric(family, n, nu, R, x, spec)),
                            _fault(fault, name, float(pv_closed_form(family, n, nu, R, x)))))
    return rows


def general_formula_suite(points=20, spec=None):
    """General inversion formula against the closed-form solutions at interior points."""
    from .fredholm1d import FredholmProblem, solve_closed_form, solve_general

    cases = (
        ("absolute_const", FredholmProblem(0.4, 1.0, [1.0])),
        ("absolute_square", FredholmProblem(0.6, 1.3, [0.0, 0.0, 1.0])),
        ("signed_linear", FredholmProblem(0.5, 0.8, [0.0, 1.0], family="signed")),
    )
    rows = []
    for name, prob in cases:
        exact = solve_closed_form(prob)
        general = solve_general(prob, spec)
        for x in prob.R * np.linspace(-0.95, 0.95, points):
            rows.append(IdentityRow(name, {"nu": prob.nu, "R": prob.R, "x": float(x)},
                                    float(general(x)), float(exact(x))))
    return rows
