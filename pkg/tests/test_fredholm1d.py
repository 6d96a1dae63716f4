import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate, special

from aggsteady.fredholm1d import (
    FredholmProblem,
    LineDensity,
    UnsupportedProblem,
    apply_operator,
    check_identity_1d,
    fractional_derivative_coeffs,
    identity_closed_form,
    plemelj_polynomial,
    pv_closed_form,
    pv_exponents,
    pv_numeric,
    solve_closed_form,
    solve_general,
)
from aggsteady.specfun import DomainError


def test_zeroth_identity_example():
    val, exact = check_identity_1d(0.5, 1.0, 0.4, "zeroth")
    assert exact == pytest.approx(math.pi * math.sqrt(2), rel=1e-15)
    assert val == pytest.approx(exact, rel=1e-9)


def test_second_identity_example():
    val, exact = check_identity_1d(-2.0, 1.0, 0.0, "second")
    assert exact == pytest.approx(math.pi / 2, rel=1e-15)
    assert val == pytest.approx(exact, rel=1e-9)


def test_zeroth_identity_independent_of_x_and_R():
    vals = [check_identity_1d(0.3, R, t * R, "zeroth")[0] for R in (0.5, 2.0) for t in (-0.7, 0.0, 0.6)]
    np.testing.assert_allclose(vals, vals[0], rtol=1e-9)


def test_second_identity_against_quadpack():
    nu, R, x = 0.4, 1.3, 0.5
    g = lambda y: (R * R - y * y) ** ((nu + 1) / 2)
    ref = (integrate.quad(g, -R, x, weight="alg", wvar=(0.0, -nu))[0]
           + integrate.quad(g, x, R, weight="alg", wvar=(-nu, 0.0))[0])
    assert identity_closed_form(nu, R, x, "second") == pytest.approx(ref, rel=1e-9)


def test_identity_range_errors():
    with pytest.raises(DomainError):
        check_identity_1d(1.2, 1.0, 0.0, "zeroth")
    with pytest.raises(DomainError):
        check_identity_1d(-3.5, 1.0, 0.0, "second")
    with pytest.raises(DomainError):
        check_identity_1d(0.5, 1.0, 1.0, "zeroth")
    with pytest.raises(DomainError):
        identity_closed_form(0.5, 1.0, 0.0, "third")


def test_plemelj_polynomial_small_cases():
    # (z-R)^a (z+R)^(1-a) = z + R(1-2a) + O(1/z)
    a, R = 0.3, 2.0
    assert plemelj_polynomial(a, 1 - a, R) == pytest.approx([1.0, R * (1 - 2 * a)])
    with pytest.raises(DomainError):
        plemelj_polynomial(0.3, 0.4, 1.0)


def _pv_oracle(alpha, beta, R, x):
    """P.V. integral of (R-y)^alpha (R+y)^beta/(y-x) by singularity subtraction.

    int (g(y)-g(x))/(y-x) dy + g(x) log((R-x)/(R+x)); the regular part is
    integrated by mpmath after y = -R + 2R u^m, m = 1/(1+beta), which
    removes the (R+y)^beta edge singularity.
    """
    mp.mp.dps = 30
    R, x, alpha, beta = mp.mpf(R), mp.mpf(x), mp.mpf(alpha), mp.mpf(beta)
    m = 1 / (1 + beta)
    y = lambda u: -R + 2 * R * u**m
    gx = (R - x) ** alpha * (R + x) ** beta
    ux = ((x + R) / (2 * R)) ** (1 / m)

    def integrand(u):
        # g(y) y'(u) = (R-y)^alpha (2R)^(1+beta) m exactly
        gdy = (R - y(u)) ** alpha * (2 * R) ** (1 + beta) * m
        return (gdy - gx * 2 * R * m * u ** (m - 1)) / (y(u) - x)

    reg = mp.quad(integrand, [0, ux, 1])
    return float(reg + gx * mp.log((R - x) / (R + x)))


@pytest.mark.parametrize("family", ["absolute", "signed"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_pv_closed_form_against_subtracted_quadrature(family, n):
    nu, R, x = 0.35, 1.4, 0.3
    alpha, beta = pv_exponents(family, n, nu)
    ref = _pv_oracle(alpha, beta, R, x)
    assert pv_closed_form(family, n, nu, R, x) == pytest.approx(ref, rel=1e-12)
    assert pv_numeric(family, n, nu, R, x) == pytest.approx(ref, rel=1e-10)


def test_absolute_closed_form_solves_constant_rhs():
    prob = FredholmProblem(0.4, 1.0, [1.0])
    rho = solve_closed_form(prob)
    np.testing.assert_allclose(apply_operator(rho, prob, [-0.8, 0.0, 0.5]), 1.0, rtol=1e-9)


def test_absolute_closed_form_solves_square_rhs():
    prob = FredholmProblem(0.6, 1.3, [0.0, 0.0, 1.0])
    rho = solve_closed_form(prob)
    x = np.array([-1.1, -0.2, 0.4, 1.0])
    np.testing.assert_allclose(apply_operator(rho, prob, x), x**2, rtol=1e-9)


def test_signed_closed_form_with_null_component():
    prob = FredholmProblem(0.5, 0.8, [0.0, 2.0], family="signed", c_null=0.7)
    rho = solve_closed_form(prob)
    x = np.array([-0.6, 0.1, 0.7])
    np.testing.assert_allclose(apply_operator(rho, prob, x), 2 * x, rtol=1e-9, atol=1e-12)


@pytest.mark.parametrize("prob", [
    FredholmProblem(0.4, 1.0, [1.0]),
    FredholmProblem(0.6, 1.3, [0.5, 0.0, 1.0]),
    FredholmProblem(0.5, 0.8, [0.0, 1.0], family="signed"),
    FredholmProblem(0.3, 1.0, [0.0, 1.0], family="signed", c_null=0.4),
])
def test_general_formula_matches_closed_form(prob):
    exact = solve_closed_form(prob)
    general = solve_general(prob)
    assert isinstance(general, LineDensity)
    for x in prob.R * np.linspace(-0.9, 0.9, 7):
        assert general(x) == pytest.approx(exact(x), rel=1e-9)


def test_general_formula_cubic_rhs_reproduces_rhs():
    prob = FredholmProblem(0.45, 1.0, [0.2, -0.3, 0.0, 0.5])
    general = solve_general(prob)
    R, nu, x0 = prob.R, prob.nu, 0.25
    ex = (nu - 1) / 2
    total = 0.0
    # [-R, x0]: weight (y+R)^ex (x0-y)^-nu ; [x0, R]: weight (y-x0)^-nu (R-y)^ex
    for lo, hi, left, right, other in ((-R, x0, ex, -nu, lambda y: (R - y) ** ex),
                                       (x0, R, -nu, ex, lambda y: (R + y) ** ex)):
        t, w = special.roots_jacobi(60, right, left)
        half = 0.5 * (hi - lo)
        y = lo + half * (1 + t)
        g = np.array([general(v) for v in y]) / ((R * R - y * y) ** ex) * other(y)
        total += half ** (left + right + 1) * np.dot(w, g)
    assert total == pytest.approx(0.2 - 0.3 * x0 + 0.5 * x0**3, rel=1e-8)


def test_fractional_derivative_of_constant():
    # d/dx int_{-R}^x (x-y)^(nu-1) dy = (x+R)^(nu-1)
    assert fractional_derivative_coeffs([1.0], 1.0, 0.3) == pytest.approx([1.0])


def test_unsupported_and_invalid_problems():
    with pytest.raises(UnsupportedProblem):
        solve_closed_form(FredholmProblem(0.4, 1.0, [0.0, 1.0]))
    with pytest.raises(UnsupportedProblem):
        solve_closed_form(FredholmProblem(0.4, 1.0, [1.0], family="signed"))
    with pytest.raises(DomainError):
        FredholmProblem(1.0, 1.0, [1.0])
    with pytest.raises(DomainError):
        FredholmProblem(0.5, -1.0, [1.0])
    with pytest.raises(DomainError):
        FredholmProblem(0.5, 1.0, [1.0], family="odd")
