import math

import numpy as np
import pytest
from scipy import integrate

from aggsteady.kernel import DeltaPair, PowerLawKernel, optimal_delta_pair
from aggsteady.quadrature import interaction_energy, potential
from aggsteady.specfun import DomainError
from aggsteady.steady1d import (
    UnsupportedBranch,
    construct_a2,
    construct_b2,
    delta_pair_optimal,
    energy_b2_closed_form,
    energy_of_family,
    energy_of_family_derivative,
    family_radius,
    rescaled_moment,
)

# 30-digit mpmath evaluations of the radius formulas and of
# E = int (|y|^a/a - |y|^b/b) rho(y) dy by tanh-sinh quadrature
B2_A25_R = 0.61920174652696749297
B2_A25_E = -0.05112144038693958663
A2_B05_R = 1.17324652288907865809
A2_B05_E = -1.17986348868969717563


def test_b2_frozen_values():
    s = construct_b2(2.5)
    assert s.R == pytest.approx(B2_A25_R, rel=1e-14)
    assert s.E == pytest.approx(B2_A25_E, rel=1e-12)
    assert s.branch == "b2"
    assert s.boundary_exponent == pytest.approx(-0.75)


def test_b2_multiplier_closed_form():
    for a in (2.1, 2.5, 2.9):
        assert construct_b2(a).E == pytest.approx(energy_b2_closed_form(a), rel=1e-12)


def test_b2_unit_mass_by_quadpack():
    s = construct_b2(2.3)
    (coef, beta), = s.density.terms
    mass = integrate.quad(lambda y: coef, -s.R, s.R, weight="alg", wvar=(beta, beta))[0]
    # the weight (y+R)^beta (R-y)^beta is (R^2-y^2)^beta
    assert mass == pytest.approx(1.0, rel=1e-10)


def test_b2_mass_scaling():
    s1, s3 = construct_b2(2.5, 1.0), construct_b2(2.5, 3.0)
    assert s3.R == pytest.approx(s1.R)
    assert s3.density.mass(1) == pytest.approx(3.0)
    assert s3.E == pytest.approx(3 * s1.E)


def test_b2_range():
    for a in (2.0, 3.0, 3.5):
        with pytest.raises(UnsupportedBranch):
            construct_b2(a)


def test_a2_frozen_values():
    s = construct_a2(0.5)
    assert s.R == pytest.approx(A2_B05_R, rel=1e-14)
    assert s.E == pytest.approx(A2_B05_E, rel=1e-12)
    assert s.branch == "a2_regular"


def test_a2_b1_is_uniform():
    s = construct_a2(1.0)
    assert s.R == pytest.approx(1.0, rel=1e-14)
    assert s(0.3) == pytest.approx(0.5) and s(0.99) == pytest.approx(0.5)
    # E = int_{-1}^{1} (y^2/2 - |y|) / 2 dy
    assert s.E == pytest.approx(1 / 6 - 1 / 2, rel=1e-13)


def test_a2_log_case():
    s = construct_a2(0.0)
    assert s.R == pytest.approx(math.sqrt(2.0), rel=1e-13)
    x = np.linspace(0, 0.95 * s.R, 6)
    v = potential(s.density, s.kernel, x)
    assert np.ptp(v) < 1e-8 * abs(s.E)


@pytest.mark.parametrize("b,c", [(-0.5, 0.0), (0.5, 0.0), (1.5, 0.0), (0.5, 0.2), (-0.5, 0.3)])
def test_a2_states_satisfy_euler_lagrange_on_support(b, c):
    s = construct_a2(b, c)
    x = np.linspace(0, 0.999 * s.R, 9)
    v = potential(s.density, s.kernel, x)
    assert np.ptp(v) < 1e-9 * abs(s.E)
    assert s.density.mass(1) == pytest.approx(1.0, rel=1e-12)
    assert interaction_energy(s.density, s.kernel) == pytest.approx(s.E, rel=1e-9)


def test_a2_family_errors():
    with pytest.raises(UnsupportedBranch):
        construct_a2(1.5, 0.2)
    with pytest.raises(DomainError):
        construct_a2(0.5, -0.1)
    with pytest.raises(UnsupportedBranch):
        construct_a2(2.0)


def test_family_energy_closed_form_matches_construction():
    for b in (0.2, 0.7):
        for c in (0.0, 0.3, 1.0):
            assert energy_of_family(b, c) == pytest.approx(construct_a2(b, c).E, rel=1e-12)


def test_family_energy_derivative_by_finite_differences():
    b, c, h = 0.4, 0.3, 1e-5
    fd = (energy_of_family(b, c + h) - energy_of_family(b, c - h)) / (2 * h)
    assert energy_of_family_derivative(b, c) == pytest.approx(fd, rel=1e-7)
    assert energy_of_family_derivative(b, 0.0) == 0.0


def test_family_radius_consistent_with_mass():
    for c in (0.0, 0.5):
        s = construct_a2(0.3, c)
        assert s.R == family_radius(0.3, c)
        assert s.density.mass(1) == pytest.approx(1.0, rel=1e-12)


def test_delta_pair():
    k = PowerLawKernel(2.5, 2.0)
    pair, energy = delta_pair_optimal(k)
    assert pair.R0 == 0.5
    assert energy == pytest.approx((2 - 2.5) / (4 * 2.5))
    assert optimal_delta_pair(k)[1] == pytest.approx(energy)
    with pytest.raises(DomainError):
        delta_pair_optimal(PowerLawKernel(2.0, 1.0))
    with pytest.raises(DomainError):
        DeltaPair(0.5).energy_per_mass(PowerLawKernel(2.0, -0.5))


def test_b2_state_beats_delta_pair():
    for a in np.arange(2.1, 2.95, 0.1):
        assert construct_b2(a).E < delta_pair_optimal(PowerLawKernel(a, 2.0))[1]


def test_rescaled_moment():
    s = construct_a2(1.0)
    assert rescaled_moment(s, 0) == pytest.approx(1.0)
    # uniform density 1/2 on [-1, 1]: int y^2/2 = 1/3
    assert rescaled_moment(s, 2, check=True) == pytest.approx(1 / 3)
    with pytest.raises(DomainError):
        rescaled_moment(s, 3)
