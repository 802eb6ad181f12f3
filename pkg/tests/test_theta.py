import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellpolylog.level import DeckElement, random_gamma_N
from ellpolylog.numeric import TWO_PI_I, holomorphic_derivative, lattice_sum
from ellpolylog.theta import (dedekind_eta, eta_lattice, eta_one, eta_one_derivative,
                              eta_one_lattice, eta_one_qseries, eta_tau, log_theta,
                              theta11, theta_elementary, theta_logderivative,
                              theta_product_unreduced, theta_transform, weierstrass_sigma_zeta_p,
                              wp, zeta_weierstrass)
from ellpolylog.errors import DomainError, PoleError

taus = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.7, 2.5))
unit = st.floats(-0.45, 0.45)


@given(taus, unit, unit)
def test_reduced_matches_plain_product(tau, x, y):
    z = x + y * tau
    a = theta_elementary(z, tau)
    b = theta_product_unreduced(z, tau)
    assert abs(a - b) < 1e-12 * max(abs(b), 1e-3)


@given(taus, unit, unit)
def test_theta_odd(tau, x, y):
    z = x + y * tau
    assert abs(theta_elementary(-z, tau) + theta_elementary(z, tau)) < 1e-13


@pytest.mark.parametrize("tau", [1j, 0.3 + 0.8j, 2j])
def test_theta_normalization_and_zeros(tau):
    d = holomorphic_derivative(lambda z: theta_elementary(z, tau), 0.0, 1, sing_dist=abs(tau))
    assert abs(d - 1) < 1e-12
    assert theta_elementary(2 * tau - 3, tau) == 0
    # cubic coefficient: theta'''(0) = 3 eta(1)
    d3 = holomorphic_derivative(lambda z: theta_elementary(z, tau), 0.0, 3, sing_dist=abs(tau))
    assert abs(d3 - 3 * eta_one(tau)) < 1e-9


@pytest.mark.parametrize("tau", [1j, 0.25 + 0.9j])
def test_theta11_relation(tau):
    for z in (0.1 + 0.05j, 0.37 - 0.2j):
        want = -theta11(z, tau) / (2 * math.pi * dedekind_eta(tau) ** 3)
        assert abs(theta_elementary(z, tau) - want) < 1e-12 * abs(want)


def test_covariance_law():
    rng = np.random.default_rng(7)
    for _ in range(20):
        d = DeckElement(tuple(rng.integers(-2, 3, size=2)), random_gamma_N(5, rng, 4))
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.8))
        z = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.4, 0.4))
        m, n = d.shift
        (a, b), (c, dd) = d.gamma
        j = c * tau + dd
        lhs = theta_elementary((z + m * tau + n) / j, (a * tau + b) / j)
        assert abs(lhs - theta_transform(z, tau, d)) < 1e-8 * abs(lhs)


def test_eta_one_routes():
    assert abs(eta_one(50j) + math.pi ** 2 / 3) < 1e-12
    for tau in (1j, 0.3 + 0.7j, -0.2 + 1.9j):
        ref = eta_one_lattice(tau)
        assert abs(eta_one(tau) - ref) < 1e-12 * abs(ref)
        assert abs(eta_one_qseries(tau) - ref) < 1e-12 * abs(ref)
    # G_2(i) = pi: eta(1, i) = -pi
    assert abs(eta_one(1j) + math.pi) < 1e-12


def test_eta_one_transport_law():
    tau = 0.15 + 1.2j
    for g in (((1, 1), (0, 1)), ((0, -1), (1, 0)), ((2, 1), (5, 3))):
        (a, b), (c, d) = g
        j = c * tau + d
        assert abs(eta_one((a * tau + b) / j) - (j * j * eta_one(tau) + TWO_PI_I * c * j)) < 1e-10 * abs(j) ** 2


@pytest.mark.parametrize("tau", [1j, 0.4 + 1.1j, -0.3 + 0.6j])
def test_legendre(tau):
    assert abs(eta_tau(tau) - tau * eta_one(tau) - TWO_PI_I) < 1e-10
    assert abs(eta_lattice(1, 0, tau) - eta_tau(tau)) < 1e-10
    assert eta_lattice(0, 1, tau) == eta_one(tau)


def test_eta_one_derivative_is_ramanujan():
    # Ramanujan in lattice normalization: 2 pi i G_2' = 5 G_4 - G_2^2
    tau = 0.1 + 1.1j
    g2 = -eta_one(tau)
    g4 = lattice_sum(4, (0, 0), tau)
    want = -(5 * g4 - g2 * g2) / TWO_PI_I
    assert abs(eta_one_derivative(tau) - want) < 1e-8 * abs(want)


@pytest.mark.parametrize("tau", [1j, 0.2 + 0.9j])
def test_weierstrass_differential_equation(tau):
    g2 = 60 * lattice_sum(4, (0, 0), tau)
    g3 = 140 * lattice_sum(6, (0, 0), tau)
    for z in (0.21 + 0.13j, 0.4 - 0.3j):
        p = wp(z, tau)
        dp = holomorphic_derivative(lambda x: wp(x, tau), z, 1, sing_dist=0.2)
        assert abs(dp * dp - (4 * p ** 3 - g2 * p - g3)) < 1e-8 * abs(dp) ** 2


def test_zeta_sigma_small_z():
    tau = 0.3 + 1.0j
    z = 1e-3 + 2e-3j
    s, zt, p = weierstrass_sigma_zeta_p(z, tau)
    assert abs(s / z - 1) < 1e-5
    assert abs(zt - 1 / z) < 1e-4
    assert abs(p - 1 / z ** 2) < 1e-2


def test_logderivative_and_errors():
    tau = 0.3 + 1.0j
    z = 0.27 + 0.11j
    d = holomorphic_derivative(lambda x: np.exp(log_theta(x, tau)), z, 1, sing_dist=0.2)
    assert abs(theta_logderivative(z, tau) - d / theta_elementary(z, tau)) < 1e-11
    assert abs(zeta_weierstrass(z, tau) - (theta_logderivative(z, tau) - eta_one(tau) * z)) < 1e-14
    with pytest.raises(PoleError):
        wp(1.0, tau)
    with pytest.raises(PoleError):
        theta_logderivative(tau, tau)
    with pytest.raises(DomainError):
        theta_elementary(0.1, -1j)


def test_broadcasting():
    z = np.array([[0.1, 0.2], [0.3, 0.4]]) + 0.05j
    tau = np.array([1j, 0.5 + 1j])
    out = theta_elementary(z, tau)
    assert out.shape == (2, 2)
    assert abs(out[1, 1] - theta_elementary(z[1, 1], tau[1])) < 1e-15
