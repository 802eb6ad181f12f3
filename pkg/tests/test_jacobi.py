import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellpolylog.errors import DomainError, PoleError
from ellpolylog.jacobi import (JacobiPoint, e1_closed_form, e_k_character_sum,
                               eisenstein_kronecker_all, eisenstein_kronecker_e,
                               heat_equation_defect, jacobi_J, jacobi_residue,
                               jacobi_transform_factor, laurent_r, r_residues, r_residue_expected,
                               zagier_F)
from ellpolylog.level import random_gamma_N
from ellpolylog.numeric import TWO_PI_I
from ellpolylog.theta import eta_one, theta_elementary, zeta_weierstrass

taus = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.8, 2.0))
frac = st.floats(0.1, 0.4)


@given(taus, frac, frac, frac, frac)
def test_symmetry(tau, a, b, c, d):
    z, w = a + b * tau, c - d * tau
    assert abs(jacobi_J(z, w, tau) - jacobi_J(w, z, tau)) < 1e-12 * abs(jacobi_J(z, w, tau))


def test_residue_at_origin():
    tau, w = 0.2 + 1.1j, 0.3 + 0.2j
    v1, v2, v4 = (h * jacobi_J(h, w, tau) for h in (1e-3, 5e-4, 2.5e-4))
    # two rounds of Richardson extrapolation to h = 0
    r1, r2 = 2 * v2 - v1, 2 * v4 - v2
    assert abs((4 * r2 - r1) / 3 - 1) < 1e-8


@given(taus, frac, frac)
def test_quasi_periodicity(tau, a, b):
    z, w = a + 0.3 * tau, b - 0.2 * tau
    lhs = jacobi_J(z + tau, w, tau)
    assert abs(lhs - np.exp(-TWO_PI_I * w) * jacobi_J(z, w, tau)) < 1e-9 * abs(lhs)
    assert abs(jacobi_J(z + 1, w, tau) - jacobi_J(z, w, tau)) < 1e-9 * abs(lhs)


def test_transform_factor():
    assert jacobi_transform_factor(0.3, 0.2, 1j) == 1
    assert abs(jacobi_transform_factor(0.3, 0.2, 1j, (0, 1)) - 1) < 1e-15
    rng = np.random.default_rng(3)
    for _ in range(10):
        g = random_gamma_N(4, rng, 3)
        (a, b), (c, d) = g
        sz, sw = tuple(rng.integers(-2, 3, 2)), tuple(rng.integers(-2, 3, 2))
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.8, 1.5))
        z, w = 0.21 + 0.1j, 0.33 - 0.17j
        j = c * tau + d
        lhs = jacobi_J((z + sz[0] * tau + sz[1]) / j, (w + sw[0] * tau + sw[1]) / j, (a * tau + b) / j)
        rhs = jacobi_transform_factor(z, w, tau, sz, sw, g) * jacobi_J(z, w, tau)
        assert abs(lhs - rhs) < 1e-8 * abs(lhs)


def test_pole_errors():
    with pytest.raises(PoleError, match="z\\+w"):
        jacobi_J(0.3, -0.3, 1j)
    with pytest.raises(PoleError):
        jacobi_J(1j, 0.2, 1j)
    with pytest.raises(DomainError):
        JacobiPoint(0.1, 0.2, -1j)


@pytest.mark.parametrize("z", [0.3 + 0.2j, -0.17 + 0.4j])
def test_laurent_data(z):
    tau = 0.1 + 1.2j
    lr = laurent_r(z, tau, 4)
    assert lr.pole_order == 1
    assert abs(lr[-1] - 1) < 1e-10
    assert abs(lr[0] - (zeta_weierstrass(z, tau) + eta_one(tau) * z)) < 1e-9
    shifted = laurent_r(z + 1, tau, 4)
    assert np.max(np.abs(shifted.as_array() - lr.as_array())) < 1e-9
    with pytest.raises(PoleError):
        laurent_r(tau, tau, 2)


def test_residues():
    tau = 0.2 + 1.1j
    w = 0.3 + 0.1j
    for m in range(-2, 3):
        assert abs(jacobi_residue(w, m, 1, tau) - np.exp(-TWO_PI_I * m * w)) < 1e-8
        got = r_residues(4, m, -1, tau)
        want = [r_residue_expected(k, m) for k in range(5)]
        assert np.max(np.abs(got - want)) < 1e-7


def test_heat_equation():
    d, s = heat_equation_defect(0.3, 0.2, 2j, return_scale=True)
    assert abs(d) < 1e-7 and abs(d) / abs(s) < 1e-6
    control = lambda z, w, t: theta_elementary(z + w, t)
    dc, sc = heat_equation_defect(0.3, 0.2, 2j, func=control, return_scale=True)
    assert abs(dc) / abs(sc) > 1e-2


def test_zagier():
    u, v, tau = 0.2, 0.3, 2j
    F = zagier_F(TWO_PI_I * u, TWO_PI_I * v, tau)
    J = jacobi_J(u, v, tau)
    assert abs(TWO_PI_I * F - J) < 1e-8 * abs(J)
    # also off the real axis, inside the strip
    u, v = 0.2 + 0.3j, 0.1 - 0.4j
    assert abs(TWO_PI_I * zagier_F(TWO_PI_I * u, TWO_PI_I * v, tau) - jacobi_J(u, v, tau)) < 1e-8 * abs(jacobi_J(u, v, tau))
    with pytest.raises(DomainError):
        zagier_F(TWO_PI_I * (0.1 - 2.5j), TWO_PI_I * 0.2, tau)
    a = zagier_F(1.0j, 2.0j, tau, terms=40)
    b = zagier_F(1.0j, 2.0j, tau, terms=80)
    assert abs(a - b) < 1e-14


def test_e1_routes_and_parity():
    tau = 0.3 + 1.2j
    for z in (0.2 + 0.3j, -0.4 + 0.1j):
        assert abs(eisenstein_kronecker_e(1, z, tau) - e1_closed_form(z, tau)) < 1e-9
        es = eisenstein_kronecker_all(z, tau, 5)
        em = eisenstein_kronecker_all(-z, tau, 5)
        for k in range(1, 6):
            assert abs(em[k - 1] - (-1) ** k * es[k - 1]) < 1e-9 * max(1, abs(es[k - 1]))
    with pytest.raises(PoleError):
        eisenstein_kronecker_e(2, tau, tau)
    with pytest.raises(DomainError):
        eisenstein_kronecker_e(0, 0.1, tau)


@pytest.mark.parametrize("k", [3, 4, 5])
def test_ek_character_sum(k):
    tau = 0.2 + 1.1j
    alpha, beta = 1 / 3, 1 / 4
    got = eisenstein_kronecker_e(k, alpha * tau + beta, tau)
    want = e_k_character_sum(k, alpha, beta, tau)
    assert abs(got - want) < 1e-7 * max(1, abs(want))
