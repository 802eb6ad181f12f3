import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellpolylog.errors import DomainError, EvaluationError
from ellpolylog.numeric import (DEFAULT_PRECISION, Precision, TruncatedLaurent, UpperHalfPoint,
                                as_tau, cauchy_coefficients, circle_coefficients,
                                holomorphic_derivative, lattice_distance, lattice_sum, reduce_tau,
                                shortest_vector, tau_pole_distance)

coef = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def row_closed_form(k, u, tau, exclude_origin, rows=40):
    """Sum over rows m of sum_n (u + m tau + n)^-k via polygamma; rows decay geometrically."""
    total = mpmath.mpc(0)
    for m in range(-rows, rows + 1):
        v = mpmath.mpc(u + m * tau)
        if exclude_origin and m == 0:
            total += (1 + (-1) ** k) * mpmath.zeta(k)
            continue
        total += ((-1) ** k * mpmath.psi(k - 1, v) + mpmath.psi(k - 1, 1 - v)) / mpmath.factorial(k - 1)
    return complex(total)


def test_precision_defaults_and_validation():
    p = Precision()
    assert (p.q_tail_eps, p.quad_points, p.lattice_radius, p.deriv_radius_frac) == (1e-14, 256, 64, 0.25)
    for bad in (dict(quad_points=100), dict(quad_points=8), dict(lattice_radius=3),
                dict(deriv_radius_frac=1.0), dict(q_tail_eps=0.0)):
        with pytest.raises(DomainError):
            Precision(**bad)


def test_upper_half_point():
    assert complex(UpperHalfPoint(2j)) == 2j
    with pytest.raises(DomainError):
        UpperHalfPoint(1 - 1j)
    with pytest.raises(DomainError):
        as_tau(0.5)


def test_truncated_laurent_indexing():
    t = TruncatedLaurent(1, (1, 2, 3), 0j, 0.1)
    assert t.trunc_degree == 1
    assert t[-1] == 1 and t[1] == 3
    with pytest.raises(IndexError):
        t[2]
    with pytest.raises(DomainError):
        TruncatedLaurent(3, (1, 2), 0j, 0.1)


@given(st.lists(coef, min_size=1, max_size=13), st.floats(0.3, 2.0))
def test_cauchy_recovers_polynomial(coeffs, radius):
    f = lambda w: np.polyval(coeffs[::-1], w)
    got = cauchy_coefficients(f, 0j, radius, 0, len(coeffs) - 1).as_array()
    scale = max(1.0, max(abs(c) for c in coeffs))
    assert np.max(np.abs(got - np.array(coeffs))) < 1e-10 * scale


def test_cauchy_with_pole_and_scalar_fallback():
    f = lambda w: complex(2 / w + 3 + 5 * w)  # scalar-only callable
    lr = cauchy_coefficients(f, 0j, 0.5, 1, 2)
    assert abs(lr[-1] - 2) < 1e-13 and abs(lr[0] - 3) < 1e-13 and abs(lr[1] - 5) < 1e-13
    assert abs(lr[2]) < 1e-12


def test_quadrature_saturation():
    f = lambda w: np.exp(w) / (w - 3)
    a = cauchy_coefficients(f, 0j, 1.0, 0, 8, Precision(quad_points=128)).as_array()
    b = cauchy_coefficients(f, 0j, 1.0, 0, 8, Precision(quad_points=256)).as_array()
    assert np.max(np.abs(a - b)) < DEFAULT_PRECISION.q_tail_eps


def test_nonfinite_node_reported():
    with pytest.raises(EvaluationError, match="node index"):
        with np.errstate(all="ignore"):
            circle_coefficients(lambda w: 1 / (w - 1), 0j, 1.0, 0, 2, 16)


def test_holomorphic_derivative():
    assert abs(holomorphic_derivative(np.sin, 0.3, 1) - math.cos(0.3)) < 1e-13
    assert abs(holomorphic_derivative(np.exp, 0.1 + 0.2j, 3) - np.exp(0.1 + 0.2j)) < 1e-12
    arr = holomorphic_derivative(np.exp, np.array([0.0, 1.0]), 1, sing_dist=np.array([1.0, 2.0]))
    assert np.allclose(arr, np.exp([0.0, 1.0]), atol=1e-13)
    with pytest.raises(DomainError):
        holomorphic_derivative(np.sin, 0.0, 1, sing_dist=0.0)
    with pytest.raises(DomainError):
        holomorphic_derivative(np.sin, 0.0, 0)


@given(st.floats(-3, 3), st.floats(0.05, 3))
def test_reduce_tau(x, y):
    tau = complex(x, y)
    t0, a, b, c, d = (complex(v) if i == 0 else int(v) for i, v in enumerate(reduce_tau(tau)))
    assert a * d - b * c == 1
    assert abs(t0 - (a * tau + b) / (c * tau + d)) < 1e-9 * max(1, abs(t0))
    assert abs(t0.real) <= 0.5 + 1e-12 and abs(t0) >= 1 - 1e-12


def test_lattice_geometry():
    tau = 0.2 + 1.1j
    assert lattice_distance(0.0, tau) == 0
    assert abs(lattice_distance(3 * tau - 2 + 0.01j, tau) - 0.01) < 1e-12
    assert abs(shortest_vector(1j) - 1) < 1e-15
    assert abs(shortest_vector(0.5j) - 0.5) < 1e-15
    # distances are capped by Im tau (the real axis is singular too)
    assert tau_pole_distance([0.5], 1j) <= 1.0
    assert tau_pole_distance([0.3 + 0.9j], 1j) <= abs(0.3 + 0.9j - 1j) + 1e-12


@pytest.mark.parametrize("k", [3, 4, 5, 6])
@pytest.mark.parametrize("offset", [(0, 0), (0.25, 0.5), (1 / 3, 0.2)])
@pytest.mark.parametrize("tau", [1j, 0.3 + 0.9j, -0.45 + 0.6j])
def test_lattice_sum_against_row_closed_form(k, offset, tau):
    x, y = offset
    exclude = x == 0 and y == 0
    want = row_closed_form(k, x * tau + y, tau, exclude)
    got, err = lattice_sum(k, offset, tau, return_error=True)
    assert abs(got - want) < 1e-9 * max(1, abs(want))
    assert err < 1e-9 * max(1, abs(want))


def test_lattice_sum_known_values():
    # G_4(i) = Gamma(1/4)^8 / (960 pi^2)
    g4 = math.gamma(0.25) ** 8 / (960 * math.pi ** 2)
    assert abs(lattice_sum(4, (0, 0), 1j) - g4) < 1e-12
    assert abs(lattice_sum(3, (0, 0), 1j)) < 1e-13
    assert abs(lattice_sum(4, (0, 0), np.exp(2j * math.pi / 3))) < 1e-12
    assert abs(lattice_sum(6, (0, 0), 1j)) < 1e-12
    # periodicity in the offset and parity
    a = lattice_sum(5, (0.2, 0.3), 1.1j)
    assert abs(lattice_sum(5, (1.2, -0.7), 1.1j) - a) < 1e-10
    assert abs(lattice_sum(5, (-0.2, -0.3), 1.1j) + a) < 1e-10
    with pytest.raises(DomainError):
        lattice_sum(2, (0, 0), 1j)


def test_lattice_sum_transport():
    # sum over the same lattice written in another basis
    tau = 0.2 + 1.3j
    g = ((1, 1), (2, 3))
    (a, b), (c, d) = g
    j = c * tau + d
    lhs = lattice_sum(4, (0, 0), (a * tau + b) / j)
    assert abs(lhs - j ** 4 * lattice_sum(4, (0, 0), tau)) < 1e-9 * abs(lhs)
