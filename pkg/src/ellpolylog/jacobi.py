"""The meromorphic Jacobi form J(z, w, tau), its Laurent data and the functions e_k."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError
from .level import check_sl2z
from .numeric import (DEFAULT_PRECISION, TWO_PI_I, Precision, TruncatedLaurent, as_tau,
                      circle_coefficients, holomorphic_derivative, lattice_distance,
                      shortest_vector, tau_pole_distance)
from .theta import eta_one, log_theta

PI = math.pi


@dataclass(frozen=True)
class JacobiPoint:
    z: complex
    w: complex
    tau: complex

    def __post_init__(self):
        as_tau(self.tau)


def _pole_check(z, w, tau, eps):
    for what, p in (("z", z), ("w", w), ("z+w", np.asarray(z) + np.asarray(w))):
        if np.any(lattice_distance(p, tau) < eps):
            raise PoleError(f"{what} lies on the period lattice (pole divisor {what} in Z tau + Z)")


def jacobi_J(z, w, tau, prec: Precision = DEFAULT_PRECISION, check: bool = True):
    """theta(z + w)/(theta(z) theta(w)); broadcasts over z, w, tau."""
    as_tau(tau)
    if check:
        _pole_check(z, w, tau, max(prec.q_tail_eps, 1e-13))
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    out = np.exp(log_theta(z + w, tau, prec) - log_theta(z, tau, prec) - log_theta(w, tau, prec))
    return complex(out) if np.ndim(out) == 0 else out


def jacobi_transform_factor(z, w, tau, deck_z=(0, 0), deck_w=(0, 0), gamma=((1, 0), (0, 1))):
    """J at the transformed point divided by J(z, w, tau)."""
    (a, b), (c, d) = check_sl2z(gamma)
    m, n = deck_z
    m2, n2 = deck_w
    j = c * tau + d
    return j * np.exp(TWO_PI_I * c / j * (z + m * tau + n) * (w + m2 * tau + n2)
                      - TWO_PI_I * m2 * z - TWO_PI_I * m * w - TWO_PI_I * m * m2 * tau)


def w_radius(z, tau, frac: float, scale: float = 1.0):
    """Radius for w-expansions of J(z, w/scale): frac times the distance to the nearest w-pole."""
    d1 = shortest_vector(tau)
    d2 = lattice_distance(z, tau)
    return frac * scale * np.minimum(d1, d2)


def laurent_coefficients(z, tau, K: int, prec: Precision = DEFAULT_PRECISION, frac=None):
    """Array [c_-1, c_0, ..., c_K] of J(z, ., tau) around w = 0 (broadcasting in z, tau)."""
    frac = prec.deriv_radius_frac if frac is None else frac
    z = np.asarray(z, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    r = np.min(w_radius(z, tau, frac))
    zz = z[..., None]
    tt = tau[..., None]
    f = lambda wn: jacobi_J(zz, wn, tt, prec, check=False)
    center = np.zeros(np.broadcast(z, tau).shape)
    return circle_coefficients(f, center, np.full(center.shape, r), -1, K, prec.quad_points)


def laurent_r(z, tau, K: int, prec: Precision = DEFAULT_PRECISION) -> TruncatedLaurent:
    """Laurent data 1/w + sum r_k w^k of J(z, w, tau) in w."""
    tau = complex(as_tau(tau))
    if lattice_distance(z, tau) < 1e-9:
        raise PoleError("z lies on the period lattice; no w-expansion radius available")
    r = float(w_radius(z, tau, prec.deriv_radius_frac))
    c = laurent_coefficients(z, tau, K, prec)
    return TruncatedLaurent(1, tuple(complex(v) for v in c), 0j, r)


def heat_equation_defect(z, w, tau, prec: Precision = DEFAULT_PRECISION, func=None,
                         return_scale: bool = False):
    """2 pi i d_tau J - d_z d_w J at a point (func replaces J for control runs).

    With ``return_scale`` the pair (defect, d_z d_w J) is returned.
    """
    tau = complex(as_tau(tau))
    F = func or (lambda a, b, t: jacobi_J(a, b, t, prec, check=False))
    _pole_check(z, w, tau, 1e-9)
    dz = float(min(lattice_distance(z, tau), lattice_distance(z + w, tau)))
    dw = float(min(lattice_distance(w, tau), lattice_distance(z + w, tau)))
    dt = float(tau_pole_distance([z, w, z + w], tau))
    d_tau = holomorphic_derivative(lambda t: F(z, w, t), tau, 1, prec, sing_dist=dt)

    def dwF(zs):
        return holomorphic_derivative(lambda ws: F(zs[..., None], ws, tau), np.full(np.shape(zs), w),
                                      1, prec, sing_dist=0.5 * dw)

    d_zw = holomorphic_derivative(dwF, z, 1, prec, sing_dist=0.5 * dz)
    out = TWO_PI_I * d_tau - d_zw
    return (out, d_zw) if return_scale else out


def zagier_F(u, v, tau, prec: Precision = DEFAULT_PRECISION, margin: float = 0.05, terms=None):
    """Zagier's two-sided series F(u, v; tau), only on the region where both tails decay.

    Term ratios are |q e^u| and |q e^{-v}|; both must be at most 1 - margin.
    Terms are written with q^n in the numerator to avoid overflow.
    """
    tau = complex(as_tau(tau))
    q = np.exp(TWO_PI_I * tau)
    eu, ev = np.exp(u), np.exp(v)
    r1 = abs(q * eu)
    r2 = abs(q / ev)
    if r1 > 1 - margin or r2 > 1 - margin:
        raise DomainError(f"(u, v) outside the series domain of Zagier's F (ratios {r1:.3g}, {r2:.3g})")
    if terms is None:
        worst = max(r1, r2, abs(q))
        terms = int(math.ceil(math.log(prec.q_tail_eps / 10) / math.log(worst))) + 2
    n = np.arange(terms)
    qn = q ** n
    s1 = np.sum(np.exp(-n * v) * qn / (eu - qn))
    s2 = np.sum(np.exp(n * u) * ev * qn / (1 - qn * ev))
    out = complex(s1 - s2)
    if not np.isfinite(out):
        raise PoleError("Zagier series hit a pole")
    return out


def _exp_weight(z, tau):
    """A = 2 pi i (conj z - z)/(tau - conj tau)."""
    return TWO_PI_I * (np.conj(z) - z) / (tau - np.conj(tau))


def eisenstein_kronecker_all(z, tau, K: int, prec: Precision = DEFAULT_PRECISION):
    """[e_1, ..., e_K] at (z, tau) via the w-expansion of J times exp(-A w)."""
    c = laurent_coefficients(z, tau, K, prec)  # c_-1..c_K on the last axis
    A = _exp_weight(np.asarray(z, dtype=complex), np.asarray(tau, dtype=complex))
    out = []
    for k in range(1, K + 1):
        # coefficient of w^(k-1) in (c_-1/w + sum c_i w^i) * sum (-A w)^j/j!
        s = 0
        for jj in range(0, k + 1):
            i = k - 1 - jj
            s = s + c[..., i + 1] * (-A) ** jj / math.factorial(jj)
        out.append((-1) ** (k - 1) * s)
    return np.stack(out, axis=-1)


def eisenstein_kronecker_e(k: int, z, tau, prec: Precision = DEFAULT_PRECISION):
    if k < 1:
        raise DomainError("e_k needs k >= 1")
    tau = as_tau(tau)
    if np.any(lattice_distance(z, tau) < 1e-9):
        raise PoleError("z lies on the period lattice")
    v = eisenstein_kronecker_all(z, tau, k, prec)[..., k - 1]
    return complex(v) if np.ndim(v) == 0 else v


def e1_closed_form(z, tau, prec: Precision = DEFAULT_PRECISION):
    """e_1 = zeta + eta(1) z - A, with the log-derivative of theta for zeta + eta(1) z."""
    from .theta import theta_logderivative
    return theta_logderivative(z, tau, prec) - _exp_weight(np.asarray(z), np.asarray(tau))


def e_k_character_sum(k: int, alpha: float, beta: float, tau, prec: Precision = DEFAULT_PRECISION):
    """sum' exp(2 pi i (beta m - alpha n)) (m tau + n)^(-k) for z = alpha tau + beta, k >= 3.

    Only for rational alpha, beta with common denominator <= 12 (split into
    sublattice sums).
    """
    from fractions import Fraction
    from .numeric import lattice_sum
    fa, fb = Fraction(alpha).limit_denominator(12), Fraction(beta).limit_denominator(12)
    L = math.lcm(fa.denominator, fb.denominator)
    total = 0j
    for x in range(L):
        for y in range(L):
            chi = np.exp(TWO_PI_I * (float(fb) * x - float(fa) * y))
            # sum over (m, n) = (x, y) + L (m', n'):  L^{-k} sum (x/L tau + y/L + m' tau + n')^{-k}
            total += chi * L ** (-k) * lattice_sum(k, (x / L, y / L), tau, prec)
    return total


def _residue_radius(tau, prec):
    return prec.deriv_radius_frac * float(shortest_vector(tau))


def jacobi_residue(w, m: int, n: int, tau, prec: Precision = DEFAULT_PRECISION) -> complex:
    """Contour residue of z -> J(z, w, tau) at z = m tau + n."""
    tau = complex(as_tau(tau))
    if lattice_distance(w, tau) < 1e-9:
        raise PoleError("w lies on the period lattice")
    r = min(_residue_radius(tau, prec), 0.5 * float(lattice_distance(w, tau)))
    f = lambda zn: jacobi_J(zn, w, tau, prec, check=False)
    return complex(circle_coefficients(f, m * tau + n, r, -1, -1, prec.quad_points)[0])


def r_residues(K: int, m: int, n: int, tau, prec: Precision = DEFAULT_PRECISION) -> np.ndarray:
    """Contour residues of z -> r_k(z, tau) at z = m tau + n for k = 0..K."""
    tau = complex(as_tau(tau))
    r = _residue_radius(tau, prec)
    f = lambda zn: np.moveaxis(laurent_coefficients(zn, tau, K, prec), -1, 0)[1:]
    return circle_coefficients(f, m * tau + n, r, -1, -1, prec.quad_points)[:, 0]


def r_residue(k: int, m: int, n: int, tau, prec: Precision = DEFAULT_PRECISION) -> complex:
    return complex(r_residues(k, m, n, tau, prec)[k])


def r_residue_expected(k: int, m: int) -> complex:
    return (-1) ** k * (TWO_PI_I * m) ** k / math.factorial(k)
