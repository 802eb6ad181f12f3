"""Elementary theta, Weierstrass functions, quasi-periods, Dedekind eta and theta_11.

Every evaluator first moves tau into the standard fundamental domain, where
|q| <= exp(-pi sqrt 3) and the q-products converge after a handful of factors,
and then lattice-reduces z.  All functions broadcast over z and tau.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, PoleError
from .level import DeckElement, check_sl2z
from .numeric import (DEFAULT_PRECISION, TWO_PI_I, Precision, as_tau,
                      holomorphic_derivative, lattice_distance, reduce_tau)

PI = math.pi


def _n_terms(q_abs_max: float, eps: float, extra: float = 0.5) -> int:
    # |q|^(n - extra) < eps
    q_abs_max = max(q_abs_max, 1e-300)
    return max(2, int(math.ceil(math.log(eps) / math.log(q_abs_max) + extra)) + 1)


def _log_theta_reduced(z0, t0, eps):
    """log of the product formula; assumes |Im z0| <= Im t0 / 2 (roughly).

    The factors stay close to 1 at a reduced point, so one log of the product
    suffices.  The tau-only factor is computed on the (usually smaller) shape of t0.
    """
    q = np.exp(TWO_PI_I * t0)
    h = np.exp(PI * 1j * z0)
    qz = h * h
    nt = _n_terms(float(np.max(np.abs(q))), eps)
    ssum = qz + 1 / qz
    num = (h - 1 / h) / TWO_PI_I
    den = np.ones_like(q)
    qn = np.ones_like(q)
    for _ in range(nt):
        qn = qn * q
        # (1 - q^n qz)(1 - q^n/qz) = 1 + q^2n - q^n (qz + 1/qz)
        num = num * (1 + qn * qn - qn * ssum)
        den = den * (1 - qn)
    with np.errstate(divide="ignore"):  # log 0 = -inf on the lattice, exp gives 0
        return np.log(num / (den * den))


def _logder_reduced(z0, t0, eps):
    q = np.exp(TWO_PI_I * t0)
    qz = np.exp(TWO_PI_I * z0)
    nt = _n_terms(float(np.max(np.abs(q))), eps)
    out = PI / np.tan(PI * z0)
    qn = np.ones_like(q)
    for _ in range(nt):
        qn = qn * q
        out = out + TWO_PI_I * (-qn * qz / (1 - qn * qz) + (qn / qz) / (1 - qn / qz))
    return out


def _split(z, tau):
    """Reduce (z, tau) to (z0, t0) and return the bookkeeping for both laws.

    tau is reduced on its own shape; z-dependent arrays broadcast against it.
    """
    z = np.asarray(z, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    t0, a, b, c, d = reduce_tau(tau)
    j = c * tau + d
    u = z / j
    m = np.round(u.imag / t0.imag)
    u1 = u - m * t0
    n = np.round(u1.real)
    z0 = u1 - n
    return z, tau, t0, c, j, m, n, z0


def log_theta(z, tau, prec: Precision = DEFAULT_PRECISION):
    """A branch of log theta(z, tau); only its exponential is meaningful."""
    z, tau, t0, c, j, m, n, z0 = _split(z, tau)
    # theta(u, t0) at u = z0 + m t0 + n: quasi-periodicity with gamma = I
    lu = PI * 1j * (m + n) - TWO_PI_I * m * z0 - PI * 1j * m * m * t0 + _log_theta_reduced(z0, t0, prec.q_tail_eps)
    # theta(z, tau) = j exp(-pi i c z^2 / j) theta(z / j, t0)
    out = np.log(j) - PI * 1j * c * z * z / j + lu
    return out[()] if out.ndim == 0 else out


def theta_elementary(z, tau, prec: Precision = DEFAULT_PRECISION):
    """The elementary theta function: odd, entire, theta'(0) = 1."""
    as_tau(tau)
    out = np.exp(log_theta(z, tau, prec))
    z0 = np.broadcast_to(np.asarray(z), np.shape(out))
    # exact zeros on the lattice
    out = np.where(lattice_distance(z0, np.broadcast_to(np.asarray(tau), np.shape(out))) == 0, 0, out)
    return complex(out) if np.ndim(out) == 0 else out


def theta_product_unreduced(z, tau, prec: Precision = DEFAULT_PRECISION):
    """Plain product formula without any reduction (independent cross-check)."""
    z = np.asarray(z, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    q = np.exp(TWO_PI_I * tau)
    qz = np.exp(TWO_PI_I * z)
    big = float(np.max(np.maximum(np.abs(qz), 1 / np.abs(qz))))
    qa = float(np.max(np.abs(q)))
    nt = _n_terms(qa, prec.q_tail_eps / big, 0.0) + int(math.log(big) / -math.log(qa)) + 1
    out = (np.exp(PI * 1j * z) - np.exp(-PI * 1j * z)) / TWO_PI_I
    qn = np.ones_like(q)
    for _ in range(nt):
        qn = qn * q
        out = out * (1 - qn * qz) * (1 - qn / qz) / (1 - qn) ** 2
    return complex(out) if np.ndim(out) == 0 else out


def theta_logderivative(z, tau, prec: Precision = DEFAULT_PRECISION):
    """theta'/theta, equal to the Laurent coefficient r_0 = zeta + eta(1) z."""
    z, tau, t0, c, j, m, n, z0 = _split(z, tau)
    if np.any(np.abs(z0) < prec.q_tail_eps):
        raise PoleError("z lies on the period lattice")
    lu = -TWO_PI_I * m + _logder_reduced(z0, t0, prec.q_tail_eps)
    out = -TWO_PI_I * c * z / j + lu / j
    return out[()] if out.ndim == 0 else out


def _g2_qseries(t0, eps):
    q = np.exp(TWO_PI_I * np.asarray(t0))
    nt = _n_terms(float(np.max(np.abs(q))), eps, 0.0) + 2
    s = np.zeros_like(q)
    qn = np.ones_like(q)
    for k in range(1, nt + 1):
        qn = qn * q
        sigma = sum(dd for dd in range(1, k + 1) if k % dd == 0)
        s = s + sigma * qn
    return PI ** 2 / 3 - 8 * PI ** 2 * s


def eta_one(tau, prec: Precision = DEFAULT_PRECISION):
    """Quasi-period eta(1, tau) = -G_2(tau).

    Evaluated at the reduced point and transported back with
    eta(1, g tau) = (c tau + d)^2 eta(1, tau) + 2 pi i c (c tau + d).
    """
    as_tau(tau)
    tau = np.asarray(tau, dtype=complex)
    t0, a, b, c, d = reduce_tau(tau)
    j = c * tau + d
    e0 = -_g2_qseries(t0, prec.q_tail_eps)
    out = (e0 - TWO_PI_I * c * j) / j ** 2
    return complex(out) if np.ndim(out) == 0 else out


def eta_one_qseries(tau, prec: Precision = DEFAULT_PRECISION):
    """-G_2 straight from its q-series at tau (no reduction)."""
    return complex(-_g2_qseries(complex(as_tau(tau)), prec.q_tail_eps))


def eta_one_lattice(tau, tol: float = 1e-17, max_terms: int = 100000):
    """-G_2 from pi^2/3 + sum_{m != 0} pi^2/sin^2(pi m tau) (sum over n done in closed form)."""
    tau = complex(as_tau(tau))
    s = PI ** 2 / 3
    for m in range(1, max_terms):
        t = 2 * PI ** 2 / np.sin(PI * m * tau) ** 2
        s += t
        if abs(t) < tol * abs(s):
            break
    return complex(-s)


def eta_one_derivative(tau, prec: Precision = DEFAULT_PRECISION):
    """d/dtau eta(1, tau) by a Cauchy integral."""
    tau = np.asarray(tau, dtype=complex)
    return holomorphic_derivative(lambda t: eta_one(t, prec), tau, 1, prec, sing_dist=tau.imag)


def zeta_weierstrass(z, tau, prec: Precision = DEFAULT_PRECISION):
    return theta_logderivative(z, tau, prec) - eta_one(tau, prec) * np.asarray(z)


def wp(z, tau, prec: Precision = DEFAULT_PRECISION):
    """Weierstrass p as -d/dz zeta via a Cauchy integral."""
    z = np.asarray(z, dtype=complex)
    dist = lattice_distance(z, tau)
    if np.any(dist < prec.q_tail_eps):
        raise PoleError("z lies on the period lattice")
    return -holomorphic_derivative(lambda x: zeta_weierstrass(x, tau, prec), z, 1, prec, sing_dist=dist)


def weierstrass_sigma_zeta_p(z, tau, prec: Precision = DEFAULT_PRECISION):
    """(sigma, zeta, p) at z."""
    as_tau(tau)
    eta = eta_one(tau, prec)
    sigma = np.exp(-np.asarray(z) ** 2 * eta / 2) * theta_elementary(z, tau, prec)
    return complex(sigma), complex(zeta_weierstrass(z, tau, prec)), complex(wp(z, tau, prec))


def eta_lattice(m: int, n: int, tau, prec: Precision = DEFAULT_PRECISION):
    """Quasi-period eta(m tau + n) = m eta(tau) + n eta(1) from the Legendre relation."""
    e1 = eta_one(tau, prec)
    return m * (TWO_PI_I + complex(tau) * e1) + n * e1


def eta_tau(tau, prec: Precision = DEFAULT_PRECISION, base=None):
    """eta(tau, tau) = zeta(z) - zeta(z + tau), from the unreduced product at a base point."""
    tau = complex(as_tau(tau))
    z = 0.5 * 0.37 + 0.21 * tau if base is None else base
    e1 = eta_one(tau, prec)

    def zeta_direct(x):
        f = lambda y: theta_product_unreduced(y, tau, prec)
        d = holomorphic_derivative(f, x, 1, prec, sing_dist=float(lattice_distance(x, tau)))
        return d / f(x) - e1 * x

    return zeta_direct(z) - zeta_direct(z + tau)


def dedekind_eta(tau, prec: Precision = DEFAULT_PRECISION):
    tau = np.asarray(as_tau(tau), dtype=complex)
    q = np.exp(TWO_PI_I * tau)
    nt = _n_terms(float(np.max(np.abs(q))), prec.q_tail_eps, 0.0)
    out = np.exp(TWO_PI_I * tau / 24)
    qn = np.ones_like(q)
    for _ in range(nt):
        qn = qn * q
        out = out * (1 - qn)
    return complex(out) if np.ndim(out) == 0 else out


def theta11(z, tau, prec: Precision = DEFAULT_PRECISION):
    """theta with characteristic [1/2, 1/2], summed directly."""
    tau = complex(as_tau(tau))
    z = np.asarray(z, dtype=complex)
    # |term| ~ exp(-pi Im(tau) (n+1/2)^2 - 2 pi (n+1/2) Im z)
    y = float(np.max(np.abs(z.imag))) + 1.0
    s = tau.imag
    nmax = int(math.ceil((2 * y + math.sqrt(4 * y * y + 4 * s * (-math.log(prec.q_tail_eps) + 60) / PI)) / s)) + 2
    out = np.zeros_like(z)
    for n in range(-nmax, nmax + 1):
        h = n + 0.5
        out = out + np.exp(PI * 1j * h * h * tau + TWO_PI_I * h * (z + 0.5))
    return complex(out) if np.ndim(out) == 0 else out


def theta_transform(z, tau, deck: DeckElement) -> complex:
    """Predicted theta((z + m tau + n)/(c tau + d), g tau) from theta(z, tau).

    Factor (c tau + d)^(-1) exp[pi i c (z + m tau + n)^2/(c tau + d) + pi i m + pi i n
    - 2 pi i m z - pi i m^2 tau].
    """
    check_sl2z(deck.gamma)
    tau = complex(as_tau(tau))
    return complex(theta_transform_factor(z, tau, deck) * theta_elementary(z, tau))


def theta_transform_factor(z, tau, deck: DeckElement):
    m, n = deck.shift
    (a, b), (c, d) = deck.gamma
    j = c * tau + d
    w = z + m * tau + n
    return np.exp(PI * 1j * c * w * w / j + PI * 1j * m + PI * 1j * n - TWO_PI_I * m * z
                  - PI * 1j * m * m * tau) / j


def check_not_pole(z, tau, prec: Precision = DEFAULT_PRECISION, what: str = "z"):
    dist = lattice_distance(z, tau)
    if np.any(dist < max(prec.q_tail_eps, 1e-12)):
        raise PoleError(f"{what} lies on the period lattice (pole divisor {what} in Z tau + Z)")
    return dist


__all__ = [
    "theta_elementary", "theta_transform", "theta_transform_factor", "eta_one", "eta_tau",
    "eta_lattice", "weierstrass_sigma_zeta_p", "zeta_weierstrass", "wp", "dedekind_eta",
    "theta11", "theta_logderivative", "log_theta", "eta_one_derivative", "eta_one_qseries", "eta_one_lattice",
    "theta_product_unreduced", "DomainError",
]
