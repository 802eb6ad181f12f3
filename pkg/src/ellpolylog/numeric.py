"""Complex-analytic kernels: circle quadrature, lattice geometry, lattice sums."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EvaluationError

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class Precision:
    q_tail_eps: float = 1e-14
    quad_points: int = 256
    lattice_radius: int = 64
    deriv_radius_frac: float = 0.25

    def __post_init__(self):
        if not self.q_tail_eps > 0:
            raise DomainError("q_tail_eps must be positive")
        m = self.quad_points
        if m < 16 or m & (m - 1):
            raise DomainError("quad_points must be a power of two and at least 16")
        if self.lattice_radius < 4:
            raise DomainError("lattice_radius must be at least 4")
        if not 0.0 < self.deriv_radius_frac < 1.0:
            raise DomainError("deriv_radius_frac must lie in (0, 1)")


DEFAULT_PRECISION = Precision()


@dataclass(frozen=True)
class UpperHalfPoint:
    tau: complex

    def __post_init__(self):
        if not complex(self.tau).imag > 0:
            raise DomainError(f"tau={self.tau} is not in the upper half plane")

    def __complex__(self):
        return complex(self.tau)


def as_tau(tau) -> complex:
    """Accept an UpperHalfPoint or a complex number and validate Im > 0."""
    if isinstance(tau, UpperHalfPoint):
        return complex(tau.tau)
    t = np.asarray(tau)
    if np.any(np.imag(t) <= 0):
        raise DomainError(f"tau={tau} is not in the upper half plane")
    return tau


@dataclass(frozen=True)
class TruncatedLaurent:
    """Laurent coefficients c_{-pole_order}, ..., c_{trunc_degree} around ``center``."""

    pole_order: int
    coefficients: tuple
    center: complex
    radius_used: float
    trunc_degree: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "trunc_degree", len(self.coefficients) - self.pole_order - 1)
        if self.trunc_degree < 0:
            raise DomainError("coefficient list shorter than the pole order")
        if not self.radius_used > 0:
            raise DomainError("radius_used must be positive")

    def __getitem__(self, k: int) -> complex:
        if k < -self.pole_order or k > self.trunc_degree:
            raise IndexError(k)
        return self.coefficients[k + self.pole_order]

    def as_array(self, start: int = 0) -> np.ndarray:
        return np.asarray(self.coefficients[start + self.pole_order:], dtype=complex)


def _circle(m: int) -> np.ndarray:
    return np.exp(2j * math.pi * np.arange(m) / m)


def circle_coefficients(f, center, radius, kmin: int, kmax: int, m: int) -> np.ndarray:
    """Trapezoid-rule Laurent coefficients c_kmin..c_kmax, stacked on the last axis.

    ``center`` and ``radius`` may be arrays (they broadcast); ``f`` receives an
    array of nodes with a trailing quadrature axis and may return extra leading
    component axes.
    """
    center = np.asarray(center, dtype=complex)
    radius = np.asarray(radius, dtype=float)
    unit = _circle(m)
    nodes = center[..., None] + radius[..., None] * unit
    vals = np.asarray(f(nodes), dtype=complex)
    if not np.all(np.isfinite(vals)):
        bad = np.argwhere(~np.isfinite(vals))[0]
        raise EvaluationError(f"non-finite value on the contour at node index {tuple(bad)}")
    coeffs = np.fft.fft(vals, axis=-1) / m
    ks = np.arange(kmin, kmax + 1)
    out = coeffs[..., ks % m]
    return out / radius[..., None] ** ks


def cauchy_coefficients(f, center: complex, radius: float, pole_order: int,
                        trunc_degree: int, prec: Precision = DEFAULT_PRECISION) -> TruncatedLaurent:
    """Laurent data of ``f`` around ``center`` from the circle of the given radius.

    ``f`` may be vectorised; scalar-only callables are evaluated node by node.
    """
    if not radius > 0:
        raise DomainError("radius must be positive")

    def g(nodes):
        try:
            out = np.asarray(f(nodes), dtype=complex)
            if out.shape == nodes.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.array([complex(f(complex(x))) for x in nodes.ravel()]).reshape(nodes.shape)

    coeffs = circle_coefficients(g, center, radius, -pole_order, trunc_degree, prec.quad_points)
    return TruncatedLaurent(pole_order, tuple(complex(c) for c in coeffs), complex(center), float(radius))


def holomorphic_derivative(f, at, order: int, prec: Precision = DEFAULT_PRECISION,
                           sing_dist=1.0):
    """order-th derivative by a Cauchy integral on a circle of radius frac * sing_dist.

    ``at`` and ``sing_dist`` may be arrays; ``f`` must then accept node arrays with a
    trailing quadrature axis.
    """
    if order < 1:
        raise DomainError("order must be at least 1")
    sing_dist = np.asarray(sing_dist, dtype=float)
    if np.any(sing_dist <= 0):
        raise DomainError("declared singularity distance must be positive")
    # no singularity at all: any radius works, use the unit scale
    r = prec.deriv_radius_frac * np.where(np.isinf(sing_dist), 1.0, sing_dist)
    c = circle_coefficients(f, at, r, order, order, prec.quad_points)[..., 0]
    c = c * math.factorial(order)
    return complex(c) if np.ndim(c) == 0 else c


# ---------------------------------------------------------------- lattice geometry

def reduce_tau(tau):
    """Move tau into the standard fundamental domain.

    Returns (tau0, a, b, c, d) with tau0 = (a tau + b)/(c tau + d); entries are
    float arrays holding exact integers.
    """
    t = np.array(tau, dtype=complex, ndmin=1)
    shape = np.shape(tau)
    t = t.ravel().copy()
    a = np.ones(t.shape)
    b = np.zeros(t.shape)
    c = np.zeros(t.shape)
    d = np.ones(t.shape)
    for _ in range(200):
        k = np.round(t.real)
        t = t - k
        a, b = a - k * c, b - k * d
        flip = np.abs(t) < 1.0 - 1e-14
        if not flip.any():
            break
        tf = t[flip]
        t[flip] = -1.0 / tf
        a[flip], b[flip], c[flip], d[flip] = -c[flip], -d[flip], a[flip].copy(), b[flip].copy()
    else:  # pragma: no cover
        raise EvaluationError("fundamental-domain reduction did not terminate")
    return (t.reshape(shape), a.reshape(shape), b.reshape(shape), c.reshape(shape), d.reshape(shape))


def lattice_distance(p, tau):
    """Distance from p to the nearest point of Z tau + Z (vectorised)."""
    t0, a, b, c, d = reduce_tau(tau)
    j = c * np.asarray(tau) + d
    u = np.asarray(p) / j
    m = np.round(u.imag / t0.imag)
    v = u - m * t0
    v = v - np.round(v.real)
    best = np.full(np.shape(v), np.inf)
    for dm in (-1, 0, 1):
        for dn in (-1, 0, 1):
            best = np.minimum(best, np.abs(v - dm * t0 - dn))
    return best * np.abs(j)


def shortest_vector(tau):
    """Length of the shortest nonzero vector of Z tau + Z."""
    t0, a, b, c, d = reduce_tau(tau)
    return np.minimum(1.0, np.abs(t0)) * np.abs(c * np.asarray(tau) + d)


def tau_pole_distance(points, tau, scale: int = 1, mmax: int = 8):
    """Distance from tau to the nearest tau' where some point lies on (1/scale)(Z tau' + Z).

    Used to pick Cauchy radii for derivatives in tau at fixed z.  The real axis
    also counts as a singular set.
    """
    tau = np.asarray(tau, dtype=complex)
    best = np.array(tau.imag, dtype=float)
    for p in np.atleast_1d(points):
        q = scale * np.asarray(p)
        # m = 0: q itself must be an integer
        best = np.minimum(best, np.where(np.abs(q - np.round(q.real)) < 1e-300, 0.0, np.inf))
        for m in range(1, mmax + 1):
            for sgn in (1, -1):
                mm = sgn * m
                n0 = np.round((q - mm * tau).real)
                for dn in range(-2, 3):
                    cand = np.abs((q - (n0 + dn)) / mm - tau)
                    best = np.minimum(best, cand)
    return best


# ---------------------------------------------------------------- lattice sums

def _shell_sums(k, offset, omega1, omega2, exclude_origin, r_lo, r_hi):
    """Per-shell sums for shells r_lo < max(|m|, |n|) <= r_hi (index 0 is shell r_lo + 1)."""
    idx = np.arange(-r_hi, r_hi + 1)
    m, n = np.meshgrid(idx, idx, indexing="ij")
    shell = np.maximum(np.abs(m), np.abs(n)).ravel()
    keep = shell > r_lo if (r_lo >= 0) else np.ones(shell.shape, bool)
    if exclude_origin:
        keep &= shell > 0
    pts = offset + m.ravel()[keep] * omega1 + n.ravel()[keep] * omega2
    shell = shell[keep] - (r_lo + 1)
    terms = pts ** (-k)
    width = r_hi - r_lo
    return np.bincount(shell, weights=terms.real, minlength=width) \
        + 1j * np.bincount(shell, weights=terms.imag, minlength=width)


def lattice_sum(k: int, offset, tau, prec: Precision = DEFAULT_PRECISION,
                return_error: bool = False):
    """Sum over (m, n) of (x tau + y + m tau + n)^(-k) for k >= 3.

    Square shells are taken in a reduced basis of the lattice; the radius is
    doubled from lattice_radius/8 and the partial sums are Richardson
    extrapolated in 1/R, whose tail expansion has integer powers starting at k-2.
    """
    if k < 3:
        raise DomainError("lattice_sum needs k >= 3 (conditionally convergent otherwise)")
    x, y = offset
    tau = complex(as_tau(tau))
    exclude = (x % 1 == 0) and (y % 1 == 0)
    t0, a, b, c, d = (complex(v) if i == 0 else float(v) for i, v in enumerate(reduce_tau(tau)))
    j = c * tau + d
    # Z tau + Z = j (Z t0 + Z); work in the reduced lattice and rescale by j^{-k}.
    u = (x * tau + y) / j
    mu = round(u.imag / t0.imag)
    u = u - mu * t0
    u = u - round(u.real)
    if exclude:
        u = 0j
    r0 = max(4, prec.lattice_radius // 8)
    rmax = prec.lattice_radius * 8
    table = []
    best, err = None, math.inf
    running, r_prev, r, level = 0j, -1, r0, 0
    while r <= rmax:
        # shells are summed in increasing order so the reduction order is fixed
        running = running + np.sum(_shell_sums(k, u, t0, 1.0, exclude, r_prev, r))
        row = [running]
        for i in range(1, level + 1):
            p = k - 2 + (i - 1)
            row.append(row[i - 1] + (row[i - 1] - table[level - 1][i - 1]) / (2.0 ** p - 1.0))
        table.append(row)
        if level >= 1:
            e = abs(row[-1] - table[level - 1][-1])
            if e < err:
                best, err = row[-1], e
            if e < prec.q_tail_eps * max(1.0, abs(row[-1])):
                break
        r_prev, r, level = r, 2 * r, level + 1
    val = complex(best) * j ** (-k)
    err = err * abs(j) ** (-k)
    return (val, err) if return_error else val
