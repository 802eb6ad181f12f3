"""D-variant coefficient functions s^D_k, the sections q_n^D and p_n^D, connections,
the de Rham operator, torsion translation and torsion specialization.

Section evaluators are component-first: ``S(z, tau)`` returns an array of shape
``(length,) + broadcast(z, tau).shape``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractError, DomainError, PoleError
from .jacobi import jacobi_J
from .level import basis_index, basis_position, r_of
from .numeric import (DEFAULT_PRECISION, TWO_PI_I, Precision, circle_coefficients,
                      holomorphic_derivative, lattice_distance, shortest_vector)
from .theta import eta_one, eta_one_derivative

PRINCIPAL_PART_TOL = 1e-9
POLE_EPS = 1e-9


@dataclass(frozen=True)
class DVariantContext:
    D: int
    N: int | None = None
    a: int = 0
    b: int = 0
    j0: int = 1
    n: int = 0

    def __post_init__(self):
        if self.D < 2:
            raise DomainError("D must be an integer > 1")
        if self.n < 0:
            raise DomainError("degree must be non-negative")
        if self.N is not None:
            if self.N < 1:
                raise DomainError("level must be positive")
            if math.gcd(self.D, self.N) != 1:
                raise DomainError(f"D = {self.D} is not coprime to N = {self.N}")

    def require_torsion(self):
        if self.N is None:
            raise DomainError("torsion specialization needs a level N")
        if self.a % self.N == 0 and self.b % self.N == 0:
            raise DomainError(f"(a, b) = ({self.a}, {self.b}) is divisible by N = {self.N}")
        if math.gcd(self.j0, self.N) != 1:
            raise DomainError("j0 must be a unit mod N")

    @property
    def alpha(self) -> float:
        """Translation z -> z + alpha tau + beta used by the torsion specialization."""
        return self.a * self.j0 / self.N

    @property
    def beta(self) -> float:
        return self.b / self.N


@dataclass(frozen=True)
class SingularSet:
    """Poles at the z with scale * (z + alpha tau + beta) in Z tau + Z; scale 0 means none."""

    scale: int = 1
    alpha: float = 0.0
    beta: float = 0.0

    def z_distance(self, z, tau):
        tau = np.asarray(tau, dtype=complex)
        if self.scale == 0:
            return np.broadcast_to(np.inf, np.broadcast(np.asarray(z), tau).shape)
        p = np.asarray(z) + self.alpha * tau + self.beta
        return lattice_distance(self.scale * p, tau) / self.scale

    def tau_distance(self, z, tau, mmax: int = 8):
        """Distance from tau to the nearest tau' that puts z on the singular set."""
        tau = np.asarray(tau, dtype=complex)
        s = self.scale
        if s == 0:
            return np.broadcast_to(tau.imag, np.broadcast(np.asarray(z), tau).shape)
        q = s * (np.asarray(z) + self.beta)
        sa = s * self.alpha
        best = np.array(tau.imag, dtype=float)
        for m in range(-mmax, mmax + 1):
            den = m - sa
            if abs(den) < 1e-12:
                hit = np.abs(q - np.round(q.real)) < 1e-300
                best = np.minimum(best, np.where(hit, 0.0, np.inf))
                continue
            n0 = np.round((q - den * tau).real)
            for dn in range(-2, 3):
                best = np.minimum(best, np.abs((q - (n0 + dn)) / den - tau))
        return best

    def shifted(self, alpha: float, beta: float) -> "SingularSet":
        return SingularSet(self.scale, self.alpha + alpha, self.beta + beta)


@dataclass(frozen=True)
class SectionEvaluator:
    length: int
    fn: Callable = field(repr=False)
    singular: SingularSet = SingularSet()
    label: str = ""

    def __call__(self, z, tau):
        out = np.asarray(self.fn(z, tau), dtype=complex)
        shape = np.broadcast(np.asarray(z), np.asarray(tau)).shape
        if out.shape != (self.length,) + shape:
            raise ContractError(f"{self.label or 'section'} returned shape {out.shape}, "
                                f"expected {(self.length,) + shape}")
        return out

    def d_z(self, z, tau, prec: Precision = DEFAULT_PRECISION):
        dist = self.singular.z_distance(z, tau)
        _check_dist(dist, "z")
        t = np.asarray(tau)[..., None]
        return holomorphic_derivative(lambda zn: self(zn, t), z, 1, prec, sing_dist=dist)

    def d_tau(self, z, tau, prec: Precision = DEFAULT_PRECISION):
        dist = self.singular.tau_distance(z, tau)
        _check_dist(dist, "tau")
        zz = np.asarray(z)[..., None]
        return holomorphic_derivative(lambda tn: self(zz, tn), tau, 1, prec, sing_dist=dist)


def _check_dist(dist, what):
    if np.any(np.asarray(dist) < POLE_EPS):
        raise PoleError(f"evaluation point is on the singular set (no {what}-radius available)")


# ---------------------------------------------------------------- s^D_k

def _w_radius(z, tau, D, frac):
    sv = shortest_vector(tau)
    d = np.minimum(np.minimum(sv, lattice_distance(z, tau)),
                   D * np.minimum(sv, lattice_distance(D * np.asarray(z), tau)))
    return frac * d


def s_coefficients(K: int, D: int, z, tau, prec: Precision = DEFAULT_PRECISION):
    """Array (s^D_0, ..., s^D_K) at (z, tau), component axis first.

    Taylor coefficients in w of D^2 J(z, -w) - D J(Dz, -w/D); the simple poles
    at w = 0 cancel, which is asserted.
    """
    if K < 0:
        raise DomainError("K must be non-negative")
    z = np.asarray(z, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    z, tau = np.broadcast_arrays(z, tau)
    dist = lattice_distance(D * z, tau) / D
    if np.any(dist < POLE_EPS):
        raise PoleError(f"z lies on the D-torsion (1/{D}) Z tau + Z")
    r = _w_radius(z, tau, D, prec.deriv_radius_frac)
    zz, tt = z[..., None], tau[..., None]

    def g(wn):
        return (D * D * jacobi_J(zz, -wn, tt, prec, check=False)
                - D * jacobi_J(D * zz, -wn / D, tt, prec, check=False))

    c = circle_coefficients(g, np.zeros(z.shape), r, -1, K, prec.quad_points)
    lead = np.max(np.abs(c[..., 0]))
    if lead > PRINCIPAL_PART_TOL:
        raise ContractError(f"principal parts do not cancel: |c_-1| = {lead:.3g}")
    return np.moveaxis(c[..., 1:], -1, 0)


def s_D(k: int, ctx: DVariantContext, z, tau, prec: Precision = DEFAULT_PRECISION):
    v = s_coefficients(k, ctx.D, z, tau, prec)[k]
    return complex(v) if np.ndim(v) == 0 else v


def s_evaluator(K: int, D: int, prec: Precision = DEFAULT_PRECISION) -> SectionEvaluator:
    return SectionEvaluator(K + 1, lambda z, t: s_coefficients(K, D, z, t, prec),
                            SingularSet(D), f"s^{D}_0..{K}")


def s_D_residues(K: int, ctx: DVariantContext, z0, tau, prec: Precision = DEFAULT_PRECISION):
    """Contour residues of z -> s^D_k(z, tau), k = 0..K, at a point z0 of (1/D) Z tau + Z."""
    D = ctx.D
    r = prec.deriv_radius_frac * float(shortest_vector(tau)) / D
    f = lambda zn: s_coefficients(K, D, zn, tau, prec)
    return circle_coefficients(f, z0, r, -1, -1, prec.quad_points)[:, 0]


def s_D_residue(k: int, ctx: DVariantContext, z0, tau, prec: Precision = DEFAULT_PRECISION) -> complex:
    return complex(s_D_residues(k, ctx, z0, tau, prec)[k])


def s_D_residue_expected(k: int, D: int, m: int, n: int) -> complex:
    """Residue at z0 = (m tau + n)/D: (D^2 - 1)(2 pi i m/D)^k/k! on the lattice, else -(2 pi i m/D)^k/k!."""
    if m % D == 0 and n % D == 0:
        return (D * D - 1) * (TWO_PI_I * (m // D)) ** k / math.factorial(k)
    return -(TWO_PI_I * m / D) ** k / math.factorial(k)


def heat_chain_defects(K: int, ctx: DVariantContext, z, tau, prec: Precision = DEFAULT_PRECISION,
                       shift: int = 1):
    """(defect_k, d_z s_{k+shift}) for k = 0..K, defect_k = d_tau s_k + ((k+1)/2 pi i) d_z s_{k+shift}.

    ``shift = 0`` is the mismatched control.
    """
    S = s_evaluator(K + 1, ctx.D, prec)
    dt = S.d_tau(z, tau, prec)
    dz = S.d_z(z, tau, prec)
    ks = np.arange(K + 1).reshape((-1,) + (1,) * np.ndim(dt[0]))
    rhs = dz[shift:shift + K + 1]
    return dt[:K + 1] + (ks + 1) / TWO_PI_I * rhs, rhs


def heat_chain_defect(k: int, ctx: DVariantContext, z, tau, prec: Precision = DEFAULT_PRECISION) -> complex:
    d, _ = heat_chain_defects(k, ctx, z, tau, prec)
    return complex(d[k])


# ---------------------------------------------------------------- q_n^D and p_n^D

def build_q(n: int, ctx: DVariantContext, prec: Precision = DEFAULT_PRECISION) -> SectionEvaluator:
    if n < 0:
        raise DomainError("degree must be non-negative")
    L = r_of(n)

    def fn(z, tau):
        s = s_coefficients(n, ctx.D, z, tau, prec)
        out = np.zeros((L,) + s.shape[1:], dtype=complex)
        out[:n + 1] = s  # slots (k, 0) come first in the basis order
        return out

    return SectionEvaluator(L, fn, SingularSet(ctx.D), f"q_{n}^{ctx.D}")


def build_p(n: int, ctx: DVariantContext, prec: Precision = DEFAULT_PRECISION) -> SectionEvaluator:
    if n < 0:
        raise DomainError("degree must be non-negative")
    L = r_of(n)
    ks = np.arange(1, n + 2)

    def fn(z, tau):
        s = s_coefficients(n + 1, ctx.D, z, tau, prec)
        out = np.zeros((2 * L,) + s.shape[1:], dtype=complex)
        out[:n + 1] = s[:n + 1]
        w = (-ks / TWO_PI_I).reshape((-1,) + (1,) * (s.ndim - 1))
        out[L:L + n + 1] = w * s[1:]
        return out

    return SectionEvaluator(2 * L, fn, SingularSet(ctx.D), f"p_{n}^{ctx.D}")


def transition(n: int, vec):
    """Degree n -> n-1: keep the coefficients with i + j <= n - 1 (component axis first)."""
    if n < 1:
        raise DomainError("no transition below degree 0")
    vec = np.asarray(vec)
    pos = basis_position(n)
    return vec[[pos[ij] for ij in basis_index(n - 1)]]


def restrict_relative(n: int, vec):
    """Absolute 1-form section -> relative one: the dz half."""
    vec = np.asarray(vec)
    L = r_of(n)
    if vec.shape[0] != 2 * L:
        raise ContractError(f"expected length {2 * L}, got {vec.shape[0]}")
    return vec[:L]


# ---------------------------------------------------------------- connections

def _shift_table(n):
    idx = basis_index(n)
    pos = basis_position(n)
    return idx, (lambda i, j: pos.get((i, j)))


def _relative_terms(n, l, eta):
    """eta l_{i-1,j} + l_{i,j-1} per slot (component axis first)."""
    idx, at = _shift_table(n)
    out = np.zeros_like(l)
    for s, (i, j) in enumerate(idx):
        p1, p2 = at(i - 1, j), at(i, j - 1)
        if p1 is not None:
            out[s] += eta * l[p1]
        if p2 is not None:
            out[s] += l[p2]
    return out


def _tau_terms(n, l, eta, deta):
    """The non-derivative part of the d tau component of the absolute connection."""
    idx, at = _shift_table(n)
    out = np.zeros_like(l)
    for s, (i, j) in enumerate(idx):
        out[s] += (j - i) * eta / TWO_PI_I * l[s]
        p1, p2 = at(i + 1, j - 1), at(i - 1, j + 1)
        if p1 is not None:
            out[s] -= (i + 1) / TWO_PI_I * l[p1]
        if p2 is not None:
            out[s] += (j + 1) * (eta * eta / TWO_PI_I - deta) * l[p2]
    return out


def _need_length(S, L):
    if S.length != L:
        raise ContractError(f"section of length {S.length} where {L} is required")


def apply_connection(n: int, which: str, S: SectionEvaluator, z, tau,
                     prec: Precision = DEFAULT_PRECISION):
    """Relative (length r(n)), absolute (dz half then d tau half) or Gauss-Manin (length 2)."""
    tau_c = np.asarray(tau, dtype=complex)
    eta = eta_one(tau_c, prec)
    if which == "relative":
        _need_length(S, r_of(n))
        l = S(z, tau)
        return S.d_z(z, tau, prec) + _relative_terms(n, l, eta)
    if which == "absolute":
        _need_length(S, r_of(n))
        l = S(z, tau)
        deta = eta_one_derivative(tau_c, prec)
        rel = S.d_z(z, tau, prec) + _relative_terms(n, l, eta)
        ab = S.d_tau(z, tau, prec) + _tau_terms(n, l, eta, deta)
        return np.concatenate([rel, ab])
    if which == "gauss-manin":
        _need_length(S, 2)
        chi, xi = S(z, tau)
        deta = eta_one_derivative(tau_c, prec)
        dchi, dxi = S.d_tau(z, tau, prec)
        return np.stack([dchi - eta * chi / TWO_PI_I + eta * eta * xi / TWO_PI_I - deta * xi,
                         dxi - chi / TWO_PI_I + eta * xi / TWO_PI_I])
    raise DomainError(f"unknown connection {which!r}")


NO_POLES = SingularSet(0)


def gauss_manin_h1(S: SectionEvaluator, tau, prec: Precision = DEFAULT_PRECISION, z=0j):
    """Gauss-Manin connection on H^1_dR data (chi, xi) in the basis dual to the one above."""
    _need_length(S, 2)
    tau_c = np.asarray(tau, dtype=complex)
    eta = eta_one(tau_c, prec)
    deta = eta_one_derivative(tau_c, prec)
    chi, xi = S(z, tau)
    dchi, dxi = S.d_tau(z, tau, prec)
    return np.stack([dchi + eta * chi / TWO_PI_I + xi / TWO_PI_I,
                     dxi + deta * chi - eta * eta * chi / TWO_PI_I - eta * xi / TWO_PI_I])


def apply_deRham1(n: int, S: SectionEvaluator, z, tau, prec: Precision = DEFAULT_PRECISION):
    """dz ^ d tau coefficient of the de Rham differential of S = (l dz, lambda d tau)."""
    L = r_of(n)
    _need_length(S, 2 * L)
    tau_c = np.asarray(tau, dtype=complex)
    eta = eta_one(tau_c, prec)
    deta = eta_one_derivative(tau_c, prec)
    v = S(z, tau)
    dz = S.d_z(z, tau, prec)
    dt = S.d_tau(z, tau, prec)
    l, lam = v[:L], v[L:]
    conn_z = dz[L:] + _relative_terms(n, lam, eta)
    conn_t = dt[:L] + _tau_terms(n, l, eta, deta)
    return conn_z - conn_t


# ---------------------------------------------------------------- torsion

def _hat(n, vec, alpha):
    """l^_{i,j} = sum_k (-2 pi i alpha)^(i-k)/(i-k)! l_{k,j}, per block of length r(n)."""
    pos = basis_position(n)
    L = r_of(n)
    out = np.zeros_like(vec)
    for blk in range(vec.shape[0] // L):
        o = blk * L
        for (i, j), s in pos.items():
            acc = 0
            for k in range(i + 1):
                acc = acc + (-TWO_PI_I * alpha) ** (i - k) / math.factorial(i - k) * vec[o + pos[(k, j)]]
            out[o + s] = acc
    return out


def torsion_translate(n: int, ctx: DVariantContext, S: SectionEvaluator) -> SectionEvaluator:
    L = r_of(n)
    if S.length not in (L, 2 * L):
        raise ContractError(f"section of length {S.length} is not of degree {n}")
    if ctx.N is None:
        raise DomainError("torsion translation needs a level N")
    al, be = ctx.alpha, ctx.beta

    def fn(z, tau):
        t = np.asarray(tau, dtype=complex)
        return _hat(n, S(np.asarray(z) + al * t + be, tau), al)

    return SectionEvaluator(S.length, fn, S.singular.shifted(al, be), f"hat({S.label})")


def specialize_torsion(n: int, ctx: DVariantContext, S: SectionEvaluator, tau,
                       prec: Precision = DEFAULT_PRECISION):
    """(a j0/N) l^(0, tau) + lambda^(0, tau) for S = (l, lambda)."""
    ctx.require_torsion()
    L = r_of(n)
    _need_length(S, 2 * L)
    T = torsion_translate(n, ctx, S)
    _check_dist(T.singular.z_distance(0j, tau), "z")
    v = T(0j, tau)
    return ctx.alpha * v[:L] + v[L:]


def specialization_expected(n: int, ctx: DVariantContext, tau, prec: Precision = DEFAULT_PRECISION):
    """Closed form of the specialization of p_n^D in terms of the D-variant forms."""
    from .eisenstein import bridge_factor, modular_DF
    ctx.require_torsion()
    out = np.zeros(r_of(n), dtype=complex)
    for k in range(1, n + 2):
        F = modular_DF(k + 1, ctx.a * ctx.j0, ctx.b, ctx.N, ctx.D, tau, prec).value
        out[k - 1] = bridge_factor(k) * F
    return out
