"""Level-N Eisenstein series E^(k), the forms F^(k), their D-variant, and the e_k bridge."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .jacobi import eisenstein_kronecker_e
from .numeric import DEFAULT_PRECISION, TWO_PI_I, Precision, as_tau, lattice_sum
from .theta import wp


@dataclass(frozen=True)
class ModularValue:
    value: complex
    weight: int
    level: int
    torsion: tuple
    route: str

    def __complex__(self):
        return complex(self.value)


@lru_cache(maxsize=None)
def root_of_unity(N: int) -> complex:
    return cmath.exp(TWO_PI_I / N)


def _check_torsion(a, b, N):
    if a % N == 0 and b % N == 0:
        raise DomainError(f"(a, b) = ({a}, {b}) is divisible by N = {N}")


@lru_cache(maxsize=4096)
def _eisenstein_E_cached(k, x, y, N, tau, prec):
    if k == 2:
        if x == 0 and y == 0:
            return 0j
        return complex(wp((x * tau + y) / N, tau, prec)) / TWO_PI_I ** 2
    pref = (-1) ** k * math.factorial(k - 1) * TWO_PI_I ** (-k)
    return pref * lattice_sum(k, (x / N, y / N), tau, prec)


def eisenstein_E(k: int, x: int, y: int, N: int, tau, prec: Precision = DEFAULT_PRECISION) -> complex:
    """E^(k)_{x/N, y/N}(tau) with representatives in [0, N); tilde version for k = 2."""
    if k == 1:
        raise DomainError("weight 1 has no lattice route; use modular_F(1, ...) (Kronecker route)")
    if k < 1:
        raise DomainError("weight must be positive")
    tau = complex(as_tau(tau))
    return _eisenstein_E_cached(k, x % N, y % N, N, tau, prec)


def modular_F(k: int, a: int, b: int, N: int, tau, prec: Precision = DEFAULT_PRECISION) -> ModularValue:
    """F^(k)_{a/N, b/N}(tau) as the character sum of E^(k) (k >= 2) or through e_1 (k = 1)."""
    _check_torsion(a, b, N)
    tau = complex(as_tau(tau))
    if k == 1:
        e1 = eisenstein_kronecker_e(1, (a * tau + b) / N, tau, prec)
        return ModularValue(-e1 / TWO_PI_I, 1, N, (a % N, b % N), "kronecker")
    zeta = root_of_unity(N)
    total = 0j
    for x in range(N):
        for y in range(N):
            total += zeta ** ((x * b - y * a) % N) * eisenstein_E(k, x, y, N, tau, prec)
    return ModularValue(total * N ** (-k), k, N, (a % N, b % N), "wp" if k == 2 else "lattice")


def modular_DF(k: int, a: int, b: int, N: int, D: int, tau, prec: Precision = DEFAULT_PRECISION) -> ModularValue:
    """D^2 F^(k)_{a/N,b/N} - D^(2-k) F^(k)_{Da/N,Db/N}."""
    if math.gcd(D, N) != 1:
        raise DomainError(f"D = {D} is not coprime to N = {N}")
    f1 = modular_F(k, a, b, N, tau, prec)
    f2 = modular_F(k, D * a, D * b, N, tau, prec)
    val = D ** 2 * f1.value - float(D) ** (2 - k) * f2.value
    return ModularValue(val, k, N, f1.torsion, f1.route)


def bridge_factor(k: int) -> complex:
    """e_k(a tau/N + b/N) = bridge_factor(k) * F^(k)_{a/N, b/N}."""
    return (-1) ** k * TWO_PI_I ** k / math.factorial(k - 1)


def e_k_from_F(k: int, a: int, b: int, N: int, tau, prec: Precision = DEFAULT_PRECISION) -> complex:
    return bridge_factor(k) * modular_F(k, a, b, N, tau, prec).value


def character_sum_vanishes(a: int, b: int, N: int) -> complex:
    """sum over (x, y) of zeta_N^(xb - ya); zero unless (a, b) = (0, 0) mod N."""
    zeta = root_of_unity(N)
    return sum(zeta ** ((x * b - y * a) % N) for x in range(N) for y in range(N))


def clear_caches():
    _eisenstein_E_cached.cache_clear()


def F_vector(k: int, a: int, b: int, N: int, taus, prec: Precision = DEFAULT_PRECISION) -> np.ndarray:
    return np.array([modular_F(k, a, b, N, t, prec).value for t in taus])
