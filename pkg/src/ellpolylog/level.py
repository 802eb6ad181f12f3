"""Deck group Z^2 x| Gamma(N), Poincare factor, Taylor coefficients a_r, automorphy matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContractError, DomainError

TWO_PI_I = 2j * math.pi


def check_sl2z(gamma) -> tuple:
    (a, b), (c, d) = gamma
    for v in (a, b, c, d):
        if int(v) != v:
            raise DomainError(f"matrix {gamma} has non-integer entries")
    a, b, c, d = (int(v) for v in (a, b, c, d))
    if a * d - b * c != 1:
        raise DomainError(f"matrix {gamma} is not in SL2(Z)")
    return (a, b), (c, d)


def in_gamma_N(gamma, N: int) -> bool:
    (a, b), (c, d) = check_sl2z(gamma)
    return (a - 1) % N == 0 and b % N == 0 and c % N == 0 and (d - 1) % N == 0


@dataclass(frozen=True)
class LevelContext:
    N: int
    D: int = 2
    j0: int = 1

    def __post_init__(self):
        if self.N < 3:
            raise DomainError("level N must be at least 3")
        if math.gcd(self.j0, self.N) != 1:
            raise DomainError("j0 must be a unit mod N")
        if self.D < 2 or math.gcd(self.D, self.N) != 1:
            raise DomainError("D must exceed 1 and be coprime to N")


@dataclass(frozen=True)
class TorsionIndex:
    a: int
    b: int
    N: int

    def __post_init__(self):
        if self.a % self.N == 0 and self.b % self.N == 0:
            raise DomainError("(a, b) must not both be divisible by N")


@dataclass(frozen=True)
class DeckElement:
    """((m, n), gamma) acting by (z, tau) -> ((z + m tau + n)/(c tau + d), g tau)."""

    shift: tuple = (0, 0)
    gamma: tuple = ((1, 0), (0, 1))

    def __post_init__(self):
        object.__setattr__(self, "shift", tuple(int(v) for v in self.shift))
        object.__setattr__(self, "gamma", check_sl2z(self.gamma))

    @classmethod
    def identity(cls):
        return cls()

    def compose(self, other: "DeckElement") -> "DeckElement":
        """self o other = ((m', n') + g'^T (m, n), g g')."""
        m, n = self.shift
        m2, n2 = other.shift
        (a, b), (c, d) = self.gamma
        (a2, b2), (c2, d2) = other.gamma
        shift = (m2 + a2 * m + c2 * n, n2 + b2 * m + d2 * n)
        gamma = ((a * a2 + b * c2, a * b2 + b * d2), (c * a2 + d * c2, c * b2 + d * d2))
        return DeckElement(shift, gamma)

    __matmul__ = compose

    def inverse(self) -> "DeckElement":
        (a, b), (c, d) = self.gamma
        gi = ((d, -b), (-c, a))
        m, n = self.shift
        # need (0,0) = (m', n') + g'^T... solve: other o self = identity
        # shift: (m, n) + g^T (m', n') = 0  ->  (m', n') = -(g^T)^{-1} (m, n)
        mi = -(d * m - c * n)
        ni = -(-b * m + a * n)
        return DeckElement((mi, ni), gi)

    def is_level(self, N: int) -> bool:
        return in_gamma_N(self.gamma, N)


def deck_act(d: DeckElement, z, tau):
    m, n = d.shift
    (a, b), (c, dd) = d.gamma
    j = c * tau + dd
    return (z + m * tau + n) / j, (a * tau + b) / j


def cocycle_parts(d: DeckElement, z, tau):
    """(c tau + d, dm - cz - cn) for the given deck element."""
    m, n = d.shift
    (a, b), (c, dd) = d.gamma
    return c * tau + dd, dd * m - c * z - c * n


def poincare_factor(d_z, d_w, gamma, z, w, tau):
    m, n = d_z
    m2, n2 = d_w
    (a, b), (c, d) = check_sl2z(gamma)
    j = c * tau + d
    return np.exp(-TWO_PI_I * c / j * (z + m * tau + n) * (w + m2 * tau + n2)
                  + TWO_PI_I * m2 * z + TWO_PI_I * m * w + TWO_PI_I * m * m2 * tau)


def a_coefficient(r: int, d: DeckElement, z, tau):
    if r < 0:
        return 0.0
    j, x = cocycle_parts(d, z, tau)
    return (TWO_PI_I * x / j) ** r / math.factorial(r)


def r_of(n: int) -> int:
    return (n + 1) * (n + 2) // 2


@lru_cache(maxsize=None)
def basis_index(n: int) -> tuple:
    """Ordered (i, j) for the basis e^(n-i-j) f^i g^j/(n-i-j)!: j outer, i inner."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    return tuple((i, j) for j in range(n + 1) for i in range(n + 1 - j))


@lru_cache(maxsize=None)
def basis_position(n: int) -> dict:
    return {ij: s for s, ij in enumerate(basis_index(n))}


def automorphy_A1(d: DeckElement, z, tau) -> np.ndarray:
    j, x = cocycle_parts(d, z, tau)
    return np.array([[1, 0, 0], [TWO_PI_I * x, j, 0], [0, 0, 1 / j]], dtype=complex)


def automorphy_An(n: int, d: DeckElement, z, tau) -> np.ndarray:
    j, _ = cocycle_parts(d, z, tau)
    a = [a_coefficient(r, d, z, tau) for r in range(n + 1)]
    idx = basis_index(n)
    pos = basis_position(n)
    out = np.zeros((len(idx), len(idx)), dtype=complex)
    for col, (i, jj) in enumerate(idx):
        for i2 in range(i, n + 1 - jj):
            out[pos[(i2, jj)], col] = a[i2 - i] * j ** (i2 - jj)
    return out


TENSOR_KINDS = ("plain", "relative-1form", "absolute-1form", "absolute-2form")


def form_matrix(kind: str, d: DeckElement, z, tau) -> np.ndarray:
    j, x = cocycle_parts(d, z, tau)
    if kind == "plain":
        return np.eye(1, dtype=complex)
    if kind == "relative-1form":
        return np.array([[j]], dtype=complex)
    if kind == "absolute-1form":
        return np.array([[j, 0], [-x * j, j * j]], dtype=complex)
    if kind == "absolute-2form":
        return np.array([[j ** 3]], dtype=complex)
    raise DomainError(f"unknown automorphy kind {kind!r}")


def automorphy_tensor(n: int, d: DeckElement, z, tau, which: str) -> np.ndarray:
    """Form factor (Kronecker product on the left) tensor A_n."""
    return np.kron(form_matrix(which, d, z, tau), automorphy_An(n, d, z, tau))


def section_transform_defect(n: int, kind: str, S, d: DeckElement, z, tau,
                             normalize: str = "input") -> float:
    """||S(d.(z, tau)) - M(d, z, tau) S(z, tau)||_inf over a scale.

    ``normalize="input"`` divides by 1 + ||S(z, tau)||_inf.  ``"conditioned"``
    divides by 1 + max(||S(d.x)||_inf, || |M| |S(x)| ||_inf), the size of the
    quantities being compared, which is what float64 can resolve when d.x sits
    close to the real axis.
    """
    M = automorphy_tensor(n, d, z, tau, kind)
    v = np.asarray(S(z, tau), dtype=complex)
    if v.shape != (M.shape[0],):
        raise ContractError(f"section of length {v.shape} does not match matrix size {M.shape[0]}")
    z2, t2 = deck_act(d, z, tau)
    v2 = np.asarray(S(z2, t2), dtype=complex)
    err = float(np.max(np.abs(v2 - M @ v)))
    if normalize == "input":
        return err / (1 + float(np.max(np.abs(v))))
    if normalize == "conditioned":
        scale = max(float(np.max(np.abs(v2))), float(np.max(np.abs(M) @ np.abs(v))))
        return err / (1 + scale)
    raise DomainError(f"unknown normalization {normalize!r}")


def random_gamma_N(N: int, rng: np.random.Generator, max_len: int = 6) -> tuple:
    """Word of length <= max_len in I + N E12, I + N E21 and their inverses."""
    gens = [((1, N), (0, 1)), ((1, -N), (0, 1)), ((1, 0), (N, 1)), ((1, 0), (-N, 1))]
    length = int(rng.integers(1, max_len + 1))
    g = ((1, 0), (0, 1))
    for _ in range(length):
        h = gens[int(rng.integers(0, 4))]
        (a, b), (c, d) = g
        (a2, b2), (c2, d2) = h
        g = ((a * a2 + b * c2, a * b2 + b * d2), (c * a2 + d * c2, c * b2 + d * d2))
    return g


def random_deck(N: int, rng: np.random.Generator, max_len: int = 6, shift_bound: int = 2) -> DeckElement:
    shift = tuple(int(v) for v in rng.integers(-shift_bound, shift_bound + 1, size=2))
    return DeckElement(shift, random_gamma_N(N, rng, max_len))
