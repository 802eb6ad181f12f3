"""Kodaira-Spencer normalization, modular forms as cohomology representatives, and the
coefficients of the de Rham Eisenstein classes together with the D-variant relation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .eisenstein import bridge_factor, modular_DF, modular_F
from .errors import ContractError, DomainError
from .level import in_gamma_N, random_gamma_N
from .numeric import DEFAULT_PRECISION, TWO_PI_I, Precision, as_tau
from .sections import (NO_POLES, DVariantContext, SectionEvaluator, build_p, gauss_manin_h1,
                       specialize_torsion)

WEIGHT_CHECK_TOL = 1e-7


def kodaira_spencer(g: Callable, tau) -> complex:
    """omega^2 -> Omega^1: g(tau) goes to the d tau coefficient g(tau)/(2 pi i)."""
    return complex(g(tau)) / TWO_PI_I


def kodaira_spencer_gm_route(g: Callable, tau, prec: Precision = DEFAULT_PRECISION) -> complex:
    """Same map read off the Gauss-Manin connection: pair g with the derivative of the
    horizontal-dual class (0, 1) and keep the omega-component."""
    unit = SectionEvaluator(2, lambda z, t: np.stack(np.broadcast_arrays(
        np.zeros(np.shape(t), complex), np.ones(np.shape(t), complex))), NO_POLES)
    v = gauss_manin_h1(unit, tau, prec)
    return complex(g(tau)) * complex(v[0])


@dataclass(frozen=True)
class CohomologyRepresentative:
    """d tau (x) omega^n representative: ``form`` is the weight n+2 value, ``coefficient``
    = form/(2 pi i) is the scalar on d tau after Kodaira-Spencer."""

    n: int
    N: int
    tau: complex
    form: complex
    coefficient: complex = field(init=False)
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coefficient", complex(self.form) / TWO_PI_I)


def weight_defect(f: Callable, k: int, gamma, tau) -> float:
    """|f(g tau) - (c tau + d)^k f(tau)| relative to the larger side (0 if both vanish)."""
    (a, b), (c, d) = gamma
    j = c * tau + d
    lhs = complex(f((a * tau + b) / j))
    rhs = j ** k * complex(f(tau))
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0 else abs(lhs - rhs) / scale


def check_weight(f: Callable, k: int, N: int, tau, samples: int = 5, seed: int = 0,
                 max_len: int = 2, tol: float = WEIGHT_CHECK_TOL):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        g = random_gamma_N(N, rng, max_len)
        assert in_gamma_N(g, N)
        e = weight_defect(f, k, g, tau)
        if e > tol:
            raise ContractError(f"weight {k} check failed at gamma = {g}: relative defect {e:.3g}")
        worst = max(worst, e)
    return worst


def form_to_representative(n: int, f: Callable, N: int, tau, check_samples: int = 5,
                           seed: int = 0, prec: Precision = DEFAULT_PRECISION,
                           provenance: dict | None = None) -> CohomologyRepresentative:
    """Weight n+2 form -> representative on the d tau (x) omega^n slot."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    tau = complex(as_tau(tau))
    if check_samples:
        check_weight(f, n + 2, N, tau, check_samples, seed)
    return CohomologyRepresentative(n, N, tau, complex(f(tau)), dict(provenance or {}))


def eisenstein_class_factor(n: int, N: int) -> float:
    """Eis^n = factor * F^(n+2): N^-1 for n = 0, -N^(n-1) (-1)^n/n! otherwise."""
    if n < 0:
        raise DomainError("degree must be non-negative")
    if n == 0:
        return 1.0 / N
    return -float(N) ** (n - 1) * (-1) ** n / math.factorial(n)


def eisenstein_class_coefficient(n: int, a: int, b: int, N: int, tau,
                                 prec: Precision = DEFAULT_PRECISION,
                                 check_samples: int = 0) -> CohomologyRepresentative:
    fac = eisenstein_class_factor(n, N)
    f = lambda t: fac * modular_F(n + 2, a, b, N, t, prec).value
    mv = modular_F(n + 2, a, b, N, tau, prec)
    return form_to_representative(n, f, N, tau, check_samples, prec=prec,
                                  provenance={"weight": mv.weight, "level": N,
                                              "torsion": mv.torsion, "route": mv.route})


def dvariant_class_lhs(n: int, a: int, b: int, N: int, D: int, tau,
                       prec: Precision = DEFAULT_PRECISION) -> complex:
    """-DF^(2) for n = 0, ((-1)^n/n!) DF^(n+2) otherwise."""
    DF = modular_DF(n + 2, a, b, N, D, tau, prec).value
    return -DF if n == 0 else (-1) ** n / math.factorial(n) * DF


def dvariant_class_rhs(n: int, a: int, b: int, N: int, D: int, tau,
                       prec: Precision = DEFAULT_PRECISION) -> complex:
    """-N^(1-n) (D^2 Eis^n(t_{a,b}) - D^(-n) Eis^n(t_{Da,Db}))."""
    e1 = eisenstein_class_coefficient(n, a, b, N, tau, prec).form
    e2 = eisenstein_class_coefficient(n, D * a, D * b, N, tau, prec).form
    return -float(N) ** (1 - n) * (D * D * e1 - float(D) ** (-n) * e2)


def specialization_form(n: int, ctx: DVariantContext, tau, prec: Precision = DEFAULT_PRECISION) -> complex:
    """2 pi i times slot n of the specialization of p_n^D (the weight n+2 form it carries)."""
    v = specialize_torsion(n, ctx, build_p(n, ctx, prec), tau, prec)
    return TWO_PI_I * complex(v[n])


def eisenstein_class_from_specialization(n: int, a: int, b: int, N: int, D: int, tau,
                                         prec: Precision = DEFAULT_PRECISION) -> complex:
    """Eis^n(t_{a,b}) form recovered from the section pipeline, for D = 1 mod N."""
    if D % N != 1:
        raise DomainError(f"D = {D} is not 1 mod N = {N}")
    ctx = DVariantContext(D=D, N=N, a=a, b=b, j0=1, n=n)
    slot = specialization_form(n, ctx, tau, prec) / TWO_PI_I
    DF = slot / bridge_factor(n + 1)
    L = -DF if n == 0 else (-1) ** n / math.factorial(n) * DF
    return -float(N) ** (n - 1) * float(D) ** n / (float(D) ** (n + 2) - 1) * L


def sym_component(n: int, k: int, vec) -> complex:
    """Coefficient of e^(n-k) f^k in a degree-n specialization vector."""
    if not 0 <= k <= n:
        raise DomainError("need 0 <= k <= n")
    return complex(vec[k]) / math.factorial(n - k)
