"""Named verification suites.  Each suite returns a list of Check records; reports are
plain dicts so that the CLI can serialize them without further conversion."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import classes, eisenstein, jacobi, level, sections, theta
from .errors import DomainError
from .numeric import DEFAULT_PRECISION, TWO_PI_I, Precision

TAU_SAMPLES = (2j, 0.4 + 1.3j)


@dataclass(frozen=True)
class SuiteOptions:
    seed: int = 20240611
    samples: int | None = None
    n: int | None = None
    N: int | None = None
    D: int | None = None
    prec: Precision = DEFAULT_PRECISION


@dataclass
class Check:
    name: str
    max_error: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        self.max_error = float(self.max_error)
        self.passed = bool(self.max_error < self.tolerance)


def _rel(a, b, floor: float = 0.0) -> float:
    a, b = np.asarray(a), np.asarray(b)
    den = max(float(np.max(np.abs(b))), floor)
    return float(np.max(np.abs(a - b))) / den if den else float(np.max(np.abs(a - b)))


def _mixed(a, b) -> float:
    """Entrywise |a - b|/max(|b|, 1)."""
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0)))


def _rng(opts, salt: int):
    return np.random.default_rng([opts.seed, salt])


def _random_tau(rng, lo=0.8, hi=2.0):
    return complex(rng.uniform(-0.5, 0.5), rng.uniform(lo, hi))


def _random_z(rng, tau, avoid=1, margin=0.08):
    """Random z in the fundamental parallelogram away from (1/avoid)(Z tau + Z)."""
    from .numeric import lattice_distance
    while True:
        z = rng.uniform(0, 1) + rng.uniform(0, 1) * tau
        if lattice_distance(avoid * z, tau) > margin:
            return complex(z)


def _pick(value, default):
    return default if value is None else value


# ---------------------------------------------------------------- suites

def suite_theta_transform(opts: SuiteOptions):
    rng = _rng(opts, 1)
    mats = _pick(opts.samples, 10)
    worst = 0.0
    for _ in range(mats):
        g = level.random_gamma_N(5, rng)
        for _ in range(20):
            shift = tuple(int(v) for v in rng.integers(-2, 3, size=2))
            d = level.DeckElement(shift, g)
            tau = _random_tau(rng)
            z = complex(rng.uniform(-0.5, 0.5) + rng.uniform(-0.5, 0.5) * tau)
            z2, t2 = level.deck_act(d, z, tau)
            lhs = theta.theta_elementary(z2, t2, opts.prec)
            rhs = theta.theta_transform(z, tau, d)
            worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return [Check("theta covariance under Z^2 x Gamma(5)", worst, 1e-8)]


def suite_legendre(opts: SuiteOptions):
    rng = _rng(opts, 2)
    k = _pick(opts.samples, 20)
    leg, g2, red = 0.0, 0.0, 0.0
    for _ in range(k):
        tau = _random_tau(rng, 0.6, 2.5)
        e1 = theta.eta_one(tau, opts.prec)
        et = theta.eta_tau(tau, opts.prec)
        leg = max(leg, abs(et - tau * e1 - TWO_PI_I) / abs(TWO_PI_I))
        g2 = max(g2, _rel(theta.eta_one_qseries(tau, opts.prec), theta.eta_one_lattice(tau), 1.0))
        red = max(red, _rel(e1, theta.eta_one_lattice(tau), 1.0))
    return [Check("Legendre relation", leg, 1e-10),
            Check("eta(1) q-series vs lattice sum", g2, 1e-8),
            Check("eta(1) reduced vs lattice sum", red, 1e-8)]


def suite_jacobi_cocycle(opts: SuiteOptions):
    rng = _rng(opts, 3)
    k = _pick(opts.samples, 20)
    worst = 0.0
    for _ in range(k):
        g = level.random_gamma_N(4, rng, 3)
        sz = tuple(int(v) for v in rng.integers(-2, 3, size=2))
        sw = tuple(int(v) for v in rng.integers(-2, 3, size=2))
        tau = _random_tau(rng)
        z = _random_z(rng, tau)
        w = _random_z(rng, tau)
        if min(abs(z + w - round((z + w).real)), 1) < 0.05:
            continue
        (a, b), (c, dd) = g
        jj = c * tau + dd
        z2 = (z + sz[0] * tau + sz[1]) / jj
        w2 = (w + sw[0] * tau + sw[1]) / jj
        lhs = jacobi.jacobi_J(z2, w2, (a * tau + b) / jj, opts.prec)
        rhs = jacobi.jacobi_transform_factor(z, w, tau, sz, sw, g) * jacobi.jacobi_J(z, w, tau, opts.prec)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    res_j, res_r = 0.0, 0.0
    for tau in TAU_SAMPLES:
        w = 0.3 + 0.1j
        for m in range(-2, 3):
            for n in range(-2, 3):
                res_j = max(res_j, abs(jacobi.jacobi_residue(w, m, n, tau, opts.prec)
                                       - np.exp(-TWO_PI_I * m * w)))
        for m in range(-2, 3):
            for n in (-1, 0, 1):
                got = jacobi.r_residues(4, m, n, tau, opts.prec)
                want = [jacobi.r_residue_expected(kk, m) for kk in range(5)]
                res_r = max(res_r, float(np.max(np.abs(got - want))))
    return [Check("J transformation law", worst, 1e-8),
            Check("residues of J at m tau + n", res_j, 1e-8),
            Check("residues of r_k at m tau + n", res_r, 1e-7)]


def suite_heat(opts: SuiteOptions):
    rng = _rng(opts, 4)
    k = _pick(opts.samples, 20)
    worst = 0.0
    for _ in range(k):
        tau = _random_tau(rng)
        z = complex(rng.uniform(0.15, 0.4) + rng.uniform(0.0, 0.3) * tau)
        w = complex(rng.uniform(0.15, 0.4) + rng.uniform(0.0, 0.3) * tau)
        d, scale = jacobi.heat_equation_defect(z, w, tau, opts.prec, return_scale=True)
        worst = max(worst, abs(d) / abs(scale))
    out = [Check("mixed heat equation for J", worst, 1e-6)]
    for D in ([opts.D] if opts.D else [2, 3]):
        ctx = sections.DVariantContext(D=D)
        worst = 0.0
        for _ in range(k):
            tau = _random_tau(rng)
            z = _random_z(rng, tau, D)
            dfc, rhs = sections.heat_chain_defects(3, ctx, z, tau, opts.prec)
            worst = max(worst, float(np.max(np.abs(dfc) / np.abs(rhs))))
        out.append(Check(f"s^D heat chain, D={D}, k<=3", worst, 1e-6))
    return out


def suite_residues(opts: SuiteOptions):
    out = []
    for D in ([opts.D] if opts.D else [2, 3]):
        ctx = sections.DVariantContext(D=D)
        worst = 0.0
        for tau in TAU_SAMPLES:
            # 0, tau, tau/D, 1/D, (tau+1)/D as (m tau + n)/D
            for m, n in ((0, 0), (D, 0), (1, 0), (0, 1), (1, 1)):
                z0 = (m * tau + n) / D
                got = sections.s_D_residues(3, ctx, z0, tau, opts.prec)
                want = [sections.s_D_residue_expected(k, D, m, n) for k in range(4)]
                worst = max(worst, float(np.max(np.abs(got - want))))
        out.append(Check(f"residues of s^D_k, D={D}", worst, 1e-7))
    return out


def suite_eisenstein_bridge(opts: SuiteOptions):
    out = []
    for N in ([opts.N] if opts.N else [3, 4, 5]):
        worst = 0.0
        for tau in TAU_SAMPLES:
            for a, b in ((1, 0), (0, 1), (1, 1), (1, 2), (2, 1), (1, N - 1)):
                for k in range(2, 7):
                    lhs = jacobi.eisenstein_kronecker_e(k, (a * tau + b) / N, tau, opts.prec)
                    rhs = eisenstein.e_k_from_F(k, a, b, N, tau, opts.prec)
                    worst = max(worst, _mixed(lhs, rhs))
        out.append(Check(f"e_k vs F^(k), N={N}", worst, 1e-7))
    return out


def _cocycle_err(fn, d1, d2, z, tau):
    z2, t2 = level.deck_act(d2, z, tau)
    lhs = fn(d1 @ d2, z, tau)
    rhs = fn(d1, z2, t2) @ fn(d2, z, tau)
    return _rel(lhs, rhs)


def suite_automorphy_cocycle(opts: SuiteOptions):
    rng = _rng(opts, 7)
    k = _pick(opts.samples, 50)
    N = _pick(opts.N, 4)
    fns = {"A_1": level.automorphy_A1}
    for n in range(1, 4):
        fns[f"A_{n}"] = (lambda n: lambda d, z, t: level.automorphy_An(n, d, z, t))(n)
        for kind in level.TENSOR_KINDS[1:]:
            fns[f"{kind} x A_{n}"] = (lambda n, kind: lambda d, z, t:
                                      level.automorphy_tensor(n, d, z, t, kind))(n, kind)
    worst = {name: 0.0 for name in fns}
    for _ in range(k):
        d1 = level.random_deck(N, rng, 3)
        d2 = level.random_deck(N, rng, 3)
        tau = _random_tau(rng)
        z = _random_z(rng, tau)
        for name, fn in fns.items():
            worst[name] = max(worst[name], _cocycle_err(fn, d1, d2, z, tau))
    return [Check(f"cocycle {name}", e, 1e-9) for name, e in worst.items()]


def suite_section_transform(opts: SuiteOptions):
    rng = _rng(opts, 8)
    k = _pick(opts.samples, 20)
    N = _pick(opts.N, 4)
    out = []
    for D in ([opts.D] if opts.D else [2, 3]):
        ctx = sections.DVariantContext(D=D)
        for n in ([opts.n] if opts.n is not None else range(4)):
            q, p = sections.build_q(n, ctx, opts.prec), sections.build_p(n, ctx, opts.prec)
            wq = wp = 0.0
            for _ in range(k):
                d = level.random_deck(N, rng)
                tau = _random_tau(rng)
                z = _random_z(rng, tau, D)
                wq = max(wq, level.section_transform_defect(n, "relative-1form", q, d, z, tau, "conditioned"))
                wp = max(wp, level.section_transform_defect(n, "absolute-1form", p, d, z, tau, "conditioned"))
            out.append(Check(f"q_{n}^D transformation, D={D}", wq, 1e-7))
            out.append(Check(f"p_{n}^D transformation, D={D}", wp, 1e-7))
    return out


def closedness_grid(D: int, tau):
    """5 x 5 grid of z in the fundamental parallelogram that avoids (1/D)(Z tau + Z)."""
    xs = np.array([0.11, 0.29, 0.43, 0.62, 0.83])
    if D == 3:
        xs = np.array([0.11, 0.23, 0.43, 0.59, 0.83])
    return xs[:, None] + xs[None, :] * tau


def suite_closedness(opts: SuiteOptions):
    out = []
    tau = 0.1 + 1.2j
    for D in ([opts.D] if opts.D else [2, 3]):
        ctx = sections.DVariantContext(D=D)
        Z = closedness_grid(D, tau)
        for n in ([opts.n] if opts.n is not None else range(4)):
            v = sections.apply_deRham1(n, sections.build_p(n, ctx, opts.prec), Z, tau, opts.prec)
            out.append(Check(f"closedness of p_{n}^D, D={D}", np.max(np.abs(v)), 1e-6))
    return out


def specialization_cases(opts: SuiteOptions):
    for N in ([opts.N] if opts.N else [3, 4, 5]):
        for D in ([opts.D] if opts.D else [2, 3]):
            if math.gcd(D, N) != 1:
                continue
            for j0 in sorted({1, N - 1}):
                yield N, D, j0


def suite_specialization(opts: SuiteOptions):
    out = []
    ns = [opts.n] if opts.n is not None else list(range(4))
    for N, D, j0 in specialization_cases(opts):
        worst = 0.0
        for tau in TAU_SAMPLES:
            for a, b in ((1, 0), (1, 2)):
                ctx = sections.DVariantContext(D=D, N=N, a=a, b=b, j0=j0)
                for n in ns:
                    got = sections.specialize_torsion(n, ctx, sections.build_p(n, ctx, opts.prec), tau, opts.prec)
                    worst = max(worst, _mixed(got, sections.specialization_expected(n, ctx, tau, opts.prec)))
        out.append(Check(f"specialization of p_n^D, N={N}, D={D}, j0={j0}", worst, 1e-6))
    return out


def suite_eis_class(opts: SuiteOptions):
    prec = opts.prec
    tau = 0.4 + 1.3j
    coef_err = unfold_err = 0.0
    weight = 0.0
    for N in ([opts.N] if opts.N else [3, 4, 5]):
        for n in range(4):
            for a, b in ((1, 0), (1, 2)):
                r = classes.eisenstein_class_coefficient(n, a, b, N, tau, prec)
                F = eisenstein.modular_F(n + 2, a, b, N, tau, prec).value
                direct = F / N if n == 0 else -N ** (n - 1) * (-1) ** n / math.factorial(n) * F
                coef_err = max(coef_err, _mixed(r.form, direct))
                for D in (2, 3):
                    if math.gcd(D, N) == 1:
                        unfold_err = max(unfold_err, _mixed(classes.dvariant_class_lhs(n, a, b, N, D, tau, prec),
                                              classes.dvariant_class_rhs(n, a, b, N, D, tau, prec)))
        f = lambda t: eisenstein.modular_F(3, 1, 0, N, t, prec).value
        weight = max(weight, classes.check_weight(f, 3, N, tau, 5, opts.seed))
    rec = 0.0
    for N, D in ((3, 4), (4, 5), (5, 6)):
        if opts.N and N != opts.N:
            continue
        for n in range(4):
            got = classes.eisenstein_class_from_specialization(n, 1, 1, N, D, tau, prec)
            want = classes.eisenstein_class_coefficient(n, 1, 1, N, tau, prec).form
            rec = max(rec, _rel(got, want))
    scaling_err = rep_err = 0.0
    ctx = sections.DVariantContext(D=2, N=5, a=1, b=3)
    vecs = {n: sections.specialize_torsion(n, ctx, sections.build_p(n, ctx, prec), tau, prec) for n in range(4)}
    for n in range(4):
        for k in range(n + 1):
            scaling_err = max(scaling_err, _rel(classes.sym_component(n, k, vecs[n]),
                                classes.sym_component(k, k, vecs[k]) / math.factorial(n - k)))
        DF = eisenstein.modular_DF(n + 2, 1, 3, 5, 2, tau, prec).value
        form = (-1) ** (n + 1) * TWO_PI_I ** (n + 2) / math.factorial(n) * DF
        rep = classes.form_to_representative(n, lambda t: form, 5, tau, check_samples=0)
        rep_err = max(rep_err, _rel(rep.coefficient, vecs[n][n]))
    g = lambda t: 1.7 - 0.4j
    ks = abs(classes.kodaira_spencer(g, tau) - classes.kodaira_spencer_gm_route(g, tau, prec))
    return [Check("Eis^n coefficients from F^(n+2)", coef_err, 1e-12),
            Check("D-variant relation of the classes", unfold_err, 1e-12),
            Check("Eis^n recovered from the specialization, D = 1 mod N", rec, 1e-6),
            Check("symmetric-power scaling of components", scaling_err, 1e-6),
            Check("representative of the specialized form", rep_err, 1e-9),
            Check("weight 3 check of F^(3)", weight, 1e-7),
            Check("Kodaira-Spencer via Gauss-Manin", ks, 1e-8)]


SUITES = {
    "theta-transform": suite_theta_transform,
    "legendre": suite_legendre,
    "jacobi-cocycle": suite_jacobi_cocycle,
    "heat": suite_heat,
    "residues": suite_residues,
    "eisenstein-bridge": suite_eisenstein_bridge,
    "automorphy-cocycle": suite_automorphy_cocycle,
    "section-transform": suite_section_transform,
    "closedness": suite_closedness,
    "specialization": suite_specialization,
    "eis-class": suite_eis_class,
}


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def options_dict(opts: SuiteOptions) -> dict:
    d = asdict(opts)
    d["prec"] = asdict(opts.prec)
    return d


def run_suite(name: str, opts: SuiteOptions = SuiteOptions()) -> dict:
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    eisenstein.clear_caches()
    checks = sorted(SUITES[name](opts), key=lambda c: c.name)
    return {"suite": name,
            "checks": [{"name": c.name, "max_error": c.max_error, "tolerance": c.tolerance,
                        "passed": c.passed} for c in checks],
            "config_hash": config_hash({"suite": name, **options_dict(opts)})}


def report_passed(report: dict) -> bool:
    return all(c["passed"] for c in report["checks"])
