"""Command-line entry point: ``ellpolylog eval|verify|table``."""

from __future__ import annotations

import csv
import io
import json
import re
import sys
from dataclasses import asdict, dataclass, field, replace

import click
import numpy as np

from . import __version__
from .errors import EllPolylogError
from .numeric import DEFAULT_PRECISION, Precision

_COMPLEX = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?"
                      r"([+-](\d+(\.\d*)?|\.\d+)?([eE][+-]?\d+)?i)?$|^[+-]?(\d+(\.\d*)?|\.\d+)?([eE][+-]?\d+)?i$")


def parse_complex(text: str) -> complex:
    """Parse a literal of the form a+bi (no spaces), e.g. 2i, 0.3+0.1i, -1, i."""
    s = text.strip()
    if " " in text or not s or not _COMPLEX.match(s):
        raise click.BadParameter(f"malformed complex literal {text!r}; expected a+bi without spaces")
    s = re.sub(r"(^|[+-])i$", r"\g<1>1i", s)
    return complex(s.replace("i", "j"))


def parse_tau(text: str) -> complex:
    t = parse_complex(text)
    if not t.imag > 0:
        raise click.BadParameter(f"tau = {text} must have positive imaginary part")
    return t


class ComplexParam(click.ParamType):
    name = "complex"

    def __init__(self, tau: bool = False):
        self.tau = tau

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        try:
            return parse_tau(value) if self.tau else parse_complex(value)
        except click.BadParameter as e:
            self.fail(e.message, param, ctx)


COMPLEX = ComplexParam()
TAU = ComplexParam(tau=True)


@dataclass(frozen=True)
class RunConfig:
    command: str
    target: str
    seed: int = 20240611
    fmt: str = "json"
    samples: int | None = None
    precision: Precision = DEFAULT_PRECISION
    args: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["args"] = {k: _jsonable(v) for k, v in sorted(self.args.items())}
        return d

    def hash(self) -> str:
        from .suites import config_hash
        return config_hash(self.as_dict())


def _jsonable(v):
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, np.ndarray):
        return [_jsonable(x) for x in v.tolist()]
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _precision_options(f):
    f = click.option("--quad-points", type=int, default=None, help="Nodes per Cauchy circle.")(f)
    f = click.option("--lattice-radius", type=int, default=None, help="Base shell radius for lattice sums.")(f)
    f = click.option("--q-tail-eps", type=float, default=None, help="Series and lattice truncation target.")(f)
    f = click.option("--deriv-radius-frac", type=float, default=None,
                     help="Cauchy radius as a fraction of the pole distance.")(f)
    return f


def _make_precision(quad_points, lattice_radius, q_tail_eps, deriv_radius_frac) -> Precision:
    over = {k: v for k, v in dict(quad_points=quad_points, lattice_radius=lattice_radius,
                                   q_tail_eps=q_tail_eps, deriv_radius_frac=deriv_radius_frac).items()
            if v is not None}
    return replace(DEFAULT_PRECISION, **over)


# ---------------------------------------------------------------- evaluation

EVAL_FUNCTIONS = ("theta", "J", "r_k", "s_D", "e_k", "E", "F", "DF", "A_n", "eis_class")


def evaluate(name: str, prec: Precision, z=None, w=None, tau=None, k=None, a=None, b=None,
             N=None, D=None, n=None, x=None, y=None, m=None, nshift=None, gamma=None) -> dict:
    """Evaluate one of EVAL_FUNCTIONS; returns {"value": ..., optional "error", "meta"}."""
    from . import classes, eisenstein, jacobi, level, sections, theta

    def need(**kw):
        missing = [k for k, v in kw.items() if v is None]
        if missing:
            raise click.UsageError(f"{name} needs --{' --'.join(missing)}")

    if name == "theta":
        need(z=z, tau=tau)
        return {"value": theta.theta_elementary(z, tau, prec)}
    if name == "J":
        need(z=z, w=w, tau=tau)
        return {"value": jacobi.jacobi_J(z, w, tau, prec)}
    if name == "r_k":
        need(k=k, z=z, tau=tau)
        lr = jacobi.laurent_r(z, tau, k, prec)
        return {"value": lr[k], "meta": {"principal_part": lr[-1], "radius": lr.radius_used}}
    if name == "s_D":
        need(k=k, D=D, z=z, tau=tau)
        return {"value": sections.s_D(k, sections.DVariantContext(D=D), z, tau, prec)}
    if name == "e_k":
        need(k=k, z=z, tau=tau)
        return {"value": jacobi.eisenstein_kronecker_e(k, z, tau, prec)}
    if name == "E":
        need(k=k, x=x, y=y, N=N, tau=tau)
        return {"value": eisenstein.eisenstein_E(k, x, y, N, tau, prec)}
    if name == "F":
        need(k=k, a=a, b=b, N=N, tau=tau)
        mv = eisenstein.modular_F(k, a, b, N, tau, prec)
        return {"value": mv.value, "meta": {"weight": mv.weight, "level": mv.level,
                                            "torsion": list(mv.torsion), "route": mv.route}}
    if name == "DF":
        need(k=k, a=a, b=b, N=N, D=D, tau=tau)
        mv = eisenstein.modular_DF(k, a, b, N, D, tau, prec)
        return {"value": mv.value, "meta": {"weight": mv.weight, "level": mv.level,
                                            "torsion": list(mv.torsion), "route": mv.route}}
    if name == "A_n":
        need(n=n, z=z, tau=tau)
        g = gamma or ((1, 0), (0, 1))
        d = level.DeckElement((m or 0, nshift or 0), g)
        return {"value": level.automorphy_An(n, d, z, tau)}
    if name == "eis_class":
        need(n=n, a=a, b=b, N=N, tau=tau)
        r = classes.eisenstein_class_coefficient(n, a, b, N, tau, prec)
        # the class scalar multiplying F^(n+2); the d tau coefficient is form/(2 pi i)
        return {"value": r.form, "meta": {"dtau_coefficient": r.coefficient, **r.provenance}}
    raise click.UsageError(f"unknown function {name!r}; choose from {', '.join(EVAL_FUNCTIONS)}")


def _parse_gamma(text):
    if text is None:
        return None
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise click.BadParameter(f"gamma {text!r} must be four comma-separated integers")
    if len(vals) != 4:
        raise click.BadParameter(f"gamma {text!r} must be four comma-separated integers")
    return ((vals[0], vals[1]), (vals[2], vals[3]))


def _fail(e: Exception):
    click.echo(f"error: {e}", err=True)
    sys.exit(2)


@click.group()
@click.version_option(__version__, prog_name="ellpolylog")
def main():
    """Elliptic polylogarithm toolkit with evaluation, tables and verification suites."""


@main.command("eval")
@click.argument("function", type=click.Choice(EVAL_FUNCTIONS))
@click.option("--z", type=COMPLEX)
@click.option("--w", type=COMPLEX)
@click.option("--tau", type=TAU)
@click.option("--k", type=int)
@click.option("--a", type=int)
@click.option("--b", type=int)
@click.option("--N", "N", type=int)
@click.option("--D", "D", type=int)
@click.option("--n", type=int)
@click.option("--x", type=int, help="E^(k) index x.")
@click.option("--y", type=int, help="E^(k) index y.")
@click.option("--m", type=int, help="Deck shift m for A_n.")
@click.option("--nshift", type=int, help="Deck shift n for A_n.")
@click.option("--gamma", type=str, help="Matrix a,b,c,d for A_n.")
@_precision_options
def cmd_eval(function, quad_points, lattice_radius, q_tail_eps, deriv_radius_frac, gamma, **kw):
    """Evaluate FUNCTION and print JSON."""
    try:
        prec = _make_precision(quad_points, lattice_radius, q_tail_eps, deriv_radius_frac)
        out = evaluate(function, prec, gamma=_parse_gamma(gamma), **kw)
    except EllPolylogError as e:
        _fail(e)
    out = {"function": function, **out}
    click.echo(json.dumps(_jsonable(out), sort_keys=True))


@main.command("verify")
@click.argument("suite")
@click.option("--seed", type=int, default=20240611, show_default=True)
@click.option("--samples", type=int, default=None)
@click.option("--n", type=int, default=None)
@click.option("--N", "N", type=int, default=None)
@click.option("--D", "D", type=int, default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write the report here.")
@_precision_options
def cmd_verify(suite, seed, samples, n, N, D, output, quad_points, lattice_radius, q_tail_eps,
               deriv_radius_frac):
    """Run a named verification SUITE; exit status 1 on any failed check."""
    from .suites import SUITES, SuiteOptions, report_passed, run_suite
    if suite not in SUITES:
        raise click.UsageError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    try:
        prec = _make_precision(quad_points, lattice_radius, q_tail_eps, deriv_radius_frac)
        report = run_suite(suite, SuiteOptions(seed, samples, n, N, D, prec))
    except EllPolylogError as e:
        _fail(e)
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    _write(output, text)
    sys.exit(0 if report_passed(report) else 1)


def _write(path, text):
    if path is None:
        click.echo(text, nl=False)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise click.FileError(path, hint=str(e))


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError:
        raise click.BadParameter(f"{text!r} is not a comma-separated list of numbers")


def build_table(cfg: RunConfig, tau_grid, z_grid) -> str:
    a = cfg.args
    rows = []
    for tau in tau_grid:
        for z in z_grid:
            kw = {k: a.get(k) for k in ("k", "a", "b", "N", "D", "n", "w", "x", "y")}
            val = evaluate(cfg.target, cfg.precision, z=z, tau=tau, **kw)["value"]
            rows.append((tau, z, complex(np.asarray(val).ravel()[0]) if np.ndim(val) else complex(val)))
    header = (f"# ellpolylog {__version__} function={cfg.target} config_hash={cfg.hash()} "
              f"precision={json.dumps(asdict(cfg.precision), sort_keys=True)}")
    if cfg.fmt == "json":
        body = {"header": header[2:], "rows": [
            {"tau": _jsonable(t), **({"z": _jsonable(z)} if z is not None else {}), "value": _jsonable(v)}
            for t, z, v in rows]}
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(header + "\n")
    wr = csv.writer(buf, lineterminator="\n")
    cols = ["tau_re", "tau_im"] + (["z_re", "z_im"] if z_grid[0] is not None else []) + ["value_re", "value_im"]
    wr.writerow(cols)
    for t, z, v in rows:
        row = [repr(t.real), repr(t.imag)]
        if z is not None:
            row += [repr(z.real), repr(z.imag)]
        wr.writerow(row + [repr(v.real), repr(v.imag)])
    return buf.getvalue()


@main.command("table")
@click.argument("function", type=click.Choice(EVAL_FUNCTIONS))
@click.option("--tau-real", default="0", show_default=True, help="Comma-separated real parts of tau.")
@click.option("--tau-imag", required=True, help="Comma-separated imaginary parts of tau.")
@click.option("--z", "zs", type=COMPLEX, multiple=True, help="Optional z values (repeatable).")
@click.option("--w", type=COMPLEX)
@click.option("--k", type=int)
@click.option("--a", type=int)
@click.option("--b", type=int)
@click.option("--N", "N", type=int)
@click.option("--D", "D", type=int)
@click.option("--n", type=int)
@click.option("--x", type=int)
@click.option("--y", type=int)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
@_precision_options
def cmd_table(function, tau_real, tau_imag, zs, fmt, output, quad_points, lattice_radius, q_tail_eps,
              deriv_radius_frac, **kw):
    """Tabulate FUNCTION over the product grid tau_real x i*tau_imag (and optional z values)."""
    re_parts, im_parts = _floats(tau_real), _floats(tau_imag)
    if any(v <= 0 for v in im_parts):
        raise click.BadParameter("every --tau-imag value must be positive")
    taus = [complex(r, i) for r in re_parts for i in im_parts]
    prec = _make_precision(quad_points, lattice_radius, q_tail_eps, deriv_radius_frac)
    args = {k: v for k, v in kw.items() if v is not None}
    args.update(tau_real=re_parts, tau_imag=im_parts, z=list(zs))
    cfg = RunConfig("table", function, fmt=fmt, precision=prec, args=args)
    try:
        text = build_table(cfg, taus, list(zs) or [None])
    except EllPolylogError as e:
        _fail(e)
    _write(output, text)


if __name__ == "__main__":  # pragma: no cover
    main()
