"""Command-line front end: single values, verification suites and sweeps."""
from __future__ import annotations

import csv
import json
import re
import sys

import click
import mpmath
import numpy as np

from .errors import PoleError, QTraceError
from .fv import ParamPoint, fv_u
from .qcore import DEFAULT_CFG, PrecisionCfg, QBase, clog
from .suites import SUITE_NAMES, run_suite

SUBJECTS = ("fv", "trace", "delta", "chi", "J", "Jtilde", "f", "trig", "classical")
MULT_KEYS = ("q", "q2l", "q2w", "q2m", "q2k")
PARAM_KEYS = MULT_KEYS + ("lambda", "omega", "mu", "k", "eps")


class ConfigError(click.UsageError):
    pass


# ---------------------------------------------------------------- parsing

def parse_complex(x, what="value") -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ConfigError(f"{what}: complex arrays need two entries [re, im]")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float, complex)):
        return complex(x)
    s = str(x).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(f"{what}: cannot parse {x!r} as a complex number") from None


def parse_grid(spec: str | None) -> dict | None:
    """'q2w=1e-3,1e-4;q2l=0.01..0.04:4' -> {key: [values]}.  a..b:n is a
    geometric progression from a to b with n points."""
    if spec is None:
        return None
    out: dict = {}
    for part in filter(None, (s.strip() for s in spec.split(";"))):
        if "=" not in part:
            raise ConfigError(f"grid entry {part!r} lacks '='")
        key, vals = (s.strip() for s in part.split("=", 1))
        key = key.lower()
        if key not in MULT_KEYS:
            raise ConfigError(f"grid key {key!r} is not one of {', '.join(MULT_KEYS)}")
        m = re.fullmatch(r"(.+)\.\.(.+):(\d+)", vals)
        if m:
            a, b, n = float(m.group(1)), float(m.group(2)), int(m.group(3))
            if a <= 0 or b <= 0:
                raise ConfigError("geometric grids need positive endpoints")
            out[key] = [float(v) for v in np.geomspace(a, b, n)] if n > 0 else []
        else:
            out[key] = [parse_complex(v, key) for v in filter(None, vals.split(","))]
    return out


def load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return {k.replace("-", "_").lower(): v for k, v in data.items()}


def make_cfg(digits: int | None) -> PrecisionCfg:
    if digits is None or digits <= 15:
        return DEFAULT_CFG
    mpmath.mp.dps = digits
    return PrecisionCfg(series_tail_tol=10.0 ** -digits, max_terms=10000, quad_tol=10.0 ** -(digits - 2),
                        max_quad_nodes=1 << 14, pole_margin=DEFAULT_CFG.pole_margin, dps=digits)


def fmt(x, digits: int | None = None) -> str:
    """JSON pair [re, im]."""
    if isinstance(x, (mpmath.mpc, mpmath.mpf)) and digits:
        x = mpmath.mpc(x)
        return f"[{mpmath.nstr(x.real, digits)}, {mpmath.nstr(x.imag, digits)}]"
    x = complex(x)
    return json.dumps([x.real, x.imag])


class Params:
    """Flag values merged over config-file values."""

    def __init__(self, flags: dict, config: dict):
        self.v = {k: config[k] for k in PARAM_KEYS if k in config}
        self.v.update({k: flags[k] for k in PARAM_KEYS if flags.get(k) is not None})

    def has(self, key):
        return key in self.v

    def c(self, key) -> complex:
        if key not in self.v:
            raise ConfigError(f"missing required parameter --{key}")
        return parse_complex(self.v[key], key)

    def integer(self, key) -> int:
        if key not in self.v:
            raise ConfigError(f"missing required parameter --{key}")
        try:
            x = float(self.v[key])
        except (TypeError, ValueError):
            raise ConfigError(f"--{key} must be an integer") from None
        if x != int(x):
            raise ConfigError(f"--{key} must be an integer")
        return int(x)

    def qbase(self) -> QBase:
        return QBase(self.c("q"))

    def point(self) -> ParamPoint:
        return ParamPoint.from_mult(self.qbase(), *(self.c(k) for k in MULT_KEYS[1:]))

    def exponent(self, name, mult_key) -> complex:
        """Exponent from its own flag, or from the multiplicative one through
        x = -log(Q)/(2 log q)."""
        if self.has(name):
            return self.c(name)
        if self.has(mult_key):
            return -clog(self.c(mult_key)) / (2 * self.qbase().log_q)
        raise ConfigError(f"missing required parameter --{name} (or --{mult_key})")

    def with_grid(self, row: dict) -> "Params":
        p = Params({}, {})
        p.v = dict(self.v) | row
        return p


# ---------------------------------------------------------------- evaluation

def evaluate(subject: str, prm: Params, method: str | None, cfg: PrecisionCfg):
    """Returns (value, note)."""
    from . import macdonald as mac
    from . import trace as tr

    if subject == "fv":
        return fv_u(prm.point(), cfg), None
    if subject == "trace":
        return tr.trace(prm.point(), method or "integral", cfg), None
    if subject == "delta":
        lam = prm.exponent("lambda", "q2l")
        val = tr.weyl_denominator(prm.qbase(), lam, prm.exponent("omega", "q2w"), cfg)
        note = "zero of theta0 at 1: the denominator vanishes at lambda = 0" if lam == 0 else None
        return val, note
    if subject == "trig":
        return tr.trig_m1(prm.qbase(), prm.exponent("lambda", "q2l"), prm.exponent("mu", "q2m")), None
    if subject == "classical":
        c = tr.ClassicalParams(**{k: prm.c(n) for k, n in (("Lam", "lambda"), ("Om", "omega"), ("mu", "mu"),
                                                          ("k", "k")) if prm.has(n)})
        if (method or "rhs") == "rhs":
            return tr.classical_rhs(c, cfg), None
        if method != "trace":
            raise ConfigError("classical --method is 'rhs' or 'trace'")
        return tr.classical_trace(c, float(prm.c("eps").real), cfg), None
    q, lam, om = prm.qbase(), prm.exponent("lambda", "q2l"), prm.exponent("omega", "q2w")
    if subject == "f":
        return mac.f_at(lam, om, q, cfg), None
    w = mac.IntegrableWeight(prm.integer("mu"), prm.integer("k"))
    if subject == "chi":
        route = method or "a"
        if route == "a":
            return mac.chi_route_a(w, lam, om, q, cfg), None
        if route == "b":
            return mac.chi_route_b(w, lam, om, q, cfg), None
        raise ConfigError("chi --method is 'a' or 'b'")
    if subject == "J":
        return mac.affine_macdonald(w, lam, om, q, cfg), None
    if subject == "Jtilde":
        return mac.elliptic_macdonald(w.mu, w.k_tilde, lam, om, q, cfg), None
    raise ConfigError(f"unknown subject {subject!r}")


def diagnostic(e: Exception) -> dict:
    d = {"error": type(e).__name__, "message": str(e)}
    if isinstance(e, PoleError):
        if e.location is not None:
            d["location"] = json.loads(fmt(e.location))
        if e.source is not None:
            d["source"] = e.source
    return d


# ---------------------------------------------------------------- commands

def param_options(f):
    opts = [
        click.option("--q", "q", default=None, help="base q (complex, e.g. 0.95 or 1.2+0.1j)"),
        click.option("--q2l", default=None, help="q^(-2 lambda)"),
        click.option("--q2w", default=None, help="q^(-2 omega)"),
        click.option("--q2m", default=None, help="q^(-2 mu)"),
        click.option("--q2k", default=None, help="q^(-2 k)"),
        click.option("--lambda", "lam", default=None, help="lambda exponent"),
        click.option("--omega", default=None, help="omega exponent"),
        click.option("--mu", default=None, help="mu (integer for weights)"),
        click.option("--k", default=None, help="k (integer for weights)"),
        click.option("--eps", default=None, help="classical-limit step"),
        click.option("--method", default=None, help="route tag"),
        click.option("--precision-digits", type=int, default=None, help="working digits (> 15 uses mpmath)"),
        click.option("--config", "config_path", default=None, help="JSON file with parameters"),
    ]
    for o in reversed(opts):
        f = o(f)
    return f


def _flags(kw) -> dict:
    d = {k: kw.get(k) for k in ("q", "q2l", "q2w", "q2m", "q2k", "omega", "mu", "k", "eps")}
    d["lambda"] = kw.get("lam")
    return d


@click.group()
def main():
    """Numerical trace functions for affine U_q(sl2) and their verification."""


@main.command("eval")
@click.argument("subject", type=click.Choice(SUBJECTS))
@param_options
def eval_cmd(subject, method, precision_digits, config_path, **kw):
    """Evaluate SUBJECT and print [re, im]."""
    config = load_config(config_path)
    method = method or config.get("method")
    digits = precision_digits if precision_digits is not None else config.get("precision_digits")
    cfg = make_cfg(digits)
    prm = Params(_flags(kw), config)
    try:
        val, note = evaluate(subject, prm, method, cfg)
    except ConfigError:
        raise
    except (QTraceError, ValueError, ZeroDivisionError, OverflowError) as e:
        click.echo(json.dumps(diagnostic(e)), err=True)
        sys.exit(1)
    click.echo(fmt(val, digits))
    if note:
        click.echo(f"note: {note}", err=True)


@main.command()
@click.argument("suite", type=click.Choice(SUITE_NAMES))
@click.option("--tol", type=float, default=None, help="override every case tolerance")
@click.option("--seed", type=int, default=None)
@click.option("--grid", default=None, help="trace-suite grid, e.g. 'q2l=0.01,0.02;q2m=1e-3,2e-3'")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--precision-digits", type=int, default=None)
@click.option("--config", "config_path", default=None)
@click.option("--timing/--no-timing", default=False, help="include wall time (breaks byte stability)")
def verify(suite, tol, seed, grid, out, precision_digits, config_path, timing):
    """Run a verification suite and emit a JSON report."""
    config = load_config(config_path)
    tol = tol if tol is not None else config.get("tol")
    seed = seed if seed is not None else int(config.get("seed", 0))
    grid = grid if grid is not None else config.get("grid")
    g = parse_grid(grid)
    if g is not None:
        # the suites take the ParamPoint spelling of the keys; q stays fixed
        if "q" in g:
            raise ConfigError("the trace grid keeps q fixed")
        g = {"Q2" + k[2:]: [complex(v).real if complex(v).imag == 0 else complex(v) for v in vals]
             for k, vals in g.items()}
    digits = precision_digits if precision_digits is not None else config.get("precision_digits")
    report = run_suite(suite, seed=seed, cfg=make_cfg(digits), tol=tol, grid=g)
    text = report.to_json(timing=timing)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)
    c = report.counts
    click.echo(f"{suite}: {c['passed']}/{c['total']} passed", err=True)
    sys.exit(0 if report.all_passed else 1)


@main.command()
@click.argument("subject", type=click.Choice(SUBJECTS))
@click.option("--grid", default=None, help="e.g. 'q2w=1e-3..1e-7:5' or 'q2l=0.01,0.02'")
@click.option("--compare", type=click.Choice(["none", "trig"]), default="none",
              help="add a residual column against the trigonometric trace")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@param_options
def sweep(subject, grid, compare, out, method, precision_digits, config_path, **kw):
    """Evaluate SUBJECT over a grid and write CSV, one row per point."""
    from . import trace as tr

    config = load_config(config_path)
    method = method or config.get("method")
    grid = grid if grid is not None else config.get("grid", "")
    g = parse_grid(grid) or {}
    cfg = make_cfg(precision_digits if precision_digits is not None else config.get("precision_digits"))
    prm = Params(_flags(kw), config)
    keys = sorted(g)
    rows = [dict()] if keys else []
    for k in keys:
        rows = [r | {k: v} for r in rows for v in g[k]]
    header = keys + ["value_re", "value_im"]
    if compare == "trig":
        header += ["ref_re", "ref_im", "rel_err"]
    header += ["error"]
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(header)
        for row in rows:
            line = [_csv_num(row[k]) for k in keys]
            try:
                pr = prm.with_grid(row)
                val, _ = evaluate(subject, pr, method, cfg)
                val = complex(val)
                line += [repr(val.real), repr(val.imag)]
                if compare == "trig":
                    ref = complex(tr.trig_m1(pr.qbase(), pr.exponent("lambda", "q2l"), pr.exponent("mu", "q2m")))
                    line += [repr(ref.real), repr(ref.imag), repr(abs(val - ref) / abs(ref))]
                line += [""]
            except ConfigError:
                raise
            except (QTraceError, ValueError, ZeroDivisionError, OverflowError) as e:
                pad = 5 if compare == "trig" else 2
                line += [""] * pad + [f"{type(e).__name__}: {e}"]
            wr.writerow(line)
    finally:
        if out:
            fh.close()


def _csv_num(v) -> str:
    v = complex(v)
    return repr(v.real) if v.imag == 0 else str(v)


if __name__ == "__main__":
    main()
