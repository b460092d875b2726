"""Verification suites: seeded cross-method checks grouped by subject, with
JSON-serializable reports."""
from __future__ import annotations

import cmath
import dataclasses
import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np

from . import __version__
from .errors import QTraceError
from .fock import ExpFactorList, FockTrunc, heis_trace_brute, heis_trace_closed
from .fv import (REFERENCE_POINT, ParamPoint, fv_contour, fv_series_at0, fv_series_atinf,
                 residue_Im, residue_Ipm)
from .macdonald import (IntegrableWeight, affine_macdonald, chi_bgg, extract_f, f_at, fvconj_rhs)
from .qcore import (DEFAULT_CFG, PrecisionCfg, QBase, ell_gamma, phase_omega, poch, poch_fin,
                    qa_poch_coeff, theta0, theta_ratio_bounds)
from .quad import pochhammer_loop_integral
from .trace import (ClassicalParams, TraceMethod, C_const, C_ff, D_const, classical_rhs, classical_trace,
                    normalized_trace, richardson_eps, shifted_free_field_point, swapped_point, trace, trace_from_xi,
                    richardson_q2w, trig_m1)
from .uqsl2 import brute_trace, closed_trace


def pair(x) -> list | None:
    if x is None:
        return None
    x = complex(x)
    return [x.real, x.imag]


@dataclass
class VerificationCase:
    name: str
    params: dict
    route_lhs: str
    route_rhs: str
    lhs: complex | None
    rhs: complex | None
    tol: float
    criterion: int
    error: str | None = None

    @property
    def abs_err(self) -> float:
        if self.lhs is None or self.rhs is None:
            return math.inf
        return float(abs(complex(self.lhs) - complex(self.rhs)))

    @property
    def rel_err(self) -> float:
        if self.lhs is None or self.rhs is None:
            return math.inf
        r = abs(complex(self.rhs))
        return self.abs_err / r if r > 0 else (0.0 if self.abs_err == 0 else math.inf)

    @property
    def passed(self) -> bool:
        if self.error is not None:
            return False
        # a relative error is meaningless against an exact zero reference
        if self.rhs is not None and complex(self.rhs) == 0:
            return self.abs_err <= self.tol
        return self.rel_err <= self.tol

    def to_json(self) -> dict:
        def num(x):
            return None if math.isinf(x) else x
        return {"name": self.name, "criterion": self.criterion, "params": self.params,
                "route_lhs": self.route_lhs, "route_rhs": self.route_rhs,
                "lhs": pair(self.lhs), "rhs": pair(self.rhs),
                "abs_err": num(self.abs_err), "rel_err": num(self.rel_err),
                "tol": self.tol, "pass": self.passed, "error": self.error}


@dataclass
class VerificationReport:
    suite: str
    cases: list
    config: dict
    seed: int
    wall_time: float = 0.0
    timings: dict = field(default_factory=dict)
    version: str = __version__

    def __post_init__(self):
        self.cases = sorted(self.cases, key=lambda c: c.name)

    @property
    def counts(self) -> dict:
        n_pass = sum(c.passed for c in self.cases)
        return {"total": len(self.cases), "passed": n_pass, "failed": len(self.cases) - n_pass}

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def by_criterion(self) -> dict:
        out: dict = {}
        for c in self.cases:
            out.setdefault(c.criterion, []).append(c)
        return dict(sorted(out.items()))

    def to_json(self, timing: bool = False) -> str:
        """Stable serialization; the wall time is only included on request
        so that reports stay byte-identical between runs."""
        d = {"suite": self.suite, "version": self.version, "seed": self.seed,
             "config": self.config, "counts": self.counts,
             "cases": [c.to_json() for c in self.cases]}
        if timing:
            d["wall_time"] = round(self.wall_time, 3)
            d["criterion_time"] = {str(k): round(v, 3) for k, v in sorted(self.timings.items())}
        return json.dumps(d, indent=1, sort_keys=False)


# ---------------------------------------------------------------- helpers

@dataclass
class SuiteContext:
    seed: int = 0
    cfg: PrecisionCfg = DEFAULT_CFG
    tol: float | None = None          # overrides every case tolerance
    grid: dict | None = None          # trace-suite grid override
    cases: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def rng(self, tag: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, sum(ord(ch) * 31 ** i for i, ch in enumerate(tag)) % 2 ** 32])

    def draw(self, criterion, rng, draw, check, n, max_tries=2000):
        """Admissible point draws, timed against the criterion they serve."""
        t0 = time.perf_counter()
        try:
            return _admissible(rng, draw, check, n, max_tries)
        finally:
            self.timings[criterion] = self.timings.get(criterion, 0.0) + time.perf_counter() - t0

    def add(self, name, criterion, tol, params, route_lhs, route_rhs, fn: Callable):
        """Evaluate fn() -> (lhs, rhs) and record the case; evaluation errors
        become failing cases."""
        tol = self.tol if self.tol is not None else tol
        t0 = time.perf_counter()
        try:
            lhs, rhs = fn()
            err = None
        except (QTraceError, ValueError, ZeroDivisionError, ArithmeticError) as e:
            lhs = rhs = None
            err = f"{type(e).__name__}: {e}"
        self.timings[criterion] = self.timings.get(criterion, 0.0) + time.perf_counter() - t0
        self.cases.append(VerificationCase(name, params, route_lhs, route_rhs,
                                           None if lhs is None else complex(lhs),
                                           None if rhs is None else complex(rhs), tol, criterion, err))


def _rc(rng, lo, hi, phase=math.pi):
    """Random complex number with modulus in [lo, hi] and argument in [-phase, phase]."""
    return rng.uniform(lo, hi) * cmath.exp(1j * rng.uniform(-phase, phase))


def _admissible(rng, draw: Callable, check: Callable, n: int, max_tries: int = 2000):
    """Draw n points for which check(point) raises no evaluation error."""
    out = []
    for _ in range(max_tries):
        pt = draw(rng)
        try:
            check(pt)
        except (QTraceError, ValueError, ZeroDivisionError):
            continue
        out.append(pt)
        if len(out) == n:
            return out
    raise RuntimeError(f"only {len(out)} of {n} admissible points found")


def _cdict(**kw) -> dict:
    return {k: pair(v) if isinstance(v, complex) else v for k, v in kw.items()}


def _pdict(p: ParamPoint) -> dict:
    return p.as_dict()


# ---------------------------------------------------------------- qcore (criteria 1-3)

def suite_qcore(ctx: SuiteContext, n_points: int = 100):
    rng = ctx.rng("qcore")
    cfg = ctx.cfg
    for i in range(n_points):
        q, u = _rc(rng, 0.1, 0.7), _rc(rng, 0.4, 1.6)
        par = _cdict(q=q, u=u)
        ctx.add(f"c01.theta.shift_up[{i:03d}]", 1, 1e-11, par, "theta0(qu)", "-theta0(u)/u",
                lambda: (theta0(q * u, q, cfg), -theta0(u, q, cfg) / u))
        ctx.add(f"c01.theta.shift_down[{i:03d}]", 1, 1e-11, par, "theta0(u/q)", "-u theta0(u)/q",
                lambda: (theta0(u / q, q, cfg), -u / q * theta0(u, q, cfg)))
        ctx.add(f"c01.theta.inversion[{i:03d}]", 1, 1e-11, par, "theta0(1/u)", "-theta0(u)/u",
                lambda: (theta0(1 / u, q, cfg), -theta0(u, q, cfg) / u))
    for i in range(n_points):
        r, p = _rc(rng, 0.1, 0.6), _rc(rng, 0.1, 0.6)
        a, z = _rc(rng, 0.5, 1.5), _rc(rng, 0.5, 1.5)
        par = _cdict(r=r, p=p, a=a, z=z)

        def om(x, a=a, r=r, p=p):
            return phase_omega(a, x, r, p, cfg)

        ctx.add(f"c01.phase.inversion[{i:03d}]", 1, 1e-11, par, "Omega_a(z)", "Omega_a(1/z) theta ratio",
                lambda: (om(z), om(1 / z) * theta0(a / z, p, cfg) * theta0(z / a, r, cfg)
                         / (theta0(1 / (z * a), p, cfg) * theta0(z * a, r, cfg))))
        ctx.add(f"c01.phase.shift_up[{i:03d}]", 1, 1e-11, par, "Omega_a(pz)", "theta ratio Omega_a(z)",
                lambda: (om(p * z), theta0(z * a, r, cfg) / theta0(z / a, r, cfg) * om(z)))
        ctx.add(f"c01.phase.shift_down[{i:03d}]", 1, 1e-11, par, "Omega_a(z/p)", "theta ratio Omega_a(z)",
                lambda: (om(z / p), theta0(z / (a * p), r, cfg) / theta0(z * a / p, r, cfg) * om(z)))
        ctx.add(f"c01.gamma.nome_swap[{i:03d}]", 1, 1e-11, par, "Gamma(z;r,p)", "Gamma(z;p,r)",
                lambda: (ell_gamma(z, r, p, cfg), ell_gamma(z, p, r, cfg)))
    for i in range(n_points):
        q, u, m = _rc(rng, 0.1, 0.8), _rc(rng, 0.3, 2.0), int(rng.integers(0, 12))
        par = _cdict(q=q, u=u, m=m)
        ctx.add(f"c01.poch.split[{i:03d}]", 1, 1e-11, par, "(u;q)_m (u q^m;q)", "(u;q)",
                lambda: (poch_fin(u, q, m) * poch(u * q ** m, q, cfg), poch(u, q, cfg)))

    # theta-ratio bracketing with 2% slack; rhs is the nearest point of the bracket
    def draw_bound(rng):
        q = _rc(rng, 0.2, 0.7)
        L = -math.log(abs(q))
        return q, _rc(rng, 0.3, 3.0), rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.05, 0.25) * L

    def bound_case(pt):
        q, z, a, b, eps = pt
        lo, hi = theta_ratio_bounds(z, a, b, q, eps)
        qa, qb_ = abs(q) ** a * cmath.exp(1j * a * cmath.phase(q)), abs(q) ** b * cmath.exp(1j * b * cmath.phase(q))
        val = abs(theta0(z * qa, q, cfg) / theta0(z * qb_, q, cfg))
        return val, min(max(val, lo / 1.02), hi * 1.02)

    for i, pt in enumerate(ctx.draw(2, rng, draw_bound,
                                    lambda pt: theta_ratio_bounds(pt[1], pt[2], pt[3], pt[0], pt[4]), n_points)):
        q, z, a, b, eps = pt
        ctx.add(f"c02.theta_bounds[{i:03d}]", 2, 0.0, _cdict(q=q, z=z, a=a, b=b, eps=eps),
                "|theta ratio|", "bracket x (1 +- 2%)", lambda pt=pt: bound_case(pt))

    p0 = 0.05
    for j, ang in enumerate((0.0, 0.9, 2.3, -1.7)):
        for mod in (0.5, 2.0):
            r = mod * cmath.exp(1j * ang)
            ref = (lambda r=r: poch(p0, r, cfg)) if mod < 1 else (lambda r=r: 1 / poch(p0 / r, 1 / r, cfg))
            ctx.add(f"c03.qa_poch[r={mod}][{j}]", 3, 1e-10, _cdict(r=r, p=p0, k_max=20),
                    "sum_k<=20 c_k(r) p^k", "(p;r)" if mod < 1 else "1/(p/r;1/r)",
                    lambda r=r, ref=ref: (sum(qa_poch_coeff(k, r) * p0 ** k for k in range(21)), ref()))


# ---------------------------------------------------------------- fv (criteria 4-5)

def suite_fv(ctx: SuiteContext, n_res: int = 5, n_cross: int = 5, n_sym: int = 20):
    rng = ctx.rng("fv")
    cfg = ctx.cfg

    def draw_im(rng):
        return ParamPoint.from_mult(_rc(rng, 0.86, 0.92, 0.05), _rc(rng, 0.3, 0.7, 0.5), 1e-3,
                                    _rc(rng, 0.03, 0.08, 0.5), _rc(rng, 0.2, 0.4, 0.5))

    def draw_ipm(rng):
        return ParamPoint.from_mult(_rc(rng, 0.86, 0.92, 0.05), _rc(rng, 0.3, 0.7, 0.5), 1e-3,
                                    _rc(rng, 12, 30, 0.5), _rc(rng, 2.0, 4.0, 0.5))

    def all_m(fn):
        return lambda p: [fn(p, m, cfg) for m in (0, 1, 2)]

    for tag, fn, draw in (("null", residue_Im, draw_im), ("null_flip", residue_Ipm, draw_ipm)):
        pts = ctx.draw(4, rng, draw, all_m(fn), n_res, max_tries=200)
        for i, p in enumerate(pts):
            for m in (0, 1, 2):
                ctx.add(f"c04.residue_{tag}[m={m}][{i}]", 4, 1e-10, _pdict(p) | {"m": m},
                        "circle integral", "closed form", lambda p=p, m=m, fn=fn: fn(p, m, cfg))

    def draw_fv(rng):
        return ParamPoint.from_mult(_rc(rng, 0.9, 0.96, 0.03), _rc(rng, 0.01, 0.05), _rc(rng, 1e-6, 1e-4),
                                    _rc(rng, 1e-3, 5e-3), _rc(rng, 0.1, 0.2))

    pts = ctx.draw(5, rng, draw_fv, lambda p: fv_contour(p, cfg), n_cross + n_sym, max_tries=500)
    for i, p in enumerate(pts[:n_cross]):
        ctx.add(f"c05.series_at0[{i}]", 5, 1e-9, _pdict(p), "fv_contour", "fv_series_at0",
                lambda p=p: (fv_contour(p, cfg), fv_series_at0(p, cfg)))
        pr = p.with_exponents(lam=-p.lam, mu=-p.mu)
        ctx.add(f"c05.series_atinf[{i}]", 5, 1e-9, _pdict(pr), "fv_contour", "fv_series_atinf",
                lambda pr=pr: (fv_contour(pr, cfg), fv_series_atinf(pr, cfg)))
    for i, p in enumerate(pts[n_cross:]):
        pr = p.with_exponents(lam=-p.lam, mu=-p.mu)
        ctx.add(f"c05.u_reflection[{i:02d}]", 5, 1e-10, _pdict(p), "u(lam, mu)", "u(-lam, -mu)",
                lambda p=p, pr=pr: (fv_contour(p, cfg), fv_contour(pr, cfg)))


# ---------------------------------------------------------------- trace (criterion 6)

DEFAULT_TRACE_GRID = {"Q2l": [0.01, 0.02, 0.04], "Q2m": [1e-3, 2e-3, 4e-3]}


def grid_points(base: ParamPoint, grid: dict) -> list:
    """Cartesian product of multiplicative-coordinate values, others from base."""
    keys = sorted(grid)
    pts = [dict()]
    for k in keys:
        pts = [d | {k: v} for d in pts for v in grid[k]]
    return [(d, base.with_mult(**d)) for d in pts] if keys else []


def suite_trace(ctx: SuiteContext):
    cfg = ctx.cfg
    grid = ctx.grid if ctx.grid is not None else DEFAULT_TRACE_GRID
    methods = [m.value for m in TraceMethod]
    for n, (d, p) in enumerate(grid_points(REFERENCE_POINT, grid)):
        tag = ",".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in sorted(d.items()))
        cache: dict = {}

        def val(m, p=p, cache=cache):
            if m not in cache:
                cache[m] = trace(p, m, cfg) if m != "xi" else trace_from_xi(p, cfg)
            return cache[m]

        for i, a in enumerate(methods):
            for b in methods[i + 1:]:
                ctx.add(f"c06.four_methods[{n}][{a}~{b}]", 6, 1e-9, _pdict(p) | {"grid": tag},
                        a, b, lambda a=a, b=b, val=val: (val(a), val(b)))
        ctx.add(f"c06.free_field[{n}]", 6, 1e-9, _pdict(p) | {"grid": tag}, "trace_from_xi", "integral",
                lambda val=val: (val("xi"), val("integral")))
    p = REFERENCE_POINT

    def d_identity():
        ph = shifted_free_field_point(p)
        return D_const(p, cfg), C_ff(ph, cfg) / C_const(ph.mu, ph.k, ph.q, cfg)

    ctx.add("c06.constant_identity", 6, 1e-12, _pdict(p), "D", "C_ff / C (shifted point)", d_identity)


# ---------------------------------------------------------------- symmetry (criterion 7)

def suite_symmetry(ctx: SuiteContext, n_points: int = 10):
    rng = ctx.rng("symmetry")
    cfg = ctx.cfg

    def draw(rng):
        return ParamPoint.from_mult(_rc(rng, 0.85, 0.93, 0.05), _rc(rng, 0.1, 0.6), _rc(rng, 0.02, 0.12),
                                    _rc(rng, 0.1, 0.6), _rc(rng, 0.02, 0.15))

    def check(p):
        normalized_trace(p, cfg)
        normalized_trace(swapped_point(p), cfg)

    for i, p in enumerate(ctx.draw(7, rng, draw, check, n_points, max_tries=200)):
        ctx.add(f"c07.swap[{i}]", 7, 1e-9, _pdict(p), "T~(lam,om,mu,k)", "T~(mu,k,lam,om)",
                lambda p=p: (normalized_trace(p, cfg), normalized_trace(swapped_point(p), cfg)))


# ---------------------------------------------------------------- trig (criterion 8)

def suite_trig(ctx: SuiteContext, n_brute: int = 3):
    rng = ctx.rng("trig")
    cfg = ctx.cfg
    p = REFERENCE_POINT
    for m in TraceMethod:
        ctx.add(f"c08.trig_limit[{m.value}]", 8, 1e-8, _pdict(p) | {"Q2w": [1e-6, 1e-8]},
                f"{m.value} extrapolated to Q2w=0", "trig_m1",
                lambda m=m: (richardson_q2w(lambda pp: trace(pp, m, cfg), p), trig_m1(p.q, p.lam, p.mu)))
    for i in range(n_brute):
        qv = _rc(rng, 1.3, 1.6, 0.3)
        mu, lam = _rc(rng, 0.8, 1.6, 0.5), complex(rng.uniform(1.5, 2.5), rng.uniform(-0.4, 0.4))
        for m in range(4):
            ctx.add(f"c08.verma_brute[m={m}][{i}]", 8, 1e-12, _cdict(q=qv, mu=mu, lam=lam, m=m),
                    "closed_trace", "brute_trace",
                    lambda qv=qv, mu=mu, lam=lam, m=m: (closed_trace(mu, m, lam, QBase(qv)),
                                                        brute_trace(mu, m, lam, QBase(qv), cfg=cfg)))


# ---------------------------------------------------------------- classical (criterion 9)

def suite_classical(ctx: SuiteContext, n_beta: int = 10):
    rng = ctx.rng("classical")
    cfg = ctx.cfg
    c = ClassicalParams()
    eps = (0.2, 0.1, 0.05)
    par = _cdict(Lam=complex(c.Lam), Om=complex(c.Om), mu=c.mu, k=c.k, eps=list(eps))

    def limit_values():
        rhs = classical_rhs(c, cfg)
        vals = [classical_trace(c, e, cfg) for e in eps]
        return richardson_eps(eps, vals, 1), rhs

    ctx.add("c09.classical_limit", 9, 1e-3, par, "trace extrapolated to eps=0", "classical_rhs", limit_values)
    for i in range(n_beta):
        a = complex(rng.uniform(0.3, 2.5), rng.uniform(-1, 1))
        b = complex(rng.uniform(0.3, 2.5), rng.uniform(-1, 1))

        def beta(a=a, b=b):
            pref = (1 - cmath.exp(2j * math.pi * a)) * (1 - cmath.exp(2j * math.pi * b))
            return pochhammer_loop_integral(a, b, None, cfg), pref * complex(mpmath.beta(a, b))

        ctx.add(f"c09.beta[{i}]", 9, 1e-10, _cdict(alpha=a, beta=b), "loop integral", "Beta(alpha, beta)", beta)


# ---------------------------------------------------------------- fock (criterion 10)

def suite_fock(ctx: SuiteContext, n_lists: int = 20):
    rng = ctx.rng("fock")
    for i in range(n_lists):
        c = _rc(rng, 0.5, 1.5, 0.5)
        # weight e^{zc} with modulus in [0.1, 0.45]
        w = _rc(rng, 0.1, 0.45)
        z = cmath.log(w) / c
        n = int(rng.integers(1, 5))
        pairs = tuple((_rc(rng, 0.05, 0.6), _rc(rng, 0.05, 0.6)) for _ in range(n))
        f = ExpFactorList(pairs, c, z)
        par = {"c": pair(c), "z": pair(z), "pairs": [[pair(x), pair(y)] for x, y in pairs], "L": 40}
        ctx.add(f"c10.heisenberg[{i:02d}]", 10, 1e-8, par, "closed form", "level-40 truncation",
                lambda f=f: (heis_trace_closed(f), heis_trace_brute(f, FockTrunc(40), ctx.cfg)))


# ---------------------------------------------------------------- macdonald (criterion 11)

MAC_Q = 1.2
MAC_LAM = 0.37 + 0.21j


def mac_omega(q2w: float, q: float = MAC_Q) -> float:
    """omega with q^{-2 omega} = q2w for real q > 1."""
    return -math.log(q2w) / (2 * math.log(q))


def mac_lam_list(lam=MAC_LAM):
    return [lam, lam + 0.17 - 0.05j, lam - 0.11 + 0.08j]


def suite_macdonald(ctx: SuiteContext):
    cfg = ctx.cfg
    q = QBase(MAC_Q)
    om = mac_omega(1e-4)
    lam = MAC_LAM
    base = {"q": MAC_Q, "Q2w": 1e-4, "lam": pair(lam)}
    for mu, k in ((0, 0), (1, 2)):
        w = IntegrableWeight(mu, k)
        ctx.add(f"c11.chi_routes[{mu},{k}]", 11, 1e-8, base | {"mu": mu, "k": k},
                "u-difference sum", "BGG word sum", lambda w=w: chi_bgg(w, lam, om, q, cfg))
    fcache: dict = {}

    def f_value():
        if "f" not in fcache:
            fcache["f"] = extract_f(q, om, mac_lam_list(lam), cfg)
        return fcache["f"]

    def spread():
        mean, _ = f_value()
        vals = [f_at(x, om, q, cfg) for x in mac_lam_list(lam)]
        worst = max(vals, key=lambda v: abs(v - mean))
        return worst, mean

    ctx.add("c11.f_lambda_spread", 11, 1e-8, base | {"lam_list": [pair(x) for x in mac_lam_list(lam)]},
            "f(lam_i) farthest from mean", "mean f", spread)
    om6 = mac_omega(1e-6)
    ctx.add("c11.f_trig_limit", 11, 1e-5, base | {"Q2w": 1e-6}, "f", "1",
            lambda: (f_at(lam, om6, q, cfg), 1.0))
    for mu, k in ((0, 0), (1, 2), (2, 2)):
        w = IntegrableWeight(mu, k)
        ctx.add(f"c11.fvconj[{mu},{k}]", 11, 1e-7, base | {"mu": mu, "k": k},
                "Jtilde relation", "J",
                lambda w=w: (fvconj_rhs(w, lam, om, q, f_value()[0], cfg), affine_macdonald(w, lam, om, q, cfg)))
    for mu, k in ((1, 2), (2, 2)):
        w = IntegrableWeight(mu, k)
        ctx.add(f"c11.J_reflection[{mu},{k}]", 11, 1e-8, base | {"mu": mu, "k": k}, "J(lam)", "J(-lam)",
                lambda w=w: (affine_macdonald(w, lam, om, q, cfg), affine_macdonald(w, -lam, om, q, cfg)))


# ---------------------------------------------------------------- registry

SUITES: dict = {
    "qcore": suite_qcore,
    "fv": suite_fv,
    "trace": suite_trace,
    "symmetry": suite_symmetry,
    "trig": suite_trig,
    "classical": suite_classical,
    "fock": suite_fock,
    "macdonald": suite_macdonald,
}
SUITE_NAMES = tuple(SUITES) + ("all",)

# criterion number -> (suite, short title, runtime budget in seconds)
CRITERIA = {
    1: ("qcore", "q-series identities", 5.0),
    2: ("qcore", "theta-ratio bracketing", 5.0),
    3: ("qcore", "quasi-analytic Pochhammer coefficients", 2.0),
    4: ("fv", "residue lemmas", 30.0),
    5: ("fv", "u cross-method and reflection", 60.0),
    6: ("trace", "four-route trace agreement and constant identity", 120.0),
    7: ("symmetry", "normalized trace swap symmetry", 60.0),
    8: ("trig", "trigonometric limit and Verma oracle", 60.0),
    9: ("classical", "classical limit and Beta integrals", 120.0),
    10: ("fock", "Heisenberg trace oracle", 10.0),
    11: ("macdonald", "Macdonald polynomials", 300.0),
    12: ("all", "full run budget and determinism", 600.0),
}


def run_suite(name: str, seed: int = 0, cfg: PrecisionCfg = DEFAULT_CFG, tol: float | None = None,
              grid: dict | None = None) -> VerificationReport:
    if name not in SUITE_NAMES:
        raise ValueError(f"unknown suite {name!r}")
    names = list(SUITES) if name == "all" else [name]
    ctx = SuiteContext(seed=seed, cfg=cfg, tol=tol, grid=grid)
    t0 = time.perf_counter()
    for n in names:
        SUITES[n](ctx)
    config = dataclasses.asdict(cfg) | {"tol_override": tol, "grid": grid}
    return VerificationReport(name, ctx.cases, config, seed, time.perf_counter() - t0, ctx.timings)
