"""The trace function of the three-dimensional intertwiner by four routes,
its normalized form and symmetry, and its trigonometric and classical limits.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import BranchHazard, ConditionViolated, RegionError
from .fv import (
    FVSeriesCfg,
    ParamPoint,
    _integrate,
    _sum_series,
    fv_contour,
    fv_u,
    fv_integrand,
    require_region,
    scan_fv,
)
from .qcore import (
    DEFAULT_CFG,
    PrecisionCfg,
    QBase,
    cabs,
    phase_omega,
    poch,
    poch2,
    poch_lattice,
    qpow,
    theta0,
)
from .quad import CircleContour, JacksonCycle, jackson_sum, pole_scan, tanh_sinh


class TraceMethod(enum.Enum):
    INTEGRAL = "integral"
    FV = "fv"
    SERIES = "series"
    JACKSON = "jackson"


# ---------------------------------------------------------------- shared prefactors

def lambda_factor(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """(q^-4;r) / (theta(q^{2lam};r) (q^{2lam-2} r;r) (q^{-2lam-2};r)), r = Q2w."""
    q2 = p.qv ** 2
    r = p.Q2w
    a = 1 / p.Q2l
    return poch(1 / q2 ** 2, r, cfg) / (theta0(a, r, cfg) * poch(a / q2 * r, r, cfg) * poch(p.Q2l / q2, r, cfg))


def omega_factor(p: ParamPoint, nome, cfg: PrecisionCfg = DEFAULT_CFG):
    """(q^2 r; r, N)^2 / (q^-2 r; r, N)^2."""
    q2 = p.qv ** 2
    r = p.Q2w
    return (poch2(q2 * r, r, nome, cfg) / poch2(r / q2, r, nome, cfg)) ** 2


def _mu_k_factor(p: ParamPoint, cfg):
    """(Q2k;Q2k)(q^4 Q2k;Q2k) / ((q^{-2mu+2};Q2k)(q^{2mu+2} Q2k;Q2k))."""
    q2 = p.qv ** 2
    k = p.Q2k
    return (poch(k, k, cfg) * poch(q2 * q2 * k, k, cfg)
            / (poch(p.Q2m * q2, k, cfg) * poch(q2 / p.Q2m * k, k, cfg)))


def _prep(p: ParamPoint, cfg, region):
    if cabs(p.qv) >= 1 or cabs(p.Q2k) >= 1 or cabs(p.Q2w) >= 1:
        raise RegionError("trace routes need |q|, |Q2k|, |Q2w| < 1")
    require_region(p, region)
    return p.for_cfg(cfg)


# ---------------------------------------------------------------- four routes

def trace_integral(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, *, region: str = "ordered"):
    """Contour-integral closed form of the trace (unit circle)."""
    pr = p.reflect_mu()
    scan_fv(pr, cfg)
    p = _prep(p, cfg, region)
    pr = p.reflect_mu()
    pref = (p.pw(p.lam * p.mu - p.lam + 2) * lambda_factor(p, cfg) * _mu_k_factor(p, cfg)
            * omega_factor(p, p.Q2k, cfg))
    return pref * _integrate(fv_integrand(pr, cfg), cfg)


def trace_via_fv(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, *, region: str = "ordered",
                 continued: bool = False):
    """Trace as a prefactor times u(q, lam, omega, -mu, k).

    continued=True admits |q| > 1, with u taken from its residue continuation;
    this is how traces at integral weights with |q| > 1 are evaluated.
    """
    if continued:
        require_region(p, region)
        p = p.for_cfg(cfg)
        u = fv_u(p.reflect_mu(), cfg)
    else:
        p = _prep(p, cfg, region)
        u = fv_contour(p.reflect_mu(), cfg)
    pref = p.pw(-p.mu + 4) * lambda_factor(p, cfg) * omega_factor(p, p.Q2k, cfg) * _mu_k_factor(p, cfg)
    return pref * u


def trace_series(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, *, region: str = "ordered",
                 scfg: FVSeriesCfg = FVSeriesCfg()):
    """Explicit series in q^{(-2mu+2)n} from the Jackson sum."""
    p = _prep(p, cfg, region)
    q2 = p.qv ** 2
    q4 = q2 * q2
    r, k = p.Q2w, p.Q2k
    a = 1 / p.Q2l
    pref = (poch(1 / q4, r, cfg) / poch(r, r, cfg) * omega_factor(p, k, cfg)
            * poch2(r / q4, r, k, cfg) / poch2(q4 * r * k, k, r, cfg)
            * p.pw(p.lam * p.mu - p.lam + 2) * lambda_factor(p, cfg) / poch(1 / q4, r, cfg)
            * poch(p.Q2m / q2, k, cfg) / poch(p.Q2m * q2, k, cfg))
    x = p.Q2m * q2                      # q^{-2mu+2}
    ik = 1 / k                          # q^{2k}
    state = {"prod": 1, "kn": 1}

    def term(n):
        if n > 0:
            state["kn"] = state["kn"] * ik
            kl = state["kn"]
            state["prod"] = state["prod"] * theta0(kl / q4, r, cfg) / theta0(kl, r, cfg)
        kn = state["kn"]
        return x ** n * theta0(a / q2 * kn, r, cfg) / theta0(kn / q4, r, cfg) * state["prod"]

    return pref * _sum_series(term, cfg, scfg.order_mu)


def _jackson_integral(p: ParamPoint, kappa, a_exp, cfg: PrecisionCfg, cycle_window=(-4, 4)):
    """sum_n J(q^-2 N^n) with N = q^{-2 kappa} and
    J(t) = Omega_{q^2}(t; r, N) t^{a} theta(t q^2; N)/theta(t q^-2; N)
           * theta(t q^{2lam}; r)/theta(t q^-2; r).

    Powers t_n^a are s^a (N^a)^n on the pinned q-branch.  The zero of
    theta(t q^2; N) against the pole of Omega is cancelled analytically:
    theta(t q^2;N)/(t q^2;r,N) = (N/(t q^2);N)/(t q^2 r;r,N), and
    (N/(t q^2);N) = (N^{1-n};N) is evaluated on the exact lattice, so every
    node with n >= 1 contributes exactly zero.
    """
    q2 = p.qv ** 2
    r = p.Q2w
    N = qpow(p.q, -2 * kappa)
    sa = qpow(p.q, -2 * a_exp)            # (q^-2)^a
    Na = qpow(p.q, -2 * kappa * a_exp)    # N^a
    al = 1 / p.Q2l

    def J(t, n):
        lat = poch_lattice(1, 1 - n, N, cfg)
        if lat == 0:
            return 0
        om = (poch2(t / q2, r, N, cfg) * poch2(r * N / (q2 * t), r, N, cfg)
              / (poch2(t * q2 * r, r, N, cfg) * poch2(q2 * r * N / t, r, N, cfg)))
        return (om * lat * sa * Na ** n / theta0(t / q2, N, cfg)
                * theta0(t * al, r, cfg) / theta0(t / q2, r, cfg))

    return jackson_sum(J, JacksonCycle(1 / q2, N, *cycle_window), cfg)


def D_const(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    q2 = p.qv ** 2
    k, r = p.Q2k, p.Q2w
    return (poch(q2 * q2 * k, k, cfg) * poch(1 / q2 ** 2, r, cfg) / poch(k, k, cfg)
            * omega_factor(p, k, cfg)
            * p.pw(p.lam * p.mu - p.lam + 2 - (2 * p.mu + 2) / p.k)
            * lambda_factor(p, cfg) / poch(1 / q2 ** 2, r, cfg)
            * poch(p.Q2m / q2, k, cfg) / poch(p.Q2m * q2, k, cfg))


def trace_jackson(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, *, region: str = "ordered",
                  window=(-4, 4)):
    """Trace as D(lam, mu) times the Jackson sum with period Q2k."""
    p = _prep(p, cfg, region)
    return D_const(p, cfg) * _jackson_integral(p, p.k, -(p.mu + 1) / p.k, cfg, window)


def C_const(mu, k, q, cfg: PrecisionCfg = DEFAULT_CFG):
    """Highest-weight matrix element of the free-field intertwiner."""
    qb = q if isinstance(q, QBase) else QBase(q)
    kap = k + 2
    N = qpow(qb, -2 * kap)
    qv = qb.q
    return (-(1 + qv ** 2) * qpow(qb, -2 * mu - 3 + (4 * mu + 4) / kap)
            * poch(N, N, cfg) / poch(qpow(qb, -4 * mu - 4), N, cfg)
            * poch(qpow(qb, -4 * mu), N, cfg) / poch(qv ** 4, N, cfg))


def C_ff(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """Constant of the free-field Jackson expansion at (lam, omega, mu, k)."""
    kap = p.k + 2
    N = qpow(p.q, -2 * kap)
    qv = p.qv
    return (1 / (qv - 1 / qv) * p.pw(2 * p.lam * p.mu - 2 * p.mu - 2) * lambda_factor(p, cfg)
            * omega_factor(p, N, cfg))


def xi_ff(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, window=(-4, 4)):
    """Free-field trace with kappa = k + 2 and nome q^{-2 kappa}; the bilateral
    sum over q^-2 N^n is the same for the period q^{2 kappa}."""
    p = p.for_cfg(cfg)
    kap = p.k + 2
    return C_ff(p, cfg) * _jackson_integral(p, kap, -2 * (p.mu + 1) / kap, cfg, window)


def shifted_free_field_point(p: ParamPoint) -> ParamPoint:
    """(lam, omega, (mu-1)/2, k-2): the point at which the free-field trace
    reproduces the trace at (lam, omega, mu, k)."""
    return p.with_exponents(mu=(p.mu - 1) / 2, k=p.k - 2)


def trace_from_xi(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    ph = shifted_free_field_point(p)
    return xi_ff(ph, cfg) / C_const(ph.mu, ph.k, ph.q, cfg)


def constant_identity_residual(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG) -> float:
    """|D - C_ff(shifted) / C_const(shifted)| / |D|."""
    ph = shifted_free_field_point(p)
    d = D_const(p, cfg)
    other = C_ff(ph, cfg) / C_const(ph.mu, ph.k, ph.q, cfg)
    return float(abs(d - other) / abs(d))


def trace(p: ParamPoint, method: TraceMethod | str = TraceMethod.INTEGRAL, cfg: PrecisionCfg = DEFAULT_CFG,
          **kw):
    m = TraceMethod(method) if not isinstance(method, TraceMethod) else method
    fn = {TraceMethod.INTEGRAL: trace_integral, TraceMethod.FV: trace_via_fv,
          TraceMethod.SERIES: trace_series, TraceMethod.JACKSON: trace_jackson}[m]
    return fn(p, cfg, **kw)


def four_method_deviation(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, **kw):
    vals = {m.value: trace(p, m, cfg, **kw) for m in TraceMethod}
    xs = list(vals.values())
    dev = max(abs(a - b) / abs(b) for a in xs for b in xs)
    return float(dev), vals


# ---------------------------------------------------------------- symmetry

def weyl_denominator(q, lam, om, cfg: PrecisionCfg = DEFAULT_CFG):
    """q^lam (r;r) theta(q^{-2lam}; r) with r = q^{-2 om}."""
    qb = q if isinstance(q, QBase) else QBase(q)
    r = qpow(qb, -2 * om)
    if cabs(r) >= 1:
        raise RegionError("weyl_denominator needs |q^{-2 omega}| < 1")
    if lam == 0:
        return 0 * r
    return qpow(qb, lam) * poch(r, r, cfg) * theta0(qpow(qb, -2 * lam), r, cfg)


def trace_qa(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """Continued trace for |q| > 1, |Q2w| < 1, |Q2k| > 1 (nome P = 1/Q2k)."""
    if not (cabs(p.qv) > 1 and cabs(p.Q2k) > 1 and cabs(p.Q2w) < 1):
        raise RegionError("trace_qa needs |q| > 1, |Q2k| > 1, |Q2w| < 1")
    q2c = complex(p.qv) ** 2
    Pc, rc = 1 / complex(p.Q2k), complex(p.Q2w)
    pole_scan([(1 / q2c, [Pc], "theta(t q^2; P) zeros"), (rc / q2c, [rc], "theta(t q^2; Q2w) zeros"),
               (rc * Pc / q2c, [rc, Pc], "phase lattice inside"), (q2c, [1 / rc, 1 / Pc], "phase lattice outside")],
              CircleContour(), cfg.pole_margin)
    p = p.for_cfg(cfg)
    q2 = p.qv ** 2
    q4 = q2 * q2
    P, r = 1 / p.Q2k, p.Q2w
    y = 1 / p.Q2m                                   # q^{2mu}
    al = 1 / p.Q2l

    def w(t):
        return (phase_omega(1 / q2, t, r, P, cfg) * theta0(t * y, P, cfg) / theta0(t * q2, P, cfg)
                * theta0(t * al, r, cfg) / theta0(t * q2, r, cfg))

    pref = (p.pw(p.lam * p.mu - p.lam + 2) * lambda_factor(p, cfg) / (1 - q4)
            * poch(1 / q4, P, cfg) * poch(P, P, cfg) / (poch(y / q2, P, cfg) * poch(p.Q2m / q2 * P, P, cfg))
            * (poch2(r / q2 * P, r, P, cfg) / poch2(q2 * r * P, r, P, cfg)) ** 2)
    return pref * _integrate(w, cfg)


def inverted_point(p: ParamPoint) -> ParamPoint:
    """(1/q, -lam, -omega, mu, k) with log(1/q) = -log q."""
    return ParamPoint.from_exponents(p.q.inverse(), -p.lam, -p.om, p.mu, p.k)


def swapped_point(p: ParamPoint) -> ParamPoint:
    return ParamPoint.from_exponents(p.q, p.mu, p.k, p.lam, p.om)


def normalized_trace(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """delta_q(lam, omega) times the continued trace at (1/q, -lam, -omega, mu, k)."""
    return weyl_denominator(p.q, p.lam, p.om, cfg) * trace_qa(inverted_point(p), cfg)


def symmetry_residual(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG) -> float:
    a = normalized_trace(p, cfg)
    b = normalized_trace(swapped_point(p), cfg)
    return float(abs(a - b) / abs(a))


# ---------------------------------------------------------------- trigonometric limit

def trig_m1(q, lam, mu):
    """Trigonometric trace on the Verma module of highest weight mu - 1."""
    qb = q if isinstance(q, QBase) else QBase(q)
    x = qpow(qb, -2 * lam)
    y = qpow(qb, -2 * mu)
    q2 = qb.q ** 2
    den = (1 - y * q2) * (1 - x / q2) * (1 - x)
    if cabs(den) < 1e-13:
        from .errors import PoleError
        raise PoleError("trig_m1 denominator vanishes", location=complex(den), source="trig_m1")
    return qpow(qb, lam * mu - lam) * (1 - y * q2 - x * q2 + x * y) / den


def richardson_q2w(fn, p: ParamPoint, hs=(1e-6, 1e-8)):
    """Linear extrapolation Q2w -> 0 from two small nomes."""
    h1, h2 = hs
    v1 = fn(p.with_mult(Q2w=h1))
    v2 = fn(p.with_mult(Q2w=h2))
    return v2 - h2 * (v1 - v2) / (h1 - h2)


def trig_limit_residual(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, hs=(1e-6, 1e-8),
                        method: TraceMethod | str = TraceMethod.INTEGRAL) -> float:
    lim = richardson_q2w(lambda pp: trace(pp, method, cfg), p, hs)
    ref = trig_m1(p.q, p.lam, p.mu)
    return float(abs(lim - ref) / abs(ref))


# ---------------------------------------------------------------- classical limit

@dataclass(frozen=True)
class ClassicalParams:
    Lam: complex = -0.4 + 0.1j
    Om: complex = 1.0 + 0.3j
    mu: float = 0.5
    k: float = -5.0

    def __post_init__(self):
        if not -1 < complex(self.mu).real < 1:
            raise ConditionViolated("need -1 < Re mu < 1")
        if not complex(self.k).real < 0:
            raise ConditionViolated("need Re k < 0")
        if abs(cmath.exp(-2 * self.Om)) >= 1:
            raise ConditionViolated("need |e^{-2 Omega}| < 1")

    @property
    def nome(self):
        return cmath.exp(-2 * self.Om)

    def point(self, eps: float) -> ParamPoint:
        """q = e^{-|eps|}, lam = Lam/eps, omega = Om/eps on the pinned branch."""
        e = -abs(eps)
        return ParamPoint.from_exponents(QBase.from_log(complex(e)), self.Lam / e, self.Om / e, self.mu, self.k)


def _logpoch(x, N, cfg):
    """sum_n log(1 - x N^n) with principal logs (analytic branch of log (x;N))."""
    s = 0
    term = x
    for _ in range(cfg.max_terms):
        s = s + np.log(1 - term)
        term = term * N
        if np.max(np.abs(term)) < cfg.tail_tol:
            return s
    raise RegionError("log-Pochhammer did not converge")


def classical_rhs(c: ClassicalParams, cfg: PrecisionCfg = DEFAULT_CFG):
    """Classical trace as an integral over the unit circle in the angle
    variable; the only singularity on the circle is the algebraic one at
    t = 1, of order -2/k - 1, handled by the double-exponential rule."""
    N = c.nome
    Lam, mu, k = complex(c.Lam), complex(c.mu), complex(c.k)
    e2L = cmath.exp(2 * Lam)
    # theta(t e^{2Lam}; N) must not vanish on |t| = 1
    if abs(math.log(abs(e2L)) % (-math.log(abs(N)))) < cfg.pole_margin:
        raise BranchHazard("theta(t e^{2 Lam}; N) has a zero near the unit circle")
    a1 = -(mu + 1) / k
    a2 = (mu - 1) / k

    def g(theta, da, db):
        left = theta < math.pi
        # accurate 1 - t and 1 - 1/t near t = 1
        one_m_t = np.where(left, -2j * np.sin(da / 2) * np.exp(0.5j * da),
                           2j * np.sin(db / 2) * np.exp(-0.5j * db))
        one_m_it = np.conj(one_m_t) if np.isrealobj(theta) else None
        t = np.exp(1j * theta)
        core = (np.exp(a1 * np.log(one_m_t) + a2 * np.log(one_m_it))
                * theta0(t * e2L, N, cfg)
                / (one_m_t * np.exp(_logpoch(t * N, N, cfg) + _logpoch(N / t, N, cfg)))
                * np.exp(-(2 / k) * (_logpoch(t * N, N, cfg) + _logpoch(N / t, N, cfg))))
        return core

    integral = tanh_sinh(g, 0.0, 2 * math.pi, cfg) / (2 * math.pi)
    gam = (complex(mpmath.gamma((mu - 1) / k)) * complex(mpmath.gamma((k - mu - 1) / k))
           / complex(mpmath.gamma(-2 / k)))
    lnn = _logpoch(N, N, cfg)
    pref = (-cmath.exp(mu * Lam - Lam) * cmath.exp((1 + 4 / k) * lnn)
            / (theta0(e2L, N, cfg) * poch(e2L * N, N, cfg) * poch(1 / e2L, N, cfg)) * gam)
    return pref * integral


def classical_trace(c: ClassicalParams, eps: float, cfg: PrecisionCfg = DEFAULT_CFG):
    cfg = cfg.with_(max_quad_nodes=max(cfg.max_quad_nodes, 1 << 16))
    return trace_integral(c.point(eps), cfg, region="none")


def richardson_eps(eps, vals, order: int = 1):
    """Polynomial extrapolation to eps = 0 through the order+1 smallest |eps|."""
    pts = sorted(zip((abs(e) for e in eps), vals), key=lambda x: x[0])[: order + 1]
    if len(pts) < order + 1:
        raise ValueError("need order+1 values of eps")
    # Neville at x = 0
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    for j in range(1, len(xs)):
        ys = [(xs[i + j] * ys[i] - xs[i] * ys[i + 1]) / (xs[i + j] - xs[i]) for i in range(len(ys) - 1)]
    return ys[0]


def classical_limit_residual(c: ClassicalParams, eps_list=(0.2, 0.1, 0.05), cfg: PrecisionCfg = DEFAULT_CFG,
                             *, order: int = 1):
    """Returns (extrapolated relative residual, raw residuals per eps in
    decreasing order, rhs).  The default extrapolant is first order in eps
    through the two smallest |eps|."""
    rhs = classical_rhs(c, cfg)
    eps = sorted((abs(e) for e in eps_list), reverse=True)
    vals = [classical_trace(c, e, cfg) for e in eps]
    raw = [float(abs(v - rhs) / abs(rhs)) for v in vals]
    ext = richardson_eps(eps, vals, order)
    return float(abs(ext - rhs) / abs(rhs)), raw, rhs
