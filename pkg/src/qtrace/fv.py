"""The Felder-Varchenko function for the three-dimensional representation.

Routes: unit-circle quadrature, the two residue series (around 0 and around
infinity in q^{-2mu}), a residue-corrected continuation to |q| > 1, and the
quasi-analytic continuation of the normalized function to |q^{-2k}| > 1.
Also hosts the two residue lemmas and the phase factor f with its
continuation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any

import mpmath
import numpy as np

from .errors import ConditionViolated, RegionError, TailNondecay
from .qcore import (
    DEFAULT_CFG,
    PrecisionCfg,
    QBase,
    cabs,
    clog,
    phase_omega,
    poch,
    poch2,
    poch_fin,
    qpow,
    theta0,
)
from .quad import CircleContour, integrate_circle, pole_scan

REGION_MODES = ("strict", "ordered", "none")


# ---------------------------------------------------------------- parameters

@dataclass(frozen=True)
class ParamPoint:
    """(q; lambda, omega, mu, k) stored through Q2x = q^{-2x}.

    Build from multiplicative values with `from_mult` (exponents derived by
    the principal log) or from exponents with `from_exponents` (exponents
    kept exactly, multiplicative values recomputed through qpow).  Any
    manipulation of exponents (reflections, shifts, q -> 1/q) must go through
    `from_exponents` so the branch of every prefactor stays pinned.
    """
    q: QBase
    Q2l: Any
    Q2w: Any
    Q2m: Any
    Q2k: Any
    lam: Any
    om: Any
    mu: Any
    k: Any

    @classmethod
    def from_mult(cls, q, Q2l, Q2w, Q2m, Q2k):
        qb = q if isinstance(q, QBase) else QBase(q)
        kinds = (mpmath.mpc, mpmath.mpf)
        mp = isinstance(qb.log_q, kinds) or any(isinstance(x, kinds) for x in (Q2l, Q2w, Q2m, Q2k))
        if mp and not isinstance(qb.log_q, kinds):
            qb = qb.to_mp()
        vals = [mpmath.mpc(x) if mp else complex(x) for x in (Q2l, Q2w, Q2m, Q2k)]
        ex = [-clog(x) / (2 * qb.log_q) for x in vals]
        return cls(qb, *vals, *ex)

    @classmethod
    def from_exponents(cls, q, lam, om, mu, k):
        qb = q if isinstance(q, QBase) else QBase(q)
        ex = (lam, om, mu, k)
        return cls(qb, *[qpow(qb, -2 * x) for x in ex], *ex)

    # -- derived points
    def with_exponents(self, **kw) -> "ParamPoint":
        d = dict(lam=self.lam, om=self.om, mu=self.mu, k=self.k)
        d.update(kw)
        return ParamPoint.from_exponents(self.q, **d)

    def with_mult(self, **kw) -> "ParamPoint":
        d = dict(Q2l=self.Q2l, Q2w=self.Q2w, Q2m=self.Q2m, Q2k=self.Q2k)
        d.update(kw)
        return ParamPoint.from_mult(self.q, **d)

    def reflect_mu(self) -> "ParamPoint":
        return self.with_exponents(mu=-self.mu)

    def to_mp(self) -> "ParamPoint":
        q = self.q.to_mp()
        return ParamPoint(q, *[mpmath.mpc(x) for x in (self.Q2l, self.Q2w, self.Q2m, self.Q2k,
                                                        self.lam, self.om, self.mu, self.k)])

    def to_complex(self) -> "ParamPoint":
        q = QBase(complex(self.q.q), complex(self.q.log_q))
        return ParamPoint(q, *[complex(x) for x in (self.Q2l, self.Q2w, self.Q2m, self.Q2k,
                                                     self.lam, self.om, self.mu, self.k)])

    def for_cfg(self, cfg: PrecisionCfg) -> "ParamPoint":
        if cfg.extended:
            mpmath.mp.dps = max(mpmath.mp.dps, cfg.dps)
            return self.to_mp()
        return self.to_complex()

    @property
    def qv(self):
        return self.q.q

    def pw(self, x):
        """q**x on the pinned branch."""
        return qpow(self.q, x)

    # -- region flags
    def chain(self):
        aq = cabs(self.qv)
        return [cabs(self.Q2w), cabs(self.Q2m), cabs(self.Q2l), cabs(self.Q2k), min(aq, 1 / aq)]

    def good_region(self, rho_sep: float = 10.0, mode: str = "strict") -> bool:
        if mode not in REGION_MODES:
            raise ValueError(f"unknown region mode {mode!r}")
        if mode == "none":
            return True
        c = self.chain()
        need = rho_sep if mode == "strict" else 1.0
        return all(b > 0 and b / max(a, 1e-300) > need if mode == "ordered" else b / max(a, 1e-300) >= need
                   for a, b in zip(c, c[1:]))

    def region_report(self, rho_sep: float = 10.0) -> dict:
        c = self.chain()
        names = ["Q2w<Q2m", "Q2m<Q2l", "Q2l<Q2k", "Q2k<min(|q|,1/|q|)"]
        return {n: b / max(a, 1e-300) for n, a, b in zip(names, c, c[1:])}

    def as_dict(self) -> dict:
        def pair(x):
            x = complex(x)
            return [x.real, x.imag]
        return {"q": pair(self.qv), "Q2l": pair(self.Q2l), "Q2w": pair(self.Q2w),
                "Q2m": pair(self.Q2m), "Q2k": pair(self.Q2k)}


REFERENCE_POINT = ParamPoint.from_mult(0.95, 0.02, 1e-5, 2e-3, 0.15)


def require_region(p: ParamPoint, mode: str, rho_sep: float = 10.0):
    if not p.good_region(rho_sep, mode):
        raise RegionError(f"parameter point outside the {mode} good region: {p.region_report(rho_sep)}")


# ---------------------------------------------------------------- helpers

def _circle(cfg):
    return CircleContour(1.0, 64)


def _integrate(f, cfg):
    return integrate_circle(f, _circle(cfg), cfg)


def scan_fv(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, *, raise_on_hit=True):
    """Pole lattices of the integrand of u on the unit circle."""
    q2 = complex(p.qv) ** 2
    r, k = complex(p.Q2w), complex(p.Q2k)
    fams = [
        (q2, [k], "theta(t q^-2; Q2k) zeros"),
        (q2 * r, [r], "theta(t q^-2; Q2w) zeros"),
        (q2 * r * k, [r, k], "phase lattice inside"),
        (1 / q2, [1 / r, 1 / k], "phase lattice outside"),
    ]
    if abs(q2) > 1:
        # continuation: the crossing poles q^{+-2} are removed by residues
        fams = [(q2 * k, [k], "theta(t q^-2; Q2k) zeros"),
                (q2 * r, [r], "theta(t q^-2; Q2w) zeros"),
                (q2 * r * k, [r, k], "phase lattice inside"),
                (1 / (q2 * r), [1 / r, 1 / k], "phase lattice outside"),
                (1 / (q2 * k), [1 / k], "phase lattice outside")]
    return pole_scan(fams, _circle(cfg), cfg.pole_margin, raise_on_hit=raise_on_hit)


def fv_integrand(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """v(t) = Omega_{q^2}(t; r, p) theta(t q^{2mu}; p)/theta(t q^-2; p)
    * theta(t q^{2lam}; r)/theta(t q^-2; r) with r = Q2w, p = Q2k."""
    q2 = p.qv ** 2
    r, k = p.Q2w, p.Q2k
    a_mu = 1 / p.Q2m
    a_lam = 1 / p.Q2l

    def v(t):
        return (phase_omega(q2, t, r, k, cfg) * theta0(t * a_mu, k, cfg) / theta0(t / q2, k, cfg)
                * theta0(t * a_lam, r, cfg) / theta0(t / q2, r, cfg))
    return v


def fv_prefactor(p: ParamPoint):
    return p.pw(-p.lam * p.mu - p.lam - p.mu - 2)


def _check_nomes(p: ParamPoint, need_q_small=True):
    if need_q_small and cabs(p.qv) >= 1:
        raise RegionError("route needs |q| < 1")
    if cabs(p.Q2k) >= 1 or cabs(p.Q2w) >= 1:
        raise RegionError("route needs |Q2k| < 1 and |Q2w| < 1")


# ---------------------------------------------------------------- u by contour

def fv_contour(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """u by trapezoidal quadrature on |t| = 1 (|q| < 1)."""
    _check_nomes(p)
    scan_fv(p, cfg)
    p = p.for_cfg(cfg)
    return fv_prefactor(p) * _integrate(fv_integrand(p, cfg), cfg)


def fv_residues(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """Residues of v(t) dt/(2 pi i t) at t = q^2 and t = q^{-2}, closed form."""
    q = p.qv
    q2, q4 = q ** 2, q ** 4
    r, k = p.Q2w, p.Q2k
    a_mu, a_lam = 1 / p.Q2m, 1 / p.Q2l     # q^{2mu}, q^{2lam}
    rk = r * k
    g = (poch2(rk / q4, r, k, cfg) / poch2(q4, r, k, cfg)
         * theta0(a_mu * q2, k, cfg) * theta0(a_lam * q2, r, cfg)
         / (poch(k, k, cfg) * poch(r, r, cfg)))
    h = (poch2(1 / q4, r, k, cfg) * poch2(rk, r, k, cfg)
         / (poch(k, k, cfg) * poch2(r, r, k, cfg) * poch2(q4 * rk, r, k, cfg))
         * theta0(a_mu / q2, k, cfg) * theta0(a_lam / q2, r, cfg)
         / (theta0(1 / q4, k, cfg) * theta0(1 / q4, r, cfg)))
    return -g, -h


def fv_continued(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """u for |q| > 1 (with |q^2 Q2k|, |q^2 Q2w| < 1): the unit circle no longer
    separates t = q^2 from t = q^{-2}, so their residues are added back."""
    _check_nomes(p, need_q_small=False)
    if cabs(p.qv) <= 1:
        return fv_contour(p, cfg)
    if cabs(p.qv ** 2 * p.Q2k) >= 1 or cabs(p.qv ** 2 * p.Q2w) >= 1:
        raise RegionError("continuation needs |q^2 Q2k| < 1 and |q^2 Q2w| < 1")
    scan_fv(p, cfg)
    p = p.for_cfg(cfg)
    res_in, res_out = fv_residues(p, cfg)
    return fv_prefactor(p) * (_integrate(fv_integrand(p, cfg), cfg) + res_in - res_out)


def fv_u(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    return fv_contour(p, cfg) if cabs(p.qv) < 1 else fv_continued(p, cfg)


# ---------------------------------------------------------------- series

@dataclass(frozen=True)
class FVSeriesCfg:
    order_mu: int | None = None      # None: stop on the tail rule
    order_omega: int | None = None   # products in Q2w are summed to tolerance

    def __post_init__(self):
        for v in (self.order_mu, self.order_omega):
            if v is not None and v < 1:
                raise ValueError("series orders must be >= 1")


def _sum_series(term, cfg: PrecisionCfg, order=None, settle=3):
    """sum_{n>=0} term(n); exactly `order` terms if given, else until
    `settle` consecutive terms fall below tail_tol relative to the sum."""
    s = 0
    small = 0
    n_max = cfg.max_terms if order is None else order
    for n in range(n_max):
        t = term(n)
        s = s + t
        if order is None:
            if cabs(t) <= cfg.tail_tol * max(cabs(s), 1e-300):
                small += 1
                if small >= settle:
                    return s
            else:
                small = 0
    if order is None:
        raise TailNondecay("series terms do not decay within max_terms")
    return s


def fv_series_at0(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, scfg: FVSeriesCfg = FVSeriesCfg()):
    """u from the residue series at t = q^2 Q2k^n (small |Q2m|).  The series
    itself only needs |Q2k|, |Q2w| < 1, so it also serves |q| > 1."""
    _check_nomes(p, need_q_small=False)
    p = p.for_cfg(cfg)
    q = p.qv
    q2, q4 = q ** 2, q ** 4
    r, k = p.Q2w, p.Q2k
    a_lam = 1 / p.Q2l
    x = p.Q2m / q2                     # q^{-(2mu+2)}
    pref = (-p.pw(-p.lam - p.mu - 2)
            * poch(q4, r, cfg) * poch2(1 / q4, r, k, cfg)
            / (poch(1 / q4, k, cfg) * poch2(q4, r, k, cfg))
            / (poch(k, k, cfg) * poch(r, r, cfg)))
    state = {"prod": 1, "kn": 1}

    def term(n):
        if n > 0:
            state["kn"] = state["kn"] * k
            kl = state["kn"]
            state["prod"] = state["prod"] * theta0(q4 * kl, r, cfg) / theta0(kl, r, cfg)
        kn = state["kn"]
        return x ** n * theta0(a_lam * q2 * kn, r, cfg) / theta0(q4 * kn, r, cfg) * state["prod"]

    s = _sum_series(term, cfg, scfg.order_mu)
    return theta0(q2 / p.Q2m, k, cfg) * p.pw(-p.lam * p.mu) * pref * s


def fv_series_atinf(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG, scfg: FVSeriesCfg = FVSeriesCfg()):
    """u from the residue series at t = q^{-2} Q2k^{-n} (large |Q2m|)."""
    _check_nomes(p, need_q_small=False)
    p = p.for_cfg(cfg)
    q = p.qv
    q2, q4 = q ** 2, q ** 4
    r, k = p.Q2w, p.Q2k
    a_lam = 1 / p.Q2l
    x = q2 / p.Q2m                     # q^{2mu+2}
    pref = (p.pw(-p.lam - 2)
            * poch2(r / q4, k, r, cfg) / poch2(q4 * k * r, k, r, cfg)
            / (poch(k, k, cfg) * poch(r, r, cfg))
            / poch(q4 * k, k, cfg))
    ik = 1 / k
    state = {"prod": 1, "kn": 1}

    def term(n):
        if n > 0:
            state["kn"] = state["kn"] * ik
            kl = state["kn"]
            state["prod"] = state["prod"] * theta0(kl / q4, r, cfg) / theta0(kl, r, cfg)
        kn = state["kn"]
        return x ** n * theta0(a_lam / q2 * kn, r, cfg) / theta0(kn / q4, r, cfg) * state["prod"]

    s = _sum_series(term, cfg, scfg.order_mu)
    return theta0(1 / (p.Q2m * q2), k, cfg) * p.pw(-p.lam * p.mu - p.mu) * pref * s


# ---------------------------------------------------------------- normalization and continuation

def fv_normalizer(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """(Q2k;Q2k)(q^4;Q2k)/((q^{2mu+2};Q2k)(q^{-2mu+2}Q2k;Q2k)), |Q2k| < 1."""
    q2 = p.qv ** 2
    k = p.Q2k
    return (poch(k, k, cfg) * poch(q2 * q2, k, cfg)
            / (poch(q2 / p.Q2m, k, cfg) * poch(p.Q2m * q2 * k, k, cfg)))


def fv_normalized_qa(p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """Continuation of fv_normalizer * u to |q| > 1, |Q2k| > 1, |Q2w| < 1,
    as a unit-circle integral with nome P = q^{2k} = 1/Q2k."""
    if not (cabs(p.qv) > 1 and cabs(p.Q2k) > 1 and cabs(p.Q2w) < 1):
        raise RegionError("fv_normalized_qa needs |q| > 1, |Q2k| > 1, |Q2w| < 1")
    q2c = complex(p.qv) ** 2
    P, r = 1 / complex(p.Q2k), complex(p.Q2w)
    fams = [
        (1 / q2c, [P], "theta(t q^2; P) zeros"),
        (r / q2c, [r], "theta(t q^2; Q2w) zeros"),
        (r * P / q2c, [r, P], "phase lattice inside"),
        (q2c, [1 / r, 1 / P], "phase lattice outside"),
    ]
    pole_scan(fams, _circle(cfg), cfg.pole_margin)
    p = p.for_cfg(cfg)
    q = p.qv
    q2 = q ** 2
    P, r = 1 / p.Q2k, p.Q2w
    a_mu, a_lam = 1 / p.Q2m, 1 / p.Q2l

    def w(t):
        return (phase_omega(1 / q2, t, r, P, cfg) * theta0(t * p.Q2m, P, cfg) / theta0(t * q2, P, cfg)
                * theta0(t * a_lam, r, cfg) / theta0(t * q2, r, cfg))

    pref = (p.pw(-p.lam * p.mu - p.lam - p.mu + 2)
            * poch(1 / q2 ** 2, P, cfg) * poch(P, P, cfg)
            / (poch(p.Q2m / q2, P, cfg) * poch(a_mu / q2 * P, P, cfg)))
    return pref * _integrate(w, cfg)


# ---------------------------------------------------------------- residue lemmas

def _mu_over_k_check(p: ParamPoint, m: int):
    val = 2 * (p.mu + 1) / p.k
    if not complex(val).real > m:
        raise ConditionViolated(f"need Re(2(mu+1)/k) > m: {complex(val).real:.4g} <= {m}")


def residue_Im(p: ParamPoint, m: int, cfg: PrecisionCfg = DEFAULT_CFG):
    """Circle integral of (t q^-2;Q)/(t q^2;Q) theta(t q^{2mu};Q)/theta(t q^-2;Q)
    (1 - t q^{2lam})/(1 - t q^-2) t^m with Q = Q2k, and its closed form."""
    if not (cabs(p.qv) < 1 and cabs(p.Q2k) < 1):
        raise ConditionViolated("need |q| < 1 and |Q2k| < 1")
    _mu_over_k_check(p, m)
    q2c = complex(p.qv) ** 2
    Qc = complex(p.Q2k)
    pole_scan([(q2c * Qc, [Qc], "theta(t q^-2; Q) zeros"),
               (1 / (q2c * Qc), [1 / Qc], "(t q^2; Q) zeros")], _circle(cfg), cfg.pole_margin)
    p = p.for_cfg(cfg)
    q2 = p.qv ** 2
    Q = p.Q2k
    a_mu, a_lam = 1 / p.Q2m, 1 / p.Q2l

    def f(t):
        # (t q^-2;Q)/theta(t q^-2;Q) = 1/(Q q^2/t;Q)
        return (theta0(t * a_mu, Q, cfg) / (poch(t * q2, Q, cfg) * poch(Q * q2 / t, Q, cfg))
                * (1 - t * a_lam) / (1 - t / q2) * t ** m)

    lhs = _integrate(f, cfg)
    x = p.Q2m                            # q^{-2mu}
    Qm = Q ** m
    rhs = (-q2 ** m
           * poch(q2 * a_mu, Q, cfg) * poch(x * q2 * Q, Q, cfg) / (poch(Q, Q, cfg) * poch(q2 * q2, Q, cfg))
           * poch_fin(x / q2 * Q, Q, m) / poch_fin(x * q2 * Q, Q, m)
           * (1 - a_lam * q2 - x * q2 * Qm + a_lam * x * Qm) / (1 - x / q2 * Qm))
    return lhs, rhs


def residue_Ipm(p: ParamPoint, m: int, cfg: PrecisionCfg = DEFAULT_CFG, *, with_residues=True):
    """Flipped lemma with nome P = q^{2k} = 1/Q2k.  The modified contour is
    realized as the unit circle minus the residue at q^2 plus the residue at
    q^{-2}."""
    if not (cabs(p.qv) < 1 and cabs(p.Q2k) > 1):
        raise ConditionViolated("need |q| < 1 and |q^{2k}| < 1")
    _mu_over_k_check(p, m)
    q2c = complex(p.qv) ** 2
    Pc = 1 / complex(p.Q2k)
    pole_scan([(q2c / Pc, [1 / Pc], "(t q^-2; P) zeros"),
               (Pc / q2c, [Pc], "theta(t q^2; P) zeros"),
               (q2c, [], "t = q^2"), (1 / q2c, [], "t = q^-2")], _circle(cfg), cfg.pole_margin)
    p = p.for_cfg(cfg)
    q2 = p.qv ** 2
    q4 = q2 * q2
    P = 1 / p.Q2k
    y = 1 / p.Q2m                        # q^{2mu}
    a_lam = 1 / p.Q2l

    def f(t):
        # (t q^2;P)/theta(t q^2;P) = 1/(P/(t q^2);P)
        return (theta0(t * p.Q2m, P, cfg) / (poch(t / q2, P, cfg) * poch(P / (t * q2), P, cfg))
                * (1 - t * a_lam) / (1 - t * q2) * t ** m)

    lhs = _integrate(f, cfg)
    if with_residues:
        g = (poch(q4, P, cfg) / poch(P, P, cfg) * theta0(q2 * p.Q2m, P, cfg) / theta0(q4, P, cfg)
             * (1 - a_lam * q2) / (1 - q4) * q2 ** m)
        h = theta0(p.Q2m / q2, P, cfg) * (1 - a_lam / q2) * q2 ** (-m) / (poch(1 / q4, P, cfg) * poch(P, P, cfg))
        lhs = lhs + g - h
    Pm = P ** m
    rhs = (-q2 ** (-m)
           * poch(p.Q2m / q2, P, cfg) * poch(y / q2 * P, P, cfg) / (poch(1 / q4, P, cfg) * poch(P, P, cfg))
           * poch_fin(y * q2 * P, P, m) / poch_fin(y / q2 * P, P, m)
           * (1 - a_lam / q2 - y / q2 * Pm + a_lam * y * Pm) / (1 - y * q2 * Pm))
    return lhs, rhs


# ---------------------------------------------------------------- phase factor f

def phase_f(t, p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """Double-Pochhammer quotient f with nomes (Q2w, Q2k), |Q2k| < 1."""
    if cabs(p.Q2k) >= 1 or cabs(p.Q2w) >= 1:
        raise RegionError("phase_f needs |Q2k|, |Q2w| < 1")
    q2 = p.qv ** 2
    r, k = p.Q2w, p.Q2k
    num = poch2(t / q2 * r, r, k, cfg) * poch2(r * k / (t * q2), r, k, cfg)
    den = poch2(t * q2 * r, r, k, cfg) * poch2(q2 * r * k / t, r, k, cfg)
    return num / den * _phase_f_lam(t, p, cfg)


def _phase_f_lam(t, p, cfg):
    q2 = p.qv ** 2
    r = p.Q2w
    return (poch(t / p.Q2l * r, r, cfg) * poch(p.Q2l * r / t, r, cfg)
            / (poch(t / q2 * r, r, cfg) * poch(q2 * r / t, r, cfg)))


def phase_f_qa(t, p: ParamPoint, cfg: PrecisionCfg = DEFAULT_CFG):
    """Continuation of f to |Q2k| > 1, with nomes (Q2w, P = 1/Q2k)."""
    if cabs(p.Q2k) <= 1 or cabs(p.Q2w) >= 1:
        raise RegionError("phase_f_qa needs |Q2k| > 1, |Q2w| < 1")
    q2 = p.qv ** 2
    r, P = p.Q2w, 1 / p.Q2k
    num = poch2(t * q2 * r * P, r, P, cfg) * poch2(q2 * r / t, r, P, cfg)
    den = poch2(t / q2 * r * P, r, P, cfg) * poch2(r / (t * q2), r, P, cfg)
    return num / den * _phase_f_lam(t, p, cfg)


def _laurent_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return out


def phase_f_coeffs(p: ParamPoint, order: int = 2):
    """Coefficients f_{n,m} (n <= order) of f in powers of Q2w and t, as
    rational functions of q, q^{2lam}, Q2k; valid on both sides of |Q2k| = 1.

    Built from log (x r; r, Q) = -sum_{s>=1} x^s/s * sum_{i>=1} r^{is}/(1 - Q^s)
    and log (x r; r) = -sum_s x^s/s * sum_i r^{is}, truncated at r^order.
    """
    q2 = p.qv ** 2
    Q = p.Q2k
    al = 1 / p.Q2l
    # (coefficient c, t-power e, sign, double?) for x = c t^e
    factors = [
        (1 / q2, 1, +1, True), (Q / q2, -1, +1, True),
        (q2, 1, -1, True), (Q * q2, -1, -1, True),
        (al, 1, +1, False), (1 / al, -1, +1, False),
        (1 / q2, 1, -1, False), (q2, -1, -1, False),
    ]
    # log f as {n: {m: coeff}}
    logf = {n: {} for n in range(1, order + 1)}
    for c, e, sgn, dbl in factors:
        for s in range(1, order + 1):
            w = (1 / (1 - Q ** s)) if dbl else 1
            for i in range(1, order // s + 1):
                n = i * s
                logf[n][e * s] = logf[n].get(e * s, 0) - sgn * c ** s / s * w
    # exponentiate the truncated series in r
    out = {0: {0: 1}}
    for n in range(1, order + 1):
        # n f_n = sum_{j=1}^n j L_j f_{n-j}
        acc: dict = {}
        for j in range(1, n + 1):
            prod = _laurent_mul(logf[j], out[n - j])
            for m, v in prod.items():
                acc[m] = acc.get(m, 0) + j * v / n
        out[n] = acc
    return out


def normalized_u_coeffs(p: ParamPoint, order: int = 2):
    """Coefficients in Q2w of fv_normalizer * u, from the first residue lemma
    and the rational f_{n,m}; evaluable on both sides of |q| = 1, |Q2k| = 1."""
    fc = phase_f_coeffs(p, order)
    q2 = p.qv ** 2
    Q = p.Q2k
    x = p.Q2m
    a_lam = 1 / p.Q2l
    pref = -fv_prefactor(p)
    out = []
    for n in range(order + 1):
        s = 0
        for m, f in fc[n].items():
            Qm = Q ** m
            R = (q2 ** m * poch_fin(x / q2 * Q, Q, m) / poch_fin(x * q2 * Q, Q, m)
                 * (1 - a_lam * q2 - x * q2 * Qm + a_lam * x * Qm) / (1 - x / q2 * Qm))
            s = s + R * f
        out.append(pref * s)
    return out


def q2w_coefficients(fn, p: ParamPoint, n_coef: int = 3, h: float = 1e-6, n_pts: int | None = None):
    """Taylor coefficients of Q2w -> fn(p with Q2w = x) at 0, by solving the
    Vandermonde system on x in {h, 2h, ...}.  Use extended precision: the
    j-th coefficient loses about j*log10(1/h) digits."""
    n_pts = n_pts or n_coef + 3
    xs = [mpmath.mpf(h) * (j + 1) for j in range(n_pts)]
    vals = [mpmath.mpc(fn(p.with_mult(Q2w=x))) for x in xs]
    A = mpmath.matrix([[x ** j for j in range(n_pts)] for x in xs])
    c = mpmath.lu_solve(A, mpmath.matrix(vals))
    return [c[j] for j in range(n_coef)]
