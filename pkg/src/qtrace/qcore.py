"""q-series primitives: Pochhammer symbols, theta functions, elliptic gamma,
the phase function, q-numbers and the basic hypergeometric series.

Every routine accepts Python complex numbers, numpy arrays (for vectorized
quadrature) or mpmath scalars (for extended precision).  Only exp, log and abs
need backend dispatch; everything else is plain arithmetic.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import mpmath
import numpy as np

from .errors import (
    ConditionViolated,
    DivergenceError,
    NonConvergentNome,
    PoleError,
    QOverflowError,
    RootOfUnityError,
)

POLE_TOL = 1e-13
_LOG_MAXREAL = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class PrecisionCfg:
    series_tail_tol: float = 1e-16
    max_terms: int = 10_000
    quad_tol: float = 1e-12
    max_quad_nodes: int = 4096
    pole_margin: float = 0.05
    dps: int = 15

    def __post_init__(self):
        for name in ("series_tail_tol", "quad_tol", "pole_margin"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("max_terms", "max_quad_nodes"):
            if getattr(self, name) < 8:
                raise ValueError(f"{name} must be at least 8")

    @property
    def extended(self) -> bool:
        return self.dps > 15

    @property
    def tail_tol(self) -> float:
        # series cut-off actually used; tightened to the working precision
        if self.extended:
            return min(self.series_tail_tol, 10.0 ** (-(self.dps + 3)))
        return self.series_tail_tol

    def with_(self, **kw) -> "PrecisionCfg":
        return replace(self, **kw)


DEFAULT_CFG = PrecisionCfg()


# ---------------------------------------------------------------- backends

def _is_mp(x) -> bool:
    return isinstance(x, (mpmath.mpc, mpmath.mpf))


def cexp(x):
    if isinstance(x, np.ndarray):
        return np.exp(x)
    if _is_mp(x):
        return mpmath.exp(x)
    return cmath.exp(x)


def clog(x):
    if isinstance(x, np.ndarray):
        return np.log(x.astype(complex))
    if _is_mp(x):
        return mpmath.log(x)
    return cmath.log(x)


def cabs(x):
    if isinstance(x, np.ndarray):
        return np.abs(x)
    if _is_mp(x):
        return float(abs(x))
    return abs(x)


def _maxabs(x) -> float:
    if isinstance(x, np.ndarray):
        return float(np.max(np.abs(x))) if x.size else 0.0
    return float(abs(x))


def _minabs(x) -> float:
    if isinstance(x, np.ndarray):
        return float(np.min(np.abs(x))) if x.size else math.inf
    return float(abs(x))


def to_scalar(x, cfg: PrecisionCfg = DEFAULT_CFG):
    """Coerce to the scalar type matching the working precision."""
    if cfg.extended:
        return mpmath.mpc(x) if not _is_mp(x) else x
    if _is_mp(x):
        return complex(x)
    return complex(x)


def as_complex(x) -> complex:
    return complex(x)


# ---------------------------------------------------------------- q-base

class QBase:
    """A nonzero complex q together with its principal logarithm."""

    __slots__ = ("q", "log_q")

    def __init__(self, q, log_q=None):
        if q == 0:
            raise ValueError("q must be nonzero")
        self.q = q
        self.log_q = clog(q) if log_q is None else log_q

    @classmethod
    def from_log(cls, log_q):
        return cls(cexp(log_q), log_q)

    def inverse(self) -> "QBase":
        return QBase(1 / self.q, -self.log_q)

    def to_mp(self) -> "QBase":
        if _is_mp(self.q) and _is_mp(self.log_q):
            return self
        # recompute log q at working precision, keeping the pinned sheet
        qm = mpmath.mpc(self.q)
        lm = mpmath.log(qm)
        turns = round((complex(self.log_q) - complex(lm)).imag / (2 * math.pi))
        return QBase(qm, lm + 2j * mpmath.pi * turns)

    def __repr__(self):
        return f"QBase({complex(self.q)!r})"


def _qbase(q) -> QBase:
    return q if isinstance(q, QBase) else QBase(q)


def qpow(q, x):
    """q**x on the principal branch of log q; the single branch used everywhere."""
    qb = _qbase(q)
    e = x * qb.log_q
    re = e.real if not isinstance(e, np.ndarray) else np.max(np.real(e))
    if not _is_mp(e) and float(re) > _LOG_MAXREAL:
        raise QOverflowError(f"q^x overflows: Re(x log q) = {float(re):.4g}")
    return cexp(e)


# ---------------------------------------------------------------- q-numbers

def qnum(n, q):
    qv = _qbase(q).q
    if abs(qv * qv - 1) < POLE_TOL:
        raise ZeroDivisionError("q^2 = 1 in q-number")
    qq = _qbase(q)
    return (qpow(qq, n) - qpow(qq, -n)) / (qv - 1 / qv)


def qfact(n: int, q):
    out = 1
    for j in range(1, n + 1):
        out = out * qnum(j, q)
    return out


def qfalling(n, l: int, q):
    """[n]_l = [n][n-1]...[n-l+1]."""
    out = 1
    for j in range(l):
        out = out * qnum(n - j, q)
    return out


def qbinom(n: int, m: int, q):
    if not 0 <= m <= n:
        raise ValueError("need 0 <= m <= n")
    return qfact(n, q) / (qfact(m, q) * qfact(n - m, q))


# ---------------------------------------------------------------- Pochhammer

def _check_nome(q, what="nome"):
    if cabs(q) >= 1:
        raise NonConvergentNome(f"|{what}| = {cabs(q):.6g} >= 1")


def poch(u, q, cfg: PrecisionCfg = DEFAULT_CFG, *, _zero_check=False):
    """(u;q) = prod_{n>=0} (1 - u q^n) for |q| < 1."""
    _check_nome(q)
    tol = cfg.tail_tol
    aq = cabs(q)
    out = 1
    term = u
    for n in range(cfg.max_terms):
        fac = 1 - term
        if _zero_check and _minabs(fac) < POLE_TOL:
            raise PoleError(f"vanishing factor 1 - u q^{n}", location=term, source="poch")
        out = out * fac
        term = term * q
        m = _maxabs(term)
        if m < tol and m / (1 - aq) < tol:
            return out
    raise DivergenceError("poch: max_terms exhausted")


def poch_fin(u, q, m: int):
    """(u;q)_m as the finite product; valid for any nome."""
    out = 1
    term = u
    if m >= 0:
        for _ in range(m):
            out = out * (1 - term)
            term = term * q
        return out
    # (u;q)_{-m} = 1/(u q^{-m};q)_m
    return 1 / poch_fin(u * q ** m, q, -m)


def poch_logsum(u, q, cfg: PrecisionCfg = DEFAULT_CFG):
    """(u;q) = exp(-sum_{m>0} u^m / (m (1 - q^m))), valid for |u|, |q| < 1."""
    _check_nome(q)
    if cabs(u) >= 1:
        raise DivergenceError("log-sum form needs |u| < 1")
    s = 0
    um = 1
    qm = 1
    tol = cfg.tail_tol
    for m in range(1, cfg.max_terms):
        um = um * u
        qm = qm * q
        t = um / (m * (1 - qm))
        s = s + t
        if _maxabs(um) < tol * (1 - cabs(u)):
            return cexp(-s)
    raise DivergenceError("poch_logsum: max_terms exhausted")


def poch2(u, q, r, cfg: PrecisionCfg = DEFAULT_CFG, *, _zero_check=False):
    """(u;q,r) = prod_{n,m>=0} (1 - u q^n r^m) for |q|, |r| < 1."""
    _check_nome(q)
    _check_nome(r)
    # outer loop over the smaller nome keeps the longer inner loop vectorized
    if cabs(q) < cabs(r):
        q, r = r, q
    tol = cfg.tail_tol
    aq, ar = cabs(q), cabs(r)
    out = 1
    um = u
    for m in range(cfg.max_terms):
        out = out * poch(um, q, cfg, _zero_check=_zero_check)
        um = um * r
        a = _maxabs(um)
        if a / ((1 - aq) * (1 - ar)) < tol:
            return out
    raise DivergenceError("poch2: max_terms exhausted")


def poch_lattice(c, e: int, q, cfg: PrecisionCfg = DEFAULT_CFG):
    """(c q^e; q) with integer e, computing every factor as 1 - c*q**(e+j).

    When c == 1 and e <= 0 the factor at j = -e is exactly zero, so lattice
    zeros are reproduced without rounding residue.
    """
    _check_nome(q)
    out = 1
    j = 0
    # finite part with nonpositive exponents
    while e + j <= 0:
        out = out * (1 - c * q ** (e + j))
        j += 1
    return out * poch(c * q ** (e + j), q, cfg)


# ---------------------------------------------------------------- theta

def theta0(u, q, cfg: PrecisionCfg = DEFAULT_CFG):
    """theta_0(u;q) = (u;q)(q/u;q)."""
    return poch(u, q, cfg) * poch(q / u, q, cfg)


def jacobi_theta(u, q, cfg: PrecisionCfg = DEFAULT_CFG, *, log_u=None, log_q=None):
    """Jacobi's first theta function with q = e^{2 pi i tau}, u = e^{2 pi i z}."""
    if u == 0:
        raise ValueError("u must be nonzero")
    lq = clog(q) if log_q is None else log_q
    lu = clog(u) if log_u is None else log_u
    pi = mpmath.pi if (_is_mp(lq) or _is_mp(lu)) else math.pi
    tau = lq / (2j * pi)
    z = lu / (2j * pi)
    return 1j * cexp(1j * pi * (tau / 4 - z)) * poch(q, q, cfg) * theta0(u, q, cfg)


# ---------------------------------------------------------------- elliptic gamma / phase

def _lattice_pole(z, r, p, where: str):
    # is z r^i p^j = 1 for some i, j >= 0?  enumerate the few candidates near 1
    ar, ap = cabs(r), cabs(p)
    lim_i = int(min(200, 40 / max(-math.log(ar), 1e-3))) if ar > 0 else 0
    lim_j = int(min(200, 40 / max(-math.log(ap), 1e-3))) if ap > 0 else 0
    ri = 1
    for i in range(lim_i + 1):
        w = z * ri
        for j in range(lim_j + 1):
            if cabs(1 - w) < POLE_TOL:
                raise PoleError(f"{where}: lattice point (i, j) = ({i}, {j})",
                                location=complex(z), source=where)
            w = w * p
            if cabs(w) < 1e-3:
                break
        ri = ri * r
        if cabs(z * ri) < 1e-3:
            break


def ell_gamma(z, r, p, cfg: PrecisionCfg = DEFAULT_CFG):
    """Gamma(z;r,p) = (rp/z; r,p) / (z; r,p)."""
    _check_nome(r)
    _check_nome(p)
    if not isinstance(z, np.ndarray):
        _lattice_pole(z, r, p, "ell_gamma")
    return poch2(r * p / z, r, p, cfg) / poch2(z, r, p, cfg)


def phase_omega(a, z, r, p, cfg: PrecisionCfg = DEFAULT_CFG):
    """Omega_a(z;r,p) = (z/a;r,p)(rp/(za);r,p) / ((za;r,p)(a rp/z;r,p))."""
    _check_nome(r)
    _check_nome(p)
    if not isinstance(z, np.ndarray):
        _lattice_pole(z * a, r, p, "phase_omega")
        _lattice_pole(a * r * p / z, r, p, "phase_omega")
    num = poch2(z / a, r, p, cfg) * poch2(r * p / (z * a), r, p, cfg)
    den = poch2(z * a, r, p, cfg) * poch2(a * r * p / z, r, p, cfg)
    return num / den


# ---------------------------------------------------------------- 2phi1

def phi21(a1, a2, b1, q, z, cfg: PrecisionCfg = DEFAULT_CFG):
    """Basic hypergeometric 2phi1(a1, a2; b1; q, z)."""
    term = 1
    s = 1
    aq = cabs(q)
    for n in range(cfg.max_terms):
        den = (1 - b1 * q ** n) * (1 - q ** (n + 1))
        if cabs(den) < POLE_TOL:
            raise PoleError("2phi1: b1 on q^{-n}", location=b1, source="phi21")
        term = term * (1 - a1 * q ** n) * (1 - a2 * q ** n) / den * z
        if term == 0:
            return s
        if not cabs(term) < 1e290:
            break
        s = s + term
        if n > 4 and cabs(term) < cfg.tail_tol * max(cabs(s), 1e-300):
            if cabs(z) < 1 or aq > 1:
                return s
    raise DivergenceError("2phi1 does not converge (|z| >= 1, nonterminating)")


# ---------------------------------------------------------------- theta-ratio bounds

def _annulus_extrema(q, eps, n_rad=96, n_ang=96):
    aq = abs(q)
    L = -math.log(aq)
    rad = np.linspace(0.0, L, n_rad)
    ang = np.linspace(0.0, 2 * math.pi, n_ang, endpoint=False)
    R, A = np.meshgrid(rad, ang)
    U = np.exp(-R) * np.exp(1j * A)
    vals = np.abs(theta0(U, complex(q)))
    c1p = float(vals.max())
    mask = (R >= eps) & (R <= L - eps)
    if not mask.any():
        raise ConditionViolated("eps exceeds half the annulus width")
    c2p = float(vals[mask].min())
    return c1p, c2p


def theta_ratio_bounds(z, a, b, q, eps):
    """Envelope bounds (lower, upper) on |theta0(z q^a)/theta0(z q^b)|.

    a and b are real exponents; q^a means |q|^a e^{i a arg q}.  The constants
    are C1 = e*max and C2 = min/e over the sampled fundamental annulus.
    """
    aq = abs(q)
    if aq >= 1:
        raise NonConvergentNome("|q| >= 1")
    lq = math.log(aq)
    for ex in (a, b):
        x = math.log(abs(z)) + ex * lq
        # distance of log|z q^ex| to the lattice lq*Z (with lq < 0)
        frac = x / lq
        d = min(abs(x - math.floor(frac) * lq), abs(x - math.ceil(frac) * lq))
        if not d > eps:
            raise ConditionViolated(f"eps-separation fails for exponent {ex}: {d:.3g} <= {eps}")
    c1p, c2p = _annulus_extrema(q, eps)
    c1 = math.e * c1p
    c2 = c2p / math.e
    env = aq ** ((a - b) / 2) * abs(z * z * aq ** (a + b)) ** (-(a - b) / 2)
    return (c2 / c1) * env, (c1 / c2) * env


# ---------------------------------------------------------------- qa coefficients

def qa_poch_coeff(k: int, r):
    """Coefficient of p^k in (p;r): (-1)^k r^{k(k-1)/2}/((1-r)...(1-r^k))."""
    den = 1
    for n in range(1, k + 1):
        f = 1 - r ** n
        if cabs(f) < POLE_TOL:
            raise RootOfUnityError(f"r^{n} = 1")
        den = den * f
    return (-1) ** k * r ** (k * (k - 1) // 2) / den
