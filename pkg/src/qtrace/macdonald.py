"""Affine and elliptic Macdonald polynomials for affine sl2 at Macdonald
parameter 2: Weyl dotted action, dynamical Weyl scalars, the BGG trace sum,
hypergeometric theta functions, the normalizer f and the comparison of the
two polynomial families."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import mpmath

from .errors import ConditionViolated, PoleError, TailNondecay
from .fv import ParamPoint, fv_u
from .qcore import DEFAULT_CFG, POLE_TOL, PrecisionCfg, QBase, cabs, poch, poch2, qnum, qpow, theta0
from .trace import lambda_factor, omega_factor, trace_via_fv

# extended precision for certifying the double-precision defaults
MAC_EXTENDED_CFG = PrecisionCfg(series_tail_tol=1e-30, max_terms=4000, quad_tol=1e-20,
                                max_quad_nodes=4096, pole_margin=0.05, dps=30)


@dataclass(frozen=True)
class IntegrableWeight:
    mu: int
    k: int

    def __post_init__(self):
        if not (isinstance(self.mu, int) and isinstance(self.k, int)):
            raise ConditionViolated("integrable weights have integer mu, k")
        if not self.k >= self.mu >= 0:
            raise ConditionViolated("need k >= mu >= 0")

    @property
    def k_tilde(self) -> int:
        return self.k + 4


@dataclass(frozen=True)
class WeylWord:
    """Alternating word of length l whose leftmost reflection is s_i."""
    i: int
    l: int

    def __post_init__(self):
        if self.i not in (0, 1) or self.l < 0:
            raise ValueError("need i in {0, 1} and l >= 0")

    def letters(self):
        """Reflection indices from left to right."""
        return [self.i if n % 2 == 0 else 1 - self.i for n in range(self.l)]


def words(max_len: int):
    yield WeylWord(0, 0)
    for l in range(1, max_len + 1):
        for i in (0, 1):
            yield WeylWord(i, l)


# ---------------------------------------------------------------- Weyl group

def reflect(i: int, a, K, D):
    """Linear action of s_i on a rho + K Lambda_0 + D delta."""
    if i == 1:
        return -a, K, D
    return 2 * K - a, K, D + a - K


def dotted_by_generators(w: WeylWord, mu, k):
    """w . x = w(x + rho~) - rho~ with rho~ = rho + 2 Lambda_0, by iterating generators."""
    a, K, D = mu + 1, k + 2, 0
    for i in reversed(w.letters()):
        a, K, D = reflect(i, a, K, D)
    return a - 1, K - 2, D


def dotted_action(w: WeylWord, mu, k):
    """(mu', k, Delta') with w . (mu rho + k Lambda_0) = mu' rho + k Lambda_0 + Delta' delta."""
    L = w.l
    h = k + 2
    if L == 0:
        return mu, k, 0
    l = L // 2
    if L % 2 == 0:
        if w.i == 0:
            return mu + 2 * l * h, k, -l * (mu + 1) - l * l * h
        return mu - 2 * l * h, k, l * (mu + 1) - l * l * h
    if w.i == 0:
        return -mu - 2 + 2 * (l + 1) * h, k, (l + 1) * (mu + 1) - (l + 1) ** 2 * h
    return -mu - 2 - 2 * l * h, k, -l * (mu + 1) - l * l * h


def _fin_poch(qb, e, step, n):
    """prod_{m<n} (1 - q^{e + m step})."""
    out = 1
    for m in range(n):
        out = out * (1 - qpow(qb, e + m * step))
    return out


def _ratio(num, den):
    if cabs(den) < POLE_TOL:
        raise PoleError("dynamical Weyl scalar denominator vanishes", location=complex(den), source="dyn_weyl")
    return num / den


def dyn_weyl_scalar(w: WeylWord, mu, k, q):
    """Scalar of the dynamical Weyl operator of w on the zero-weight line of L_2."""
    qb = q if isinstance(q, QBase) else QBase(q)
    L = w.l
    if L == 0:
        return 1
    s = -(2 * k + 4)       # base q^{-2k-4}
    b = 2 * k + 4
    l = L // 2
    if L % 2 == 1:
        n = 2 * l + 1
        if w.i == 1:
            e1, e2 = 2 * mu + 4 + 2 * l * b, 2 * mu + 2 * l * b
        else:
            e1, e2 = -2 * mu + (2 * l + 1) * b, -2 * mu - 4 + (2 * l + 1) * b
        return -qpow(qb, -4 * l - 2) * _ratio(_fin_poch(qb, e1, s, n), _fin_poch(qb, e2, s, n))
    n = 2 * l
    if w.i == 1:
        e1, e2 = -2 * mu + 2 * l * b, -2 * mu - 4 + 2 * l * b
    else:
        e1, e2 = 2 * mu + 4 + (2 * l - 1) * b, 2 * mu + (2 * l - 1) * b
    return qpow(qb, -4 * l) * _ratio(_fin_poch(qb, e1, s, n), _fin_poch(qb, e2, s, n))


def rank_one_scalar(i: int, mu, k, q):
    """A_{s_i}: -[mu+2]/[mu] for s_1; for s_0 the same at mu -> k - mu."""
    m = mu if i == 1 else k - mu
    d = qnum(m, q)
    if cabs(d) < POLE_TOL:
        raise PoleError("rank-one scalar at [m] = 0", location=m, source="rank_one_scalar")
    return -qnum(m + 2, q) / d


def dyn_weyl_composed(w: WeylWord, mu, k, q):
    """Product of rank-one scalars along the shifted weights of a reduced word."""
    out = 1
    m, kk = mu, k
    for i in reversed(w.letters()):
        out = out * rank_one_scalar(i, m, kk, q)
        m, kk, _ = dotted_by_generators(WeylWord(i, 1), m, kk)
    return out


# ---------------------------------------------------------------- u and the BGG sum

def _base(q, cfg):
    qb = q if isinstance(q, QBase) else QBase(q)
    if cabs(qb.q) <= 1:
        raise ConditionViolated("the Macdonald regime needs |q| > 1")
    if cfg.extended:
        mpmath.mp.dps = max(mpmath.mp.dps, cfg.dps)
        qb = qb.to_mp()
    return qb


def _num(x, cfg):
    return mpmath.mpc(x) if cfg.extended else complex(x)


def u_at(q: QBase, lam, om, mu, k, cfg):
    return fv_u(ParamPoint.from_exponents(q, lam, om, mu, k), cfg)


def chi0(w: IntegrableWeight, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG):
    qb = _base(q, cfg)
    kt = w.k_tilde
    p = ParamPoint.from_exponents(qb, _num(lam, cfg), _num(om, cfg), w.mu, kt)
    P = p.Q2k
    q2 = p.qv ** 2
    mu = w.mu
    return (p.pw(-mu + 2) * lambda_factor(p, cfg) * omega_factor(p, P, cfg)
            * poch(P, P, cfg) * poch(q2 * q2 * P, P, cfg)
            / (poch(p.pw(2 * mu + 6) * P, P, cfg) * poch(p.pw(-2 * mu - 2), P, cfg)))


def _check_prefactor(x, what):
    if not isinstance(x, mpmath.mpc) and x != 0 and not 1e-290 < abs(x) < 1e290:
        warnings.warn(f"{what} leaves the double range; use extended precision", RuntimeWarning)


def _bilateral(term, cfg, jmax):
    """sum over j in Z of term(j): grows |j| until both new terms fall below
    the tail tolerance relative to the partial sum."""
    s = term(0)
    tol = cfg.tail_tol
    for j in range(1, (jmax if jmax is not None else 50) + 1):
        a, b = term(j), term(-j)
        s = s + a + b
        if cabs(a) + cabs(b) <= tol * cabs(s):
            return s
    if jmax is None:
        raise TailNondecay("BGG j-series did not settle")
    return s


def chi_route_a(w: IntegrableWeight, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG, jmax=None):
    """chi0 times the bilateral sum of u differences at level k+4."""
    qb = _base(q, cfg)
    lam, om = _num(lam, cfg), _num(om, cfg)
    kt = w.k_tilde
    m2 = w.mu + 2

    def term(j):
        pre = qpow(qb, -2 * j * (om + 2) * (m2 + j * kt))
        _check_prefactor(pre, "BGG prefactor")
        return pre * (u_at(qb, lam, om, -m2 - 2 * j * kt, kt, cfg) - u_at(qb, lam, om, m2 + 2 * j * kt, kt, cfg))

    return chi0(w, lam, om, qb, cfg) * _bilateral(term, cfg, jmax)


def verma_trace(q: QBase, lam, om, mu_w, k_w, delta, cfg):
    """Trace over the Verma module of weight mu_w rho + k_w Lambda_0 + delta delta:
    q^{2 omega delta} times the three-dimensional trace at (mu_w + 1, k_w + 2)."""
    p = ParamPoint.from_exponents(q, lam, om, mu_w + 1, k_w + 2)
    return qpow(q, 2 * om * delta) * trace_via_fv(p, cfg, region="none", continued=True)


def chi_route_b(w: IntegrableWeight, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG, max_len=None):
    """Alternating sum over affine Weyl words of dynamical Weyl scalars times
    Verma-module traces at the dotted-shifted weights (BGG resolution)."""
    qb = _base(q, cfg)
    lam, om = _num(lam, cfg), _num(om, cfg)
    m, K = w.mu + 1, w.k + 2          # weight + rho~
    tol = cfg.tail_tol

    def term(word):
        mp_, kp, dp = dotted_action(word, m, K)
        return (-1) ** word.l * dyn_weyl_scalar(word, m, K, qb) * verma_trace(qb, lam, om, mp_, kp, dp, cfg)

    s = term(WeylWord(0, 0))
    limit = max_len if max_len is not None else 100
    for l in range(1, limit + 1):
        t = term(WeylWord(0, l)) + term(WeylWord(1, l))
        s = s + t
        if l >= 2 and cabs(t) <= tol * cabs(s):
            return s
    if max_len is None:
        raise TailNondecay("BGG word sum did not settle")
    return s


def chi_bgg(w: IntegrableWeight, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG, *, jmax=None):
    """(route a, route b) values of the integrable-module trace."""
    return chi_route_a(w, lam, om, q, cfg, jmax), chi_route_b(w, lam, om, q, cfg)


def chi_routes_residual(w: IntegrableWeight, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG) -> float:
    a, b = chi_bgg(w, lam, om, q, cfg)
    return float(abs(a - b) / abs(a))


# ---------------------------------------------------------------- hypergeometric theta functions

def _Q(qb, mu, kap, cfg):
    P = qpow(qb, -2 * kap)
    q4 = qb.q ** 4
    return (-2j * qpow(qb, 2 * mu - 2) * poch(P, P, cfg) ** 2 * theta0(q4, P, cfg)
            / (theta0(qpow(qb, 2 * mu - 2), P, cfg) * theta0(qpow(qb, 2 * mu + 2), P, cfg)))


def hyp_theta_nonsym(mu, kap, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG, jmax=None):
    """q^{2mu^2/kap} Q(q, mu, kap) sum over j in 2 kap Z + mu of u(j) q^{-(om+2) j^2/(2 kap)}."""
    qb = _base(q, cfg)
    lam, om = _num(lam, cfg), _num(om, cfg)

    def term(n):
        j = mu + 2 * kap * n
        return u_at(qb, lam, om, j, kap, cfg) * qpow(qb, -(om + 2) * j * j / (2 * kap))

    return qpow(qb, 2 * mu * mu / kap) * _Q(qb, mu, kap, cfg) * _bilateral(term, cfg, jmax)


def hyp_theta(mu, kap, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG, jmax=None):
    """Odd part in lam of the non-symmetric hypergeometric theta function."""
    return hyp_theta_nonsym(mu, kap, lam, om, q, cfg, jmax) - hyp_theta_nonsym(mu, kap, -lam, om, q, cfg, jmax)


def _lam_thetas(qb, lam, r, cfg):
    return (theta0(qpow(qb, 2 * lam - 2), r, cfg) * theta0(qpow(qb, 2 * lam), r, cfg)
            * theta0(qpow(qb, 2 * lam + 2), r, cfg))


def elliptic_macdonald(mu, kap, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG, jmax=None):
    """Elliptic Macdonald polynomial from the hypergeometric theta function of weight mu + 2."""
    qb = _base(q, cfg)
    lam, om = _num(lam, cfg), _num(om, cfg)
    r = qpow(qb, -2 * om)
    m2 = mu + 2
    pre = 1j * qpow(qb, -m2 * m2 / kap + om * m2 * m2 / (2 * kap) + 3 * lam) / poch(r, r, cfg) ** 3
    return pre * hyp_theta(m2, kap, lam, om, qb, cfg, jmax) / _lam_thetas(qb, lam, r, cfg)


def elliptic_macdonald_reindexed(mu, kap, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG, jmax=None):
    """Same polynomial from the re-indexed sum over j in Z with its own prefactor."""
    qb = _base(q, cfg)
    lam, om = _num(lam, cfg), _num(om, cfg)
    r = qpow(qb, -2 * om)
    P = qpow(qb, -2 * kap)
    q4 = qb.q ** 4
    pref = (2 * qpow(qb, 2 * mu + 3 * lam + 2) * poch(P, P, cfg) ** 2 * theta0(q4, P, cfg)
            / (theta0(qpow(qb, 2 * mu + 2), P, cfg) * theta0(qpow(qb, 2 * mu + 6), P, cfg)
               * poch(r, r, cfg) ** 3 * _lam_thetas(qb, lam, r, cfg)))
    m2 = mu + 2

    def term(j):
        e = m2 + 2 * kap * j
        return (qpow(qb, -2 * j * (kap * j + m2) * (om + 2))
                * (u_at(qb, lam, om, e, kap, cfg) - u_at(qb, -lam, om, e, kap, cfg)))

    return pref * _bilateral(term, cfg, jmax)


# ---------------------------------------------------------------- normalizer and the comparison

def f_at(lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG):
    qb = _base(q, cfg)
    lam, om = _num(lam, cfg), _num(om, cfg)
    r = qpow(qb, -2 * om)
    chi = chi_route_a(IntegrableWeight(0, 0), lam, om, qb, cfg)
    return chi / (qpow(qb, lam) * poch(qpow(qb, -2 * lam + 2), r, cfg) * poch(qpow(qb, 2 * lam + 2) * r, r, cfg))


def extract_f(q, om, lam_list, cfg: PrecisionCfg = DEFAULT_CFG):
    """(mean of f over lam_list, relative spread max|f_i - mean|/|mean|)."""
    lam_list = list(lam_list)
    if len(set(complex(x) for x in lam_list)) < 3:
        raise ValueError("need at least three distinct lam")
    vals = [f_at(l, om, q, cfg) for l in lam_list]
    mean = sum(vals) / len(vals)
    spread = max(abs(v - mean) for v in vals) / abs(mean)
    return mean, float(spread)


def affine_macdonald(w: IntegrableWeight, lam, om, q, cfg: PrecisionCfg = DEFAULT_CFG):
    """J = chi_{mu,k,2} / chi_{0,0,2}."""
    return chi_route_a(w, lam, om, q, cfg) / chi_route_a(IntegrableWeight(0, 0), lam, om, q, cfg)


def fvconj_rhs(w: IntegrableWeight, lam, om, q, f, cfg: PrecisionCfg = DEFAULT_CFG):
    """Elliptic side of the relation between the two families, divided by f."""
    qb = _base(q, cfg)
    lam, om = _num(lam, cfg), _num(om, cfg)
    kt = w.k_tilde
    mu = w.mu
    r = qpow(qb, -2 * om)
    P = qpow(qb, -2 * kt)
    q2 = qb.q ** 2
    jt = elliptic_macdonald(mu, kt, lam, om, qb, cfg)
    return (jt / f * poch(1 / q2 ** 2, r, cfg) * poch(r, r, cfg) ** 3
            / (poch(1 / q2 ** 2, P, cfg) * poch(P, P, cfg))
            * (poch2(r * q2, r, P, cfg) / poch2(r / q2, r, P, cfg)) ** 2
            * qpow(qb, mu + 4) * poch(qpow(qb, -2 * mu - 6), P, cfg) * poch(qpow(qb, 2 * mu + 2) * P, P, cfg))


def fvconj_residual(w: IntegrableWeight, lam, om, q, f=None, cfg: PrecisionCfg = DEFAULT_CFG,
                    lam_list=None) -> float:
    """|J - rhs| / |J| with f from extract_f when not supplied."""
    if f is None:
        if lam_list is None:
            lam_list = [lam, lam + 0.17 - 0.05j, lam - 0.11 + 0.08j]
        f, _ = extract_f(q, om, lam_list, cfg)
    J = affine_macdonald(w, lam, om, q, cfg)
    rhs = fvconj_rhs(w, lam, om, q, f, cfg)
    return float(abs(J - rhs) / abs(J))
