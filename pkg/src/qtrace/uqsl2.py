"""Trigonometric U_q(sl2) machinery: intertwiner coefficients, a truncated
Verma-module trace oracle, and the closed-form trace."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConditionViolated, PoleError, TailNondecay
from .qcore import DEFAULT_CFG, POLE_TOL, PrecisionCfg, QBase, qfalling, qnum, qpow


def _qb(q) -> QBase:
    return q if isinstance(q, QBase) else QBase(q)


@dataclass(frozen=True)
class VermaTrunc:
    """Verma module M_mu truncated to f^j v, 0 <= j <= N."""
    mu: complex
    N: int
    q: QBase

    def e_coeff(self, j):
        """e f^j v = [mu-j+1][j] f^{j-1} v."""
        return qnum(self.mu - j + 1, self.q) * qnum(j, self.q)

    def h_eig(self, j):
        return qpow(self.q, self.mu - 2 * j)

    def e_matrix(self):
        n = self.N + 1
        m = np.zeros((n, n), dtype=complex)
        for j in range(1, n):
            m[j - 1, j] = self.e_coeff(j)
        return m

    def f_matrix(self):
        return np.eye(self.N + 1, k=-1, dtype=complex)

    def qh_matrix(self):
        return np.diag([complex(self.h_eig(j)) for j in range(self.N + 1)])


@dataclass(frozen=True)
class IntertwinerCoeffs:
    closed: tuple
    solved: tuple

    @property
    def max_deviation(self) -> float:
        return max(abs(a - b) / max(abs(a), 1e-300) for a, b in zip(self.closed, self.solved))


def _closed_coeffs(mu, m, qb):
    out = []
    for j in range(m + 1):
        den = qfalling(mu, j, qb) * qfalling(j, j, qb)
        if abs(den) < POLE_TOL:
            raise ConditionViolated(f"degenerate weight: [mu]_{j} = 0")
        out.append(complex((-1) ** j * qpow(qb, mu * j - j * (j - 1)) * qfalling(m, j, qb) / den))
    return out


def _solved_coeffs(mu, m, qb):
    """Solve Delta(e) sum_j c_j f^j v (x) w_{2j} = 0 with c_0 = 1.

    Delta(e) = e (x) 1 + q^h (x) e; the image component along
    f^j v (x) w_{2j+2} collects c_j q^{mu-2j}[m-j] and c_{j+1}[mu-j][j+1].
    """
    if m == 0:
        return [1.0 + 0j]
    A = np.zeros((m + 1, m + 1), dtype=complex)
    b = np.zeros(m + 1, dtype=complex)
    A[0, 0] = 1
    b[0] = 1
    # rows 1..m: target f^j v (x) w_{2j+2}, j = 0..m-1
    for j in range(m):
        A[j + 1, j] += complex(qpow(qb, mu - 2 * j) * qnum(m - j, qb))
        A[j + 1, j + 1] += complex(qnum(mu - (j + 1) + 1, qb) * qnum(j + 1, qb))
    if abs(np.linalg.det(A)) < POLE_TOL:
        raise ConditionViolated("degenerate weight: annihilation system is singular")
    return list(np.linalg.solve(A, b))


def intertwiner_coeffs(mu, m: int, q) -> IntertwinerCoeffs:
    """Coefficients c_j of f^j v_mu (x) w_{2j} in the image of v_mu."""
    qb = _qb(q)
    return IntertwinerCoeffs(tuple(_closed_coeffs(mu, m, qb)), tuple(_solved_coeffs(mu, m, qb)))


def _trunc_degree(x, cfg):
    a = abs(x)
    if a >= 1:
        raise TailNondecay("|q^{-2 lam}| >= 1: trace does not converge")
    if a == 0:
        return 1
    return int(math.ceil(math.log(cfg.tail_tol) / math.log(a))) + 10


def brute_trace(mu, m: int, lam, q, N: int | None = None, cfg: PrecisionCfg = DEFAULT_CFG):
    """sum_k q^{lam mu - 2 lam k} <f^k v (x) w_0 | Delta(f)^k Phi(v_mu)>.

    Phi(v_mu) uses the coefficients from the linear solve; Delta(f) =
    f (x) q^{-h} + 1 (x) f is applied step by step on the truncated module.
    """
    qb = _qb(q)
    x = complex(qpow(qb, -2 * lam))
    if N is None:
        N = _trunc_degree(x, cfg)
    c = _solved_coeffs(mu, m, qb)
    dim = N + m + 2
    # state[j, i + m] = coefficient of f^j v (x) w_{2i}
    state = np.zeros((dim, 2 * m + 1), dtype=complex)
    for j in range(m + 1):
        state[j, j + m] = c[j]
    idx = np.arange(-m, m + 1)
    qmh = np.array([complex(qpow(qb, -2 * i)) for i in idx])
    fw = np.array([complex(qnum(m + i, qb)) for i in idx])   # f w_{2i} = [m+i] w_{2i-2}
    base = complex(qpow(qb, lam * mu))
    total = state[0, m]
    xk = 1.0 + 0j
    for k in range(1, N + 1):
        new = np.zeros_like(state)
        new[1:, :] += state[:-1, :] * qmh
        new[:, :-1] += state[:, 1:] * fw[1:]
        state = new
        xk *= x
        total += xk * state[k, m]
    return base * total


def closed_trace(mu, m: int, lam, q):
    """Closed finite sum over l = 0..m for the trace of the trigonometric intertwiner."""
    qb = _qb(q)
    qv = qb.q
    x = qpow(qb, -2 * lam)
    y = qpow(qb, -2 * mu)
    s = 0
    for l in range(m + 1):
        den = 1
        for i in range(l):
            den = den * (1 - y * qv ** (2 * i))
        for i in range(l + 1):
            den = den * (1 - x * qv ** (-2 * i))
        if abs(den) < POLE_TOL:
            raise PoleError("closed_trace denominator vanishes", location=complex(den), source="closed_trace")
        s = s + ((-1) ** l * x ** l * qpow(qb, -l * (l - 1) / 2) * (qv - 1 / qv) ** l
                 * qfalling(m, l, qb) * qfalling(m + l, l, qb) / qfalling(l, l, qb) / den)
    return qpow(qb, lam * mu) * s
