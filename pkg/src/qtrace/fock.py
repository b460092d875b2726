"""Heisenberg-algebra traces of products of exponentials: closed form and a
truncated Fock-space oracle."""
from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError
from .qcore import DEFAULT_CFG, PrecisionCfg


@dataclass(frozen=True)
class ExpFactorList:
    """Operator prod_i exp(x_i b_-) exp(y_i b_+) . exp(z b_- b_+) with [b_+, b_-] = c."""
    pairs: tuple = field(default_factory=tuple)
    c: complex = 1.0
    z: complex = -1.0

    @property
    def weight(self) -> complex:
        return cmath.exp(self.z * self.c)

    def check(self):
        if abs(self.weight) >= 1:
            raise DivergenceError(f"|e^(zc)| = {abs(self.weight):.4g} >= 1")


@dataclass(frozen=True)
class FockTrunc:
    L: int = 40

    def __post_init__(self):
        if self.L < 1:
            raise ValueError("level must be positive")


def heis_trace_closed(f: ExpFactorList) -> complex:
    f.check()
    w = f.weight
    s = 0j
    for i, (xi, _) in enumerate(f.pairs):
        for j, (_, yj) in enumerate(f.pairs):
            s += f.c * xi * yj * (1 if i > j else w)
    return cmath.exp(s / (1 - w)) / (1 - w)


def _expm_nilpotent(m: np.ndarray, order: int) -> np.ndarray:
    out = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for n in range(1, order + 1):
        term = term @ m / n
        if not term.any():
            break
        out = out + term
    return out


def ladder_matrices(L: int, c: complex = 1.0):
    """b_- |n> = |n+1>, b_+ |n> = c n |n-1> on levels 0..L."""
    n = L + 1
    lower = np.eye(n, k=-1, dtype=complex)
    upper = np.diag(c * np.arange(1, n, dtype=complex), k=1)
    return lower, upper


def heis_trace_brute(f: ExpFactorList, t: FockTrunc = FockTrunc(), cfg: PrecisionCfg = DEFAULT_CFG) -> complex:
    f.check()
    lower, upper = ladder_matrices(t.L, f.c)
    w = f.weight
    if abs(w) ** t.L > cfg.tail_tol ** 0.5:
        warnings.warn(f"truncation level {t.L} is small for |e^(zc)| = {abs(w):.3g}", RuntimeWarning)
    op = np.eye(t.L + 1, dtype=complex)
    for x, y in f.pairs:
        op = op @ _expm_nilpotent(x * lower, t.L) @ _expm_nilpotent(y * upper, t.L)
    diag = w ** np.arange(t.L + 1)
    return complex(np.sum(np.diag(op) * diag))
