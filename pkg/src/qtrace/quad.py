"""Integration engines: circle trapezoid, Jackson sums, Pochhammer-loop
integrals via tanh-sinh, and pole-proximity scans."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath
import numpy as np

from .errors import BranchHazard, PoleError, QuadratureError, TailNondecay
from .qcore import DEFAULT_CFG, PrecisionCfg, cabs


@dataclass(frozen=True)
class CircleContour:
    radius: float = 1.0
    nodes: int = 64

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.nodes < 16 or self.nodes & (self.nodes - 1):
            raise ValueError("nodes must be a power of two >= 16")


@dataclass(frozen=True)
class JacksonCycle:
    base: complex
    period: complex
    n_min: int = -4
    n_max: int = 4


@dataclass(frozen=True)
class PoleEntry:
    location: complex
    source: str
    distance: float


@dataclass
class PoleReport:
    poles: list = field(default_factory=list)

    @property
    def nearest(self):
        return min(self.poles, key=lambda e: e.distance) if self.poles else None


class PoleProximity(PoleError):
    pass


# ---------------------------------------------------------------- circle

def _nodes(radius, n, start, step, mp):
    j = np.arange(start, n, step)
    if mp:
        return [radius * mpmath.expjpi(mpmath.mpf(2 * int(i)) / n) for i in j]
    return radius * np.exp(2j * np.pi * j / n)


def _eval(f, t, mp):
    if mp:
        return mpmath.fsum(f(x) for x in t)
    v = np.asarray(f(t), dtype=complex)
    if v.shape == ():
        v = np.full(len(t), complex(v))
    if not np.all(np.isfinite(v)):
        raise QuadratureError("non-finite integrand value on contour")
    # pairwise summation in numpy keeps the order deterministic
    return complex(np.sum(v))


def integrate_circle(f: Callable, c: CircleContour = CircleContour(),
                     cfg: PrecisionCfg = DEFAULT_CFG, *, abs_floor: float = 0.0):
    """(1/N) sum_j f(rho e^{2 pi i j/N}) = contour integral of f dt/(2 pi i t).

    f takes a numpy array of nodes (or a single mpmath scalar in extended
    precision).  Nodes are doubled until successive values agree to quad_tol.
    """
    mp = cfg.extended
    n = c.nodes
    s = _eval(f, _nodes(c.radius, n, 0, 1, mp), mp)
    prev = s / n
    while True:
        n2 = 2 * n
        if n2 > cfg.max_quad_nodes:
            raise QuadratureError(f"no convergence with {cfg.max_quad_nodes} nodes "
                                  f"(last change {cabs(diff):.3g})" if n > c.nodes else
                                  "max_quad_nodes below initial node count")
        s = s + _eval(f, _nodes(c.radius, n2, 1, 2, mp), mp)
        cur = s / n2
        diff = cur - prev
        tol = cfg.quad_tol if not mp else min(cfg.quad_tol, 10.0 ** (-cfg.dps + 2))
        if cabs(diff) <= tol * max(cabs(cur), abs_floor):
            return cur
        prev = cur
        n = n2


def circle_moments(f: Callable, orders: Sequence[int], c: CircleContour = CircleContour(),
                   cfg: PrecisionCfg = DEFAULT_CFG, *, abs_floor: float | None = None):
    """Contour integrals of t^n f(t) dt/(2 pi i t) for every n in orders, from
    shared node values; node doubling until all moments settle.  Moments are
    converged relative to max(|moment|, abs_floor); the default floor is the
    largest moment seen, so vanishing moments settle in absolute terms."""
    mp = cfg.extended
    n = c.nodes
    orders = list(orders)
    tol = cfg.quad_tol if not mp else min(cfg.quad_tol, 10.0 ** (-cfg.dps + 2))

    def sums(t):
        if mp:
            vals = [f(x) for x in t]
            return [mpmath.fsum(v * x ** m for v, x in zip(vals, t)) for m in orders]
        v = np.asarray(f(t), dtype=complex)
        return [complex(np.sum(v * t ** m)) for m in orders]

    s = sums(_nodes(c.radius, n, 0, 1, mp))
    prev = [x / n for x in s]
    scale = max(cabs(x) for x in prev) if prev else 0.0
    while True:
        n2 = 2 * n
        if n2 > cfg.max_quad_nodes:
            raise QuadratureError("circle_moments: no convergence")
        add = sums(_nodes(c.radius, n2, 1, 2, mp))
        s = [a + b for a, b in zip(s, add)]
        cur = [x / n2 for x in s]
        scale = max(scale, max(cabs(x) for x in cur))
        floor = scale if abs_floor is None else abs_floor
        if all(cabs(a - b) <= tol * max(cabs(a), floor) for a, b in zip(cur, prev)):
            return cur
        prev = cur
        n = n2


# ---------------------------------------------------------------- pole scan

def pole_scan(lattices, c: CircleContour = CircleContour(), margin: float = 0.05,
              *, raise_on_hit: bool = True) -> PoleReport:
    """Enumerate lattice points center * prod q_i^{n_i} (n_i >= 0) whose
    log-modulus is within 3*margin of log(radius).

    lattices: iterable of (center, [nomes], tag).  All nomes in one family
    must lie on the same side of the unit circle.
    """
    lr = math.log(c.radius)
    window = 3 * margin
    report = PoleReport()
    for center, nomes, tag in lattices:
        center = complex(center)
        nomes = [complex(x) for x in nomes]
        if center == 0:
            continue
        logs = [math.log(abs(x)) for x in nomes]
        if any(l == 0 for l in logs):
            raise ValueError("nome on the unit circle")
        if logs and not (all(l < 0 for l in logs) or all(l > 0 for l in logs)):
            raise ValueError("mixed-side nomes in one family")
        _enum(report, center, nomes, logs, tag, lr, window)
    report.poles.sort(key=lambda e: (e.distance, e.source))
    near = report.nearest
    if raise_on_hit and near is not None and near.distance < margin:
        raise PoleProximity(
            f"pole {near.source} at {near.location:.6g} is {near.distance:.3g} from the contour",
            location=near.location, source=near.source)
    return report


def _enum(report, point, nomes, logs, tag, lr, window, idx=0):
    x = math.log(abs(point))
    if idx == len(nomes):
        d = abs(x - lr)
        if d < window:
            report.poles.append(PoleEntry(point, tag, d))
        return
    l = logs[idx]
    # moving in direction sign(l); once past the window there is no return
    for _ in range(100000):
        if (l < 0 and x < lr - window) or (l > 0 and x > lr + window):
            return
        _enum(report, point, nomes, logs, tag, lr, window, idx + 1)
        point = point * nomes[idx]
        x += l
    raise ValueError("pole enumeration did not terminate")


# ---------------------------------------------------------------- Jackson

def jackson_sum(f: Callable, cycle: JacksonCycle, cfg: PrecisionCfg = DEFAULT_CFG,
                *, settle: int = 3):
    """Two-sided Jackson sum sum_n f(s p^n, n).

    f receives the node t_n and its index n.  The window starts at
    [n_min, n_max] and grows one step per side until the last `settle`
    terms on that side are below series_tail_tol relative to the partial sum.
    """
    s, p = cycle.base, cycle.period
    tol = cfg.tail_tol
    total = 0
    terms = {}
    for n in range(cycle.n_min, cycle.n_max + 1):
        terms[n] = f(s * p ** n, n)
        total = total + terms[n]
    lo, hi = cycle.n_min, cycle.n_max
    done_lo = done_hi = False
    steps = 0
    while not (done_lo and done_hi):
        steps += 1
        if steps > cfg.max_terms:
            raise TailNondecay("Jackson sum tail does not decay")
        ref = max(cabs(total), 1e-300)
        if not done_lo:
            if all(cabs(terms[m]) <= tol * ref for m in range(lo, lo + settle)):
                done_lo = True
            else:
                lo -= 1
                terms[lo] = f(s * p ** lo, lo)
                total = total + terms[lo]
        if not done_hi:
            if all(cabs(terms[m]) <= tol * ref for m in range(hi - settle + 1, hi + 1)):
                done_hi = True
            else:
                hi += 1
                terms[hi] = f(s * p ** hi, hi)
                total = total + terms[hi]
    return total


# ---------------------------------------------------------------- tanh-sinh

def tanh_sinh(g: Callable, a: float, b: float, cfg: PrecisionCfg = DEFAULT_CFG,
              *, tol: float | None = None, max_level: int = 12):
    """Double-exponential quadrature of g over (a, b).

    g(x, da, db) receives the abscissa and its distances to both endpoints,
    computed without cancellation, so algebraic endpoint singularities can be
    evaluated accurately.  Vectorized over numpy arrays.
    """
    tol = cfg.quad_tol if tol is None else tol
    half = 0.5 * (b - a)
    h = 1.0
    tmax = 4.0

    def level_sum(ts):
        u = 0.5 * math.pi * np.sinh(ts)
        # x = a + half*(1 + tanh u); endpoint distances via exp
        e = np.exp(-2.0 * np.abs(u))
        da = np.where(u < 0, 2 * half * e / (1 + e), 2 * half / (1 + e))
        db = np.where(u < 0, 2 * half / (1 + e), 2 * half * e / (1 + e))
        w = half * 0.5 * math.pi * np.cosh(ts) / np.cosh(u) ** 2
        keep = (w > 1e-300) & (da > 0) & (db > 0)
        x = a + da
        vals = np.asarray(g(x[keep], da[keep], db[keep]), dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("non-finite value in tanh-sinh")
        return complex(np.sum(w[keep] * vals))

    ts = np.arange(-tmax, tmax + h / 2, h)
    s = level_sum(ts)
    prev = h * s
    for level in range(1, max_level + 1):
        h /= 2
        ts = np.arange(-tmax + h, tmax, 2 * h)
        s += level_sum(ts)
        cur = h * s
        if level >= 3 and abs(cur - prev) <= tol * max(abs(cur), 1e-300):
            return cur
        prev = cur
    raise QuadratureError("tanh-sinh did not converge")


def pochhammer_loop_integral(alpha, beta, g: Callable | None = None,
                             cfg: PrecisionCfg = DEFAULT_CFG, *, zeros=()):
    """(1 - e^{2 pi i alpha})(1 - e^{2 pi i beta}) int_0^1 t^{alpha-1}(1-t)^{beta-1} g(t) dt.

    g is single valued and analytic near [0, 1]; `zeros` lists known zeros or
    poles of g, which must stay pole_margin away from the segment.
    """
    alpha = complex(alpha)
    beta = complex(beta)
    if alpha.real <= 0 or beta.real <= 0:
        raise ValueError("need Re alpha > 0 and Re beta > 0")
    for z in zeros:
        z = complex(z)
        d = abs(z.imag) if 0 <= z.real <= 1 else min(abs(z), abs(z - 1))
        if d < cfg.pole_margin:
            raise BranchHazard(f"singularity of g at {z:.4g} within {d:.3g} of [0,1]")
    pref = (1 - np.exp(2j * np.pi * alpha)) * (1 - np.exp(2j * np.pi * beta))

    def integrand(x, da, db):
        v = np.exp((alpha - 1) * np.log(da) + (beta - 1) * np.log(db))
        if g is not None:
            v = v * g(x)
        return v

    return complex(pref * tanh_sinh(integrand, 0.0, 1.0, cfg))
