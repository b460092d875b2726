import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import polar, rel
from qtrace.errors import BranchHazard
from qtrace.qcore import DEFAULT_CFG
from qtrace.quad import (CircleContour, JacksonCycle, PoleProximity, circle_moments, integrate_circle,
                         jackson_sum, pochhammer_loop_integral, pole_scan, tanh_sinh)


@given(st.floats(0.05, 0.8), st.floats(-math.pi, math.pi))
def test_circle_constant_term(m, phi):
    a = polar(m, phi)
    # 1/(1 - a/t) = sum a^n t^-n has constant term 1; t/(t - 1/a) has none
    assert rel(integrate_circle(lambda t: 1 / (1 - a / t)), 1) < 1e-12
    assert abs(integrate_circle(lambda t: t / (t - 1 / a), abs_floor=1.0)) < 1e-12


def test_circle_moments_laurent():
    coeffs = {-2: 0.5, 0: 1.0, 1: 2.0 - 1j, 3: 0.25j}

    def f(t):
        return sum(c * t ** n for n, c in coeffs.items())

    got = circle_moments(f, [2, 0, -1, -3, 5])
    want = [coeffs[-2], coeffs[0], coeffs[1], coeffs[3], 0]
    for g, w in zip(got, want):
        assert abs(g - w) < 1e-13


def test_circle_contour_validation():
    with pytest.raises(ValueError):
        CircleContour(1.0, 48)
    with pytest.raises(ValueError):
        CircleContour(-1.0, 64)


def test_pole_scan_hit_and_report():
    with pytest.raises(PoleProximity) as ei:
        pole_scan([(0.5, [2.0], "lattice")], margin=0.05)     # 0.5 * 2 = 1
    assert ei.value.source == "lattice"
    rep = pole_scan([(0.2, [0.1], "far")], margin=0.05)
    assert rep.nearest is None
    rep = pole_scan([(0.9, [0.5], "near")], margin=0.05, raise_on_hit=False)
    assert rep.nearest is not None and rep.nearest.distance > 0.05


def test_pole_scan_rejects_mixed_nomes():
    with pytest.raises(ValueError):
        pole_scan([(0.5, [0.5, 2.0], "bad")])


@given(st.floats(0.1, 0.8), st.floats(0.2, 0.9))
def test_jackson_geometric(p, x):
    # sum_{n>=0} x^n on the nodes s p^n, zero for n < 0
    got = jackson_sum(lambda t, n: x ** n if n >= 0 else 0.0, JacksonCycle(1.0, p, -3, 3))
    assert rel(got, 1 / (1 - x)) < 1e-13


def test_jackson_bilateral():
    # sum_n p^{n^2} z^n = theta-type bilateral series, compared with direct summation
    p, z = 0.3, 0.7 + 0.2j
    got = jackson_sum(lambda t, n: p ** (n * n) * z ** n, JacksonCycle(1.0, p))
    ref = sum(p ** (n * n) * z ** n for n in range(-40, 41))
    assert rel(got, ref) < 1e-14


def test_tanh_sinh_beta():
    a, b = 0.35, 1.7

    def g(x, da, db):
        return np.exp((a - 1) * np.log(da) + (b - 1) * np.log(db))

    assert rel(tanh_sinh(g, 0.0, 1.0), float(mpmath.beta(a, b))) < 1e-11


def test_tanh_sinh_log_endpoint():
    assert rel(tanh_sinh(lambda x, da, db: np.log(da), 0.0, 1.0), -1.0) < 1e-11


@given(st.floats(0.3, 2.5), st.floats(-1, 1), st.floats(0.3, 2.5), st.floats(-1, 1))
def test_loop_integral_beta(ar, ai, br, bi):
    a, b = complex(ar, ai), complex(br, bi)
    pref = (1 - np.exp(2j * np.pi * a)) * (1 - np.exp(2j * np.pi * b))
    assert rel(pochhammer_loop_integral(a, b), pref * complex(mpmath.beta(a, b))) < 1e-10


def test_loop_integral_with_weight():
    # int t^{a-1} (1-t)^{b-1} (1 + t) = B(a, b) + B(a + 1, b)
    a, b = 0.6 + 0.2j, 1.3
    pref = (1 - np.exp(2j * np.pi * a)) * (1 - np.exp(2j * np.pi * b))
    ref = pref * complex(mpmath.beta(a, b) + mpmath.beta(a + 1, b))
    assert rel(pochhammer_loop_integral(a, b, lambda t: 1 + t), ref) < 1e-10


def test_loop_integral_guards():
    with pytest.raises(ValueError):
        pochhammer_loop_integral(-0.2, 1.0)
    with pytest.raises(BranchHazard):
        pochhammer_loop_integral(0.5, 0.5, lambda t: 1 / (t - 0.5 - 0.01j), zeros=[0.5 + 0.01j])
