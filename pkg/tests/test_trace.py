import cmath
import math

import pytest
from hypothesis import given, strategies as st

from conftest import polar, rel
from qtrace.errors import ConditionViolated, PoleError, RegionError
from qtrace.fv import REFERENCE_POINT, ParamPoint
from qtrace.qcore import DEFAULT_CFG, QBase, qpow
from qtrace.trace import (ClassicalParams, TraceMethod, classical_limit_residual, classical_rhs,
                          constant_identity_residual, four_method_deviation, inverted_point, normalized_trace,
                          richardson_eps, swapped_point, symmetry_residual, trace, trace_from_xi,
                          trace_integral, trace_qa, trace_via_fv, trig_limit_residual, trig_m1,
                          weyl_denominator)

P = REFERENCE_POINT


def test_four_routes_at_reference():
    dev, vals = four_method_deviation(P)
    assert set(vals) == {m.value for m in TraceMethod}
    assert dev < 1e-9


@pytest.mark.parametrize("q2l,q2m", [(0.01, 4e-3), (0.04, 1e-3)])
def test_four_routes_grid_corners(q2l, q2m):
    dev, _ = four_method_deviation(P.with_mult(Q2l=q2l, Q2m=q2m))
    assert dev < 1e-9


def test_free_field_route_and_constant():
    assert rel(trace_from_xi(P), trace_integral(P)) < 1e-9
    assert constant_identity_residual(P) < 1e-12


def test_region_guard():
    far = P.with_mult(Q2l=0.5)          # Q2l above Q2k breaks the ordering
    with pytest.raises(RegionError):
        trace_integral(far)
    assert trace_integral(far, region="none") != 0


def test_trace_method_strings():
    assert trace(P, "series") == trace(P, TraceMethod.SERIES)
    with pytest.raises(ValueError):
        trace(P, "bogus")


def test_fv_route_continued_flag():
    assert rel(trace_via_fv(P, continued=True), trace_via_fv(P)) < 1e-13


def test_weyl_denominator_zero_and_reflection():
    q = QBase(0.9)
    assert weyl_denominator(q, 0, -1.3) == 0
    lam, om = 0.3 + 0.1j, -1.3
    # q^lam theta(q^-2lam) is odd under lam -> -lam
    assert rel(weyl_denominator(q, -lam, om), -weyl_denominator(q, lam, om)) < 1e-12
    with pytest.raises(RegionError):
        weyl_denominator(q, lam, 1.0)


def test_swap_is_an_involution():
    p = ParamPoint.from_mult(0.9, 0.3 + 0.1j, 0.05, 0.4 - 0.2j, 0.1)
    s = swapped_point(swapped_point(p))
    assert abs(s.lam - p.lam) == 0 and abs(s.om - p.om) == 0
    i = inverted_point(inverted_point(p))
    assert rel(i.Q2l, p.Q2l) < 1e-14


@pytest.mark.parametrize("p", [P, ParamPoint.from_mult(0.9, 0.3 + 0.1j, 0.05, 0.4 - 0.2j, 0.1)])
def test_symmetry(p):
    assert symmetry_residual(p) < 1e-9


@given(st.floats(0.85, 0.93), st.floats(0.1, 0.6), st.floats(0.02, 0.12), st.floats(0.1, 0.6),
       st.floats(0.02, 0.15), st.floats(-1, 1))
def test_symmetry_property(q, l, w, m, k, phi):
    p = ParamPoint.from_mult(q, polar(l, phi), w, polar(m, -phi), k)
    try:
        a = normalized_trace(p)
        b = normalized_trace(swapped_point(p))
    except (PoleError, RegionError, ZeroDivisionError):
        return
    assert rel(a, b) < 1e-9


def test_trig_value_and_pole():
    q = QBase(0.9)
    # at Q2w -> 0 every route tends to the Verma trace of highest weight mu - 1
    for m in TraceMethod:
        assert trig_limit_residual(P, method=m) < 1e-8
    with pytest.raises(PoleError):
        trig_m1(q, 0.0, 0.7)


def test_trig_residual_shrinks_with_q2w():
    ref = trig_m1(P.q, P.lam, P.mu)
    errs = [rel(trace_integral(P.with_mult(Q2w=w)), ref) for w in (1e-3, 1e-4, 1e-5)]
    assert errs[0] > errs[1] > errs[2]


def test_richardson_eps_exact_on_polynomials():
    eps = [0.2, 0.1, 0.05]
    vals = [3 + 2 * e - 5 * e * e for e in eps]
    assert abs(richardson_eps(eps, vals, 2) - 3) < 1e-13
    assert abs(richardson_eps(eps, [3 + 2 * e for e in eps], 1) - 3) < 1e-13


def test_classical_params_validation():
    with pytest.raises(ConditionViolated):
        ClassicalParams(k=2.0)
    with pytest.raises(ConditionViolated):
        ClassicalParams(mu=1.5)
    c = ClassicalParams()
    p = c.point(0.1)
    assert abs(p.qv - math.exp(-0.1)) < 1e-15
    assert abs(p.lam - c.Lam / -0.1) < 1e-13


def test_classical_rhs_reference_value():
    v = classical_rhs(ClassicalParams())
    assert rel(v, 9.634157906054103 - 1.1369475478941862j) < 1e-9


def test_classical_limit_converges_on_finer_steps():
    """Raw residuals fall roughly linearly in eps; a cubic extrapolant on
    eps down to 1/160 lands within 1e-4 of the classical value."""
    c = ClassicalParams()
    cfg = DEFAULT_CFG.with_(pole_margin=0.005)
    res, raw, _ = classical_limit_residual(c, (0.05, 0.025, 0.0125, 0.00625), cfg, order=3)
    assert all(a > b for a, b in zip(raw, raw[1:]))
    assert 1.7 < raw[0] / raw[1] < 2.1
    assert res < 1e-4


def test_qa_route_matches_integral_across_inversion():
    # the continued trace at (1/q, -lam, -om) equals the ordinary trace up to
    # the normalization checked by the symmetry tests; here only finiteness
    p = ParamPoint.from_mult(0.9, 0.3 + 0.1j, 0.05, 0.4 - 0.2j, 0.1)
    v = trace_qa(inverted_point(p))
    assert cmath.isfinite(v) and v != 0
