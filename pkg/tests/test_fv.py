import pytest
from hypothesis import given, strategies as st

from conftest import polar, rel
from qtrace.errors import ConditionViolated, RegionError
from qtrace.fv import (REFERENCE_POINT, ParamPoint, fv_contour, fv_continued, fv_normalizer, fv_series_at0,
                       fv_series_atinf, fv_u, normalized_u_coeffs, phase_f, residue_Im, residue_Ipm, scan_fv)
from qtrace.qcore import DEFAULT_CFG, QBase
from qtrace.quad import PoleProximity

P = REFERENCE_POINT


def test_param_point_round_trip():
    p = ParamPoint.from_exponents(QBase(0.9), 0.3 + 0.1j, 2.0, -0.4, 1.5)
    back = ParamPoint.from_mult(p.q, p.Q2l, p.Q2w, p.Q2m, p.Q2k)
    for a, b in ((p.lam, back.lam), (p.om, back.om), (p.mu, back.mu), (p.k, back.k)):
        assert abs(a - b) < 1e-13
    assert abs(p.reflect_mu().mu + p.mu) == 0


def test_region_modes():
    assert P.good_region(mode="ordered")
    assert not P.good_region(mode="strict")        # Q2m/Q2l = 10 exactly, not above
    assert P.good_region(mode="none")
    with pytest.raises(ValueError):
        P.good_region(mode="loose")


@pytest.mark.parametrize("m", [0, 1, 2])
def test_residue_lemma(m):
    lhs, rhs = residue_Im(ParamPoint.from_mult(0.9, 0.5 + 0.1j, 1e-3, 0.05, 0.3), m)
    assert rel(lhs, rhs) < 1e-10


@pytest.mark.parametrize("m", [0, 1, 2])
def test_residue_lemma_flipped(m):
    lhs, rhs = residue_Ipm(ParamPoint.from_mult(0.9, 0.5 + 0.1j, 1e-3, 20, 3), m)
    assert rel(lhs, rhs) < 1e-10


def test_residue_lemma_condition():
    # Re(2(mu+1)/k) fails for m = 40
    with pytest.raises(ConditionViolated):
        residue_Im(ParamPoint.from_mult(0.9, 0.5 + 0.1j, 1e-3, 0.05, 0.3), 40)


def test_flipped_residues_matter():
    p = ParamPoint.from_mult(0.9, 0.5 + 0.1j, 1e-3, 20, 3)
    bare, rhs = residue_Ipm(p, 1, with_residues=False)
    assert rel(bare, rhs) > 1e-6


@given(st.floats(0.9, 0.96), st.floats(0.01, 0.05), st.floats(1e-3, 5e-3), st.floats(-0.5, 0.5))
def test_series_routes(q, l, m, phi):
    p = ParamPoint.from_mult(q, polar(l, phi), 1e-5, polar(m, -phi), 0.15)
    try:
        u = fv_contour(p)
    except PoleProximity:
        return
    assert rel(fv_series_at0(p), u) < 1e-9
    pr = p.with_exponents(lam=-p.lam, mu=-p.mu)
    ur = fv_contour(pr)
    assert rel(fv_series_atinf(pr), ur) < 1e-9
    assert rel(ur, u) < 1e-10


def test_continuation_past_unit_q():
    for args in [(1.2, 0.3, 1e-4, 0.01, 0.2), (1.1, 0.05 + 0.02j, 1e-3, 0.004, 0.3)]:
        p = ParamPoint.from_mult(*args)
        assert rel(fv_continued(p), fv_series_at0(p)) < 1e-9
        assert fv_u(p) == fv_continued(p)


def test_contour_needs_small_q():
    with pytest.raises(RegionError):
        fv_contour(ParamPoint.from_mult(1.2, 0.3, 1e-4, 0.01, 0.2))


def test_scan_reports_pole():
    rep = scan_fv(P, raise_on_hit=False)
    assert all(e.distance >= DEFAULT_CFG.pole_margin for e in rep.poles)
    # q close to 1 puts the zeros of theta(t q^-2; Q2k) at t = q^2 next to the circle
    with pytest.raises(PoleProximity):
        scan_fv(ParamPoint.from_mult(0.99, 0.02, 1e-5, 2e-3, 0.15))


def test_normalized_coefficients():
    cs = normalized_u_coeffs(P, 2)
    x = P.Q2w
    assert rel(sum(c * x ** n for n, c in enumerate(cs)), fv_normalizer(P) * fv_u(P)) < 1e-10


def test_phase_f_trivial_nome():
    # Q2w -> 0 leaves f = 1
    p = P.with_mult(Q2w=1e-300)
    assert abs(phase_f(0.7 + 0.3j, p) - 1) < 1e-14


def test_fv_extended_precision():
    cfg = DEFAULT_CFG.with_(dps=22, series_tail_tol=1e-22, quad_tol=1e-19, max_quad_nodes=1 << 12)
    a = fv_contour(P, cfg)
    assert rel(complex(a), fv_contour(P)) < 1e-13
    # the series is an expansion around Q2m = 0 and misses terms far below
    # double precision at the reference point
    b = fv_series_at0(P, cfg)
    assert 1e-20 < abs(a - b) / abs(a) < 1e-16


def test_series_gap_grows_with_q2w():
    gaps = []
    for w in (1e-3, 1e-2):
        p = P.with_mult(Q2w=w)
        gaps.append(rel(fv_series_at0(p), fv_contour(p)))
    assert gaps[0] < 1e-11 and gaps[1] > 100 * gaps[0]
