import cmath
import math

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from conftest import polar, rel
from qtrace.errors import ConditionViolated, DivergenceError, NonConvergentNome, PoleError, RootOfUnityError
from qtrace.qcore import (DEFAULT_CFG, PrecisionCfg, QBase, ell_gamma, jacobi_theta, phase_omega, phi21,
                          poch, poch2, poch_fin, qa_poch_coeff, qbinom, qfact, qfalling, qnum, qpow,
                          theta0, theta_ratio_bounds)

mods = st.floats(0.1, 0.7)
angles = st.floats(-math.pi, math.pi)
unit_ish = st.floats(0.4, 1.6)


@given(mods, angles, unit_ish, angles)
def test_theta_quasi_periodicity(r, a, m, b):
    q, u = polar(r, a), polar(m, b)
    t = theta0(u, q)
    assume(abs(t) > 1e-6)
    assert rel(theta0(q * u, q), -t / u) < 1e-11
    assert rel(theta0(u / q, q), -u / q * t) < 1e-11
    assert rel(theta0(1 / u, q), -t / u) < 1e-11


@given(mods, angles, st.floats(0.2, 2.0), angles)
def test_poch_matches_mpmath(r, a, m, b):
    q, u = polar(r, a), polar(m, b)
    assert rel(poch(u, q), complex(mpmath.qp(u, q))) < 1e-12


@given(mods, angles, unit_ish, angles, st.integers(0, 12))
def test_poch_split(r, a, m, b, n):
    q, u = polar(r, a), polar(m, b)
    assert rel(poch_fin(u, q, n) * poch(u * q ** n, q), poch(u, q)) < 1e-11


def test_poch2_direct_product():
    u, q, r = 0.7 + 0.2j, 0.3j, 0.25
    ref = 1
    for i in range(60):
        for j in range(60):
            ref *= 1 - u * q ** i * r ** j
    assert rel(poch2(u, q, r), ref) < 1e-13


def test_poch_rejects_outer_nome():
    with pytest.raises(NonConvergentNome):
        poch(0.5, 1.5)


def test_jacobi_theta_matches_mpmath():
    q, u = polar(0.3, 0.4), polar(0.8, 1.1)
    tau = cmath.log(q) / (2j * math.pi)
    z = cmath.log(u) / (2j * math.pi)
    ref = complex(mpmath.jtheta(1, math.pi * z, cmath.exp(1j * math.pi * tau)))
    assert rel(jacobi_theta(u, q), ref) < 1e-12


@given(st.floats(0.1, 0.6), angles, st.floats(0.1, 0.6), angles, st.floats(0.5, 1.5), angles)
def test_elliptic_gamma_shift_and_symmetry(rm, ra, pm, pa, zm, za):
    r, p, z = polar(rm, ra), polar(pm, pa), polar(zm, za)
    try:
        g = ell_gamma(z, r, p)
        shifted, th = ell_gamma(r * z, r, p), theta0(z, p)
    except (PoleError, ZeroDivisionError):
        assume(False)
    assume(abs(th * g) > 1e-200)    # z on the lattice p^a r^b
    assert rel(shifted, th * g) < 1e-10
    assert rel(ell_gamma(z, p, r), g) < 1e-11


def test_elliptic_gamma_pole():
    with pytest.raises(PoleError):
        ell_gamma(1.0, 0.3, 0.2)


@given(st.floats(0.1, 0.6), angles, st.floats(0.1, 0.6), angles, st.floats(0.5, 1.5), angles,
       st.floats(0.5, 1.5), angles)
def test_phase_transformations(rm, ra, pm, pa, am, aa, zm, za):
    r, p, a, z = polar(rm, ra), polar(pm, pa), polar(am, aa), polar(zm, za)

    def om(x):
        return phase_omega(a, x, r, p)

    dens = [theta0(x, n) for x, n in ((1 / (z * a), p), (z * a, r), (z / a, r), (z * a / p, r))]
    assume(min(abs(d) for d in dens) > 1e-6)
    try:
        w, wi, wp, wm = om(z), om(1 / z), om(p * z), om(z / p)
    except PoleError:
        assume(False)
    inv = wi * theta0(a / z, p) * theta0(z / a, r) / (theta0(1 / (z * a), p) * theta0(z * a, r))
    assert rel(w, inv) < 1e-10
    assert rel(wp, theta0(z * a, r) / theta0(z / a, r) * w) < 1e-10
    assert rel(wm, theta0(z / (a * p), r) / theta0(z * a / p, r) * w) < 1e-10


def test_q_numbers():
    qb = QBase(1.3 + 0.2j)
    q = qb.q
    assert rel(qnum(4, qb), (q ** 4 - q ** -4) / (q - 1 / q)) < 1e-14
    assert rel(qfact(3, qb), qnum(1, qb) * qnum(2, qb) * qnum(3, qb)) < 1e-14
    assert rel(qfalling(5, 2, qb), qnum(5, qb) * qnum(4, qb)) < 1e-14
    for n, k in ((5, 2), (7, 3), (6, 5)):
        pascal = qpow(qb, -k) * qbinom(n - 1, k, qb) + qpow(qb, n - k) * qbinom(n - 1, k - 1, qb)
        assert rel(qbinom(n, k, qb), pascal) < 1e-13


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_qpow_exponent_law(x, y):
    qb = QBase(polar(0.8, 2.9))
    assert rel(qpow(qb, x) * qpow(qb, y), qpow(qb, x + y)) < 1e-13


def test_qbase_inverse_and_mp_sheet():
    qb = QBase.from_log(-0.1 + 3j * math.pi)     # off the principal sheet
    assert abs(complex(qb.inverse().log_q) + complex(qb.log_q)) == 0
    m = qb.to_mp()
    assert abs(complex(m.log_q) - complex(qb.log_q)) < 1e-15


def test_q_gauss_sum():
    a, b, c, q = 0.3 + 0.1j, 0.5, 0.1j, 0.4
    ref = poch(c / a, q) * poch(c / b, q) / (poch(c, q) * poch(c / (a * b), q))
    assert rel(phi21(a, b, c, q, c / (a * b)), ref) < 1e-13


def test_phi21_terminating_and_divergent():
    q = 0.5
    # a1 = q^-2 terminates: 1 + 2 terms
    v = phi21(q ** -2, 0.3, 0.2, q, 3.0)
    t1 = (1 - q ** -2) * (1 - 0.3) / ((1 - 0.2) * (1 - q)) * 3.0
    t2 = t1 * (1 - q ** -1) * (1 - 0.3 * q) / ((1 - 0.2 * q) * (1 - q * q)) * 3.0
    assert rel(v, 1 + t1 + t2) < 1e-14
    with pytest.raises(DivergenceError):
        phi21(0.3, 0.5, 0.2j, q, 3.0)
    with pytest.raises(PoleError):
        phi21(0.3, 0.5, 1 / q, q, 0.1)


def _qx(q, x):
    return abs(q) ** x * cmath.exp(1j * x * cmath.phase(q))


@given(st.floats(0.2, 0.7), angles, st.floats(0.3, 3.0), angles, st.floats(-3, 3), st.floats(-3, 3),
       st.floats(0.05, 0.25))
def test_theta_ratio_bracket(qm, qa, zm, za, a, b, frac):
    q, z = polar(qm, qa), polar(zm, za)
    eps = frac * -math.log(qm)
    try:
        lo, hi = theta_ratio_bounds(z, a, b, q, eps)
    except ConditionViolated:
        return
    val = abs(theta0(z * _qx(q, a), q) / theta0(z * _qx(q, b), q))
    assert lo / 1.02 <= val <= hi * 1.02


def test_theta_ratio_bounds_separation():
    with pytest.raises(ConditionViolated):
        theta_ratio_bounds(1.0, 0.0, 1.0, 0.5, 0.1)     # z q^0 on the zero lattice


@pytest.mark.parametrize("mod", [0.5, 2.0])
@pytest.mark.parametrize("ang", [0.0, 0.9, -2.2])
def test_qa_poch_coefficients(mod, ang):
    r, p = polar(mod, ang), 0.05
    s = sum(qa_poch_coeff(k, r) * p ** k for k in range(21))
    ref = poch(p, r) if mod < 1 else 1 / poch(p / r, 1 / r)
    assert rel(s, ref) < 1e-10


def test_qa_poch_root_of_unity():
    with pytest.raises(RootOfUnityError):
        qa_poch_coeff(3, -1.0)


def test_precision_cfg():
    with pytest.raises(ValueError):
        PrecisionCfg(quad_tol=0)
    c = DEFAULT_CFG.with_(dps=30)
    assert c.extended and not DEFAULT_CFG.extended
    assert c.tail_tol <= 1e-33
