import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from conftest import polar, rel
from qtrace.errors import ConditionViolated, TailNondecay
from qtrace.qcore import QBase, qnum, qpow
from qtrace.trace import trig_m1
from qtrace.uqsl2 import VermaTrunc, brute_trace, closed_trace, intertwiner_coeffs

Q = QBase(1.4 + 0.2j)
MU, LAM = 1.3 + 0.4j, 2.1 - 0.3j


def test_verma_relations():
    v = VermaTrunc(MU, 8, Q)
    e, f, K = v.e_matrix(), v.f_matrix(), v.qh_matrix()
    q = Q.q
    comm = e @ f - f @ e
    rhs = (K - np.linalg.inv(K)) / (q - 1 / q)
    # the truncation spoils only the last level
    assert np.allclose(comm[:-1, :-1], rhs[:-1, :-1], rtol=1e-12, atol=1e-12)
    assert np.allclose(K @ e @ np.linalg.inv(K), q ** 2 * e, rtol=1e-12)


@given(st.floats(0.5, 2.0), st.floats(-1, 1), st.integers(0, 5))
def test_intertwiner_coefficients(mr, mi, m):
    assume(all(abs(complex(mr, mi) - n) > 1e-3 for n in range(m)))     # [mu]_j vanishes
    c = intertwiner_coeffs(complex(mr, mi), m, Q)
    assert c.closed[0] == 1
    assert c.max_deviation < 1e-10


def test_degenerate_weight():
    with pytest.raises(ConditionViolated):
        intertwiner_coeffs(1, 3, QBase(1.3))       # [mu]_2 contains [0]


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_closed_vs_brute(m):
    assert rel(closed_trace(MU, m, LAM, Q), brute_trace(MU, m, LAM, Q)) < 1e-12


@given(st.floats(1.3, 1.6), st.floats(-0.3, 0.3), st.floats(0.8, 1.6), st.floats(0.1, 0.6),
       st.floats(1.5, 2.5), st.integers(0, 3))
def test_closed_vs_brute_property(qm, qa, mr, mi, lam, m):
    # a nonzero imaginary part keeps mu off the integer weights where
    # the Verma module is reducible
    q, mu = QBase(polar(qm, qa)), complex(mr, mi)
    assert rel(closed_trace(mu, m, lam, q), brute_trace(mu, m, lam, q)) < 1e-11


def test_one_dimensional_intertwiner_is_trig_value():
    assert rel(closed_trace(MU - 1, 1, LAM, Q), trig_m1(Q, LAM, MU)) < 1e-13


def test_scalar_trace_is_geometric():
    # m = 0: sum_k q^{lam mu - 2 lam k}
    want = qpow(Q, LAM * MU) / (1 - qpow(Q, -2 * LAM))
    assert rel(closed_trace(MU, 0, LAM, Q), want) < 1e-13


def test_nondecaying_trace():
    with pytest.raises(TailNondecay):
        brute_trace(MU, 1, -LAM, Q)


def test_qnum_symmetric():
    assert rel(qnum(3, Q), qnum(3, Q.inverse())) < 1e-14
