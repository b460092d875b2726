import pytest

from conftest import rel
from qtrace.errors import ConditionViolated
from qtrace.macdonald import (IntegrableWeight, WeylWord, affine_macdonald, chi0, chi_bgg, chi_routes_residual,
                              dotted_action, dotted_by_generators, dyn_weyl_composed, dyn_weyl_scalar,
                              elliptic_macdonald, elliptic_macdonald_reindexed, extract_f, f_at, fvconj_residual,
                              fvconj_rhs, words)
from qtrace.qcore import DEFAULT_CFG, QBase
from qtrace.suites import MAC_LAM, mac_lam_list, mac_omega

Q = QBase(1.2)
OM = mac_omega(1e-4)
LAM = MAC_LAM


def test_weight_validation():
    with pytest.raises(ConditionViolated):
        IntegrableWeight(3, 2)
    with pytest.raises(ConditionViolated):
        IntegrableWeight(1.5, 2)
    assert IntegrableWeight(1, 2).k_tilde == 6


def test_words():
    ws = list(words(3))
    assert len(ws) == 7 and ws[0].l == 0
    assert WeylWord(0, 3).letters() == [0, 1, 0]
    with pytest.raises(ValueError):
        WeylWord(2, 1)


@pytest.mark.parametrize("mu,k", [(0, 0), (1, 2), (2, 5), (0.3, 1.7)])
def test_dotted_action_closed_form(mu, k):
    for w in words(6):
        got = dotted_action(w, mu, k)
        want = dotted_by_generators(w, mu, k)
        assert all(abs(a - b) < 1e-12 for a, b in zip(got, want)), w


@pytest.mark.parametrize("mu,k", [(0.3 + 0.1j, 1.7), (1.2, 2.9 - 0.2j)])
def test_dynamical_scalar_composes(mu, k):
    for w in words(4):
        assert rel(dyn_weyl_scalar(w, mu, k, Q), dyn_weyl_composed(w, mu, k, Q)) < 1e-12, w


def test_regime_guard():
    with pytest.raises(ConditionViolated):
        chi0(IntegrableWeight(0, 0), LAM, OM, QBase(0.9))


@pytest.mark.parametrize("mu,k", [(0, 0), (1, 2)])
def test_bgg_routes(mu, k):
    assert chi_routes_residual(IntegrableWeight(mu, k), LAM, OM, Q) < 1e-8


def test_normalizer_independent_of_lambda():
    mean, spread = extract_f(Q, OM, mac_lam_list())
    assert spread < 1e-8
    with pytest.raises(ValueError):
        extract_f(Q, OM, [LAM, LAM, LAM + 0.1])


def test_normalizer_trigonometric_limit():
    e4 = abs(f_at(LAM, mac_omega(1e-4), Q) - 1)
    e6 = abs(f_at(LAM, mac_omega(1e-6), Q) - 1)
    assert e6 < 1e-5
    # f - 1 is linear in Q2w
    assert 80 < e4 / e6 < 120


def test_affine_macdonald_basics():
    assert abs(affine_macdonald(IntegrableWeight(0, 0), LAM, OM, Q) - 1) < 1e-14
    for w in (IntegrableWeight(1, 2), IntegrableWeight(2, 2)):
        assert rel(affine_macdonald(w, -LAM, OM, Q), affine_macdonald(w, LAM, OM, Q)) < 1e-8


@pytest.mark.parametrize("mu,kap", [(0, 4), (1, 6), (2, 6)])
def test_elliptic_layouts(mu, kap):
    assert rel(elliptic_macdonald_reindexed(mu, kap, LAM, OM, Q), elliptic_macdonald(mu, kap, LAM, OM, Q)) < 1e-12


@pytest.mark.parametrize("mu,k", [(0, 0), (1, 2), (2, 2)])
def test_family_relation_is_off_by_two(mu, k):
    """The displayed relation between the two families holds up to an exact
    factor 2 on the elliptic side; see the decision ledger."""
    w = IntegrableWeight(mu, k)
    f, _ = extract_f(Q, OM, mac_lam_list())
    ratio = fvconj_rhs(w, LAM, OM, Q, f) / affine_macdonald(w, LAM, OM, Q)
    assert abs(ratio - 2) < 1e-10
    assert abs(fvconj_residual(w, LAM, OM, Q, f) - 1) < 1e-10


def test_extended_precision_agrees_with_double():
    cfg = DEFAULT_CFG.with_(dps=20, series_tail_tol=1e-20, quad_tol=1e-18)
    a = elliptic_macdonald(1, 6, LAM, OM, Q, cfg)
    assert rel(complex(a), elliptic_macdonald(1, 6, LAM, OM, Q)) < 1e-13


def test_chi_value_pair():
    a, b = chi_bgg(IntegrableWeight(1, 2), LAM, OM, Q)
    assert rel(a, b) < 1e-8 and rel(a, -0.5534745851942715 + 0.18380640908075271j) < 1e-10
