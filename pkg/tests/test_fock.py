import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import polar, rel
from qtrace.errors import DivergenceError
from qtrace.fock import ExpFactorList, FockTrunc, heis_trace_brute, heis_trace_closed, ladder_matrices

small = st.builds(polar, st.floats(0.0, 0.6), st.floats(-3.1, 3.1))


@given(st.lists(st.tuples(small, small), min_size=0, max_size=4), st.floats(0.5, 1.5),
       st.floats(0.1, 0.45), st.floats(-3.1, 3.1))
def test_closed_vs_truncation(pairs, c, wm, wa):
    z = cmath.log(polar(wm, wa)) / c
    f = ExpFactorList(tuple(pairs), c, z)
    assert rel(heis_trace_closed(f), heis_trace_brute(f, FockTrunc(40))) < 1e-8


def test_empty_list_is_partition_function():
    f = ExpFactorList((), 1.0, -1.0)
    w = cmath.exp(-1.0)
    assert rel(heis_trace_closed(f), 1 / (1 - w)) < 1e-15
    assert rel(heis_trace_brute(f), 1 / (1 - w)) < 1e-15


def test_ladder_commutator():
    lo, up = ladder_matrices(10, 2.0)
    comm = up @ lo - lo @ up
    assert np.allclose(np.diag(comm)[:-1], 2.0)


def test_divergent_weight():
    with pytest.raises(DivergenceError):
        heis_trace_closed(ExpFactorList((), 1.0, 0.5))


def test_small_truncation_warns():
    f = ExpFactorList(((0.1, 0.2),), 1.0, -0.05)
    with pytest.warns(RuntimeWarning):
        heis_trace_brute(f, FockTrunc(5))


def test_trunc_validation():
    with pytest.raises(ValueError):
        FockTrunc(0)
