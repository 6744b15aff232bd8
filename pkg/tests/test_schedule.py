import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intermethods import IstmSchedule, aim_alpha_B, istm_A, istm_alpha, proper_a

P_GRID = (1.0, 1.25, 1.5, 1.75, 2.0)
A_GRID = (1.0, 2.0, 10.0)
L_GRID = (0.5, 1.0, 10.0)

# frozen: sum_{k<10} sqrt(k+2)/4 (notes/oracles.py, 30-digit sympy)
A10_P15_A2 = 6.196225744139875


@pytest.mark.parametrize("k,p,a,L,want", [(0, 2, 1, 1, 1.0), (1, 2, 1, 1, 1.5), (0, 1, 2, 1, 0.25)])
def test_istm_alpha_examples(k, p, a, L, want):
    assert istm_alpha(k, p, a, L) == want


@pytest.mark.parametrize("k,want", [(0, 0.0), (1, 1.0), (2, 2.5)])
def test_istm_A_examples(k, want):
    assert istm_A(k, 2, 1, 1) == want


def test_istm_A_fractional_p():
    assert istm_A(10, 1.5, 2, 1) == pytest.approx(A10_P15_A2, rel=1e-14)


def test_schedule_cache_grows_consistently():
    s = IstmSchedule(1.5, 2.0, 1.0)
    small = s.prefix(5).copy()
    big = s.prefix(50)
    np.testing.assert_array_equal(big[:6], small)
    assert s.A(0) == 0.0


def test_domain_errors():
    for args in [(0, 0.5, 1, 1), (0, 2.5, 1, 1), (0, 2, 0.5, 1), (0, 2, 1, 0), (-1, 2, 1, 1)]:
        with pytest.raises(ValueError):
            istm_alpha(*args)
    with pytest.raises(ValueError):
        proper_a(0, 2, 0.1)
    with pytest.raises(ValueError):
        proper_a(10, 2, 0.1, (1, -1, 1, 1))
    with pytest.raises(ValueError):
        aim_alpha_B(0, 2, 1)


def test_proper_a_examples():
    assert proper_a(7, 1.3, 0.0) == 1.0
    assert proper_a(16, 2, 1.0, (1, 1, 1, 1)) == 256.0
    # four terms 1, 3.1623, 10, 2000 (notes/oracles.py)
    assert proper_a(100, 2, 0.1) == pytest.approx(2000.0, rel=1e-14)
    assert proper_a(5, 2, 0.0, (0, 0, 0, 0)) == 1.0


@pytest.mark.parametrize("k,p,L,alpha,B", [(1, 1, 1, 1.0, 1.0), (1, 2, 1, 1.25, 1.5625),
                                           (2, 2, 2, 0.75, 1.125), (3, 1.5, 1, 2 ** 0.5, 2.0)])
def test_aim_alpha_B_examples(k, p, L, alpha, B):
    a, b = aim_alpha_B(k, p, L)
    assert a == pytest.approx(alpha, rel=1e-15)
    assert b == pytest.approx(B, rel=1e-15)


def test_closed_form_p2_full_grid():
    k = np.arange(10_001)
    for a in A_GRID:
        for L in L_GRID:
            A = IstmSchedule(2.0, a, L).prefix(10_000)
            closed = k * (k + 3.0) / (4.0 * a * L)
            assert np.max(np.abs(A[1:] - closed[1:]) / closed[1:]) <= 1e-12
            assert A[0] == 0.0


def test_growth_inequalities_full_grid():
    kk = np.arange(10_000)
    for p in P_GRID:
        for a in A_GRID:
            for L in L_GRID:
                s = IstmSchedule(p, a, L)
                A = s.prefix(10_000)[1:]
                alpha = s.alphas(10_000)
                assert np.all(A >= a * L * alpha ** 2 * (1 - 1e-12))
                assert np.all(A >= (kk + 2.0) ** p / (4.0 * a * L) * (1 - 1e-12))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10 ** 4), st.integers(1, 10 ** 4), st.floats(1, 2), st.floats(0, 1),
       st.floats(0, 1))
def test_proper_a_monotone(N1, N2, p, e1, e2):
    lo_N, hi_N = sorted((N1, N2))
    lo_e, hi_e = sorted((e1, e2))
    assert proper_a(lo_N, p, lo_e) <= proper_a(hi_N, p, lo_e)
    assert proper_a(lo_N, p, lo_e) <= proper_a(lo_N, p, hi_e)
    assert proper_a(lo_N, p, lo_e) >= 1.0


@settings(max_examples=30, deadline=None)
@given(st.floats(1, 2), st.lists(st.floats(1e-3, 1e3), min_size=1, max_size=200))
def test_aim_chain(p, Ls):
    # backtracking only doubles, so realized L_k sequences are nondecreasing
    Ls = sorted(Ls)
    A = 1.0 / Ls[0]
    for k, Lk in enumerate(Ls[1:], 1):
        alpha, B = aim_alpha_B(k, p, Lk)
        A += alpha
        assert 0 < alpha <= B * (1 + 1e-15)
        assert B <= A * (1 + 1e-12)
        assert alpha * Lk >= 1 - 1e-15


def test_aim_chain_needs_nondecreasing_L():
    # a drop in L_k can push B_k above A_k
    A = 1.0 / 4.0
    alpha, B = aim_alpha_B(1, 2.0, 1.0)
    assert B > A + alpha
