import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intermethods import (IstmSchedule, NoisePolicy, istm_bound, istm_bound_proper,
                          istm_init, istm_query_point, istm_run, istm_step, proper_a,
                          quadratic, worst_case_function)

from conftest import translated

R0_SQ_WC100 = 3350.0 / 101.0


def _sched():
    return IstmSchedule(2.0, 1.0, 1.0)


def test_one_step_by_hand():
    st0 = istm_init([1.0], _sched())
    xq = istm_query_point(st0)
    assert xq[0] == 1.0
    st1 = istm_step(st0, xq)              # exact gradient of x^2/2
    assert (st1.x[0], st1.z[0], st1.y[0]) == (1.0, 0.0, 0.0)
    xq = istm_query_point(st1)
    st2 = istm_step(st1, xq)
    assert (st2.x[0], st2.z[0], st2.y[0]) == (0.0, 0.0, 0.0)


def test_zero_gradient_transition():
    s = istm_init(np.array([1.0, -2.0]), _sched())
    s = istm_step(s, np.array([0.3, 0.1]))
    nxt = istm_step(s, np.zeros(2))
    np.testing.assert_array_equal(nxt.z, s.z)
    np.testing.assert_allclose(nxt.y, nxt.x, rtol=0, atol=1e-15)
    np.testing.assert_allclose(nxt.x, istm_query_point(s), rtol=0, atol=0)


def test_step_dimension_mismatch():
    with pytest.raises(ValueError):
        istm_step(istm_init(np.zeros(2), _sched()), np.zeros(3))


def test_run_1d_gaps(unit_quadratic_1d):
    tr = istm_run(unit_quadratic_1d, NoisePolicy("exact"), np.array([1.0]), 1, a=1.0, p=2)
    np.testing.assert_array_equal(tr.column("f_gap"), [0.5, 0.0])
    assert tr.final["oracle_calls_cum"] == 1


def test_run_rejects_zero_budget(unit_quadratic_1d):
    with pytest.raises(ValueError):
        istm_run(unit_quadratic_1d, NoisePolicy(), np.zeros(1), 0, a=1.0)


def test_final_gap_within_fixed_a_bound():
    f = worst_case_function(100, 1.0)
    tr = istm_run(f, NoisePolicy("exact"), np.zeros(100), 300, a=2.0, p=2)
    bound = istm_bound(300, 2.0, 1.0, np.sqrt(R0_SQ_WC100), 2)
    assert bound == pytest.approx(16 * 2 * R0_SQ_WC100 / 301 ** 2, rel=1e-13)
    assert tr.final["f_gap"] <= bound


def test_fully_destroyed_gradient_freezes():
    f = worst_case_function(10)
    x0 = np.linspace(0, 1, 10)
    tr = istm_run(f, NoisePolicy("shrink", 1.0), x0, 20, a=2.0, keep_points=True)
    for y in tr.points:
        # convex combinations of equal vectors, up to rounding
        np.testing.assert_allclose(y, x0, rtol=0, atol=1e-14)


def test_bound_examples():
    assert istm_bound(1, 1, 1, 1, 2) == 4.0
    assert istm_bound_proper(50, 1, 1, 2, 0.0) == pytest.approx(16 / 50 ** 2)
    assert istm_bound_proper(10 ** 9, 2.0, 3.0, 1.5, 0.2) == pytest.approx(16 * 0.04 * 18)
    with pytest.raises(ValueError):
        istm_bound(0, 1, 1, 1, 2)


def test_trace_columns_and_calls():
    f = worst_case_function(20)
    tr = istm_run(f, NoisePolicy("random_sphere", 0.3, 5), np.zeros(20), 40, a=3.0, p=1.5)
    assert len(tr) == 41
    np.testing.assert_array_equal(tr.column("oracle_calls_cum"), np.arange(41))
    A = tr.column("A_k")
    np.testing.assert_allclose(A, IstmSchedule(1.5, 3.0, 1.0).prefix(40))
    np.testing.assert_allclose(tr.column("bound_istm")[1:], R0sq(f) / A[1:])
    assert np.isnan(tr.column("bound_est1")).all()
    tr.check_invariants()


def R0sq(f):
    return f.dist_sq(np.zeros(f.n))


def test_replay_is_bitwise():
    f = worst_case_function(30)
    runs = [istm_run(f, NoisePolicy("random_sphere", 0.5, 11), np.zeros(30), 50, a=4.0)
            for _ in range(2)]
    assert runs[0].rows == runs[1].rows


def test_translation_leaves_gaps_unchanged():
    f = worst_case_function(40)
    c = np.linspace(-3, 5, 40)
    g = translated(f, c)
    t1 = istm_run(f, NoisePolicy("exact"), np.zeros(40), 200, a=2.0)
    t2 = istm_run(g, NoisePolicy("exact"), c, 200, a=2.0)
    np.testing.assert_allclose(t2.column("f_gap"), t1.column("f_gap"), rtol=0, atol=1e-10)


@pytest.mark.parametrize("kind", ["exact", "shrink", "random_sphere", "anti_progress"])
@pytest.mark.parametrize("eps", [0.1, 0.5, 0.95])
def test_distance_stays_bounded_with_proper_a(kind, eps):
    f = worst_case_function(100)
    N = 300
    tr = istm_run(f, NoisePolicy(kind, eps, 3), np.zeros(100), N, a=None, p=2)
    assert tr.meta["a"] == proper_a(N, 2, 0.0 if kind == "exact" else eps)
    assert tr.column("dist_sq_to_opt").max() <= 2 * R0_SQ_WC100 * 1.05


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 8), st.floats(1, 2), st.floats(1, 20), st.integers(0, 2**32 - 1))
def test_query_point_is_convex_combination(n, p, a, seed):
    rng = np.random.default_rng(seed)
    s = istm_init(rng.standard_normal(n), IstmSchedule(p, a, 1.0))
    for _ in range(5):
        s = istm_step(s, rng.standard_normal(n))
    xq = istm_query_point(s)
    alpha, A = s.schedule.alpha(s.k), s.A
    np.testing.assert_allclose(xq, (A * s.y + alpha * s.z) / (A + alpha))
    lo = np.minimum(s.y, s.z) - 1e-12
    hi = np.maximum(s.y, s.z) + 1e-12
    assert np.all((xq >= lo) & (xq <= hi))


def test_quadratic_bound_domination_small():
    f = quadratic(np.linspace(0.05, 1, 15), np.linspace(1, -1, 15))
    for p in (1.0, 1.5, 2.0):
        tr = istm_run(f, NoisePolicy("exact"), np.zeros(15), 200, a=2.0, p=p)
        gap, bnd = tr.column("f_gap")[1:], tr.column("bound_istm")[1:]
        assert np.all(gap <= bnd)
