import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from intermethods import (NoisePolicy, divergence_onset, interpolation_check,
                          interpolation_slack, istm_run, plateau_detect, quadratic,
                          worst_case_function)
from intermethods.certify import as_triplets

HALF_SQ = [(np.array([0.0]), 0.0, np.array([0.0])), (np.array([1.0]), 0.5, np.array([1.0]))]


def test_single_triplet_passes():
    res = interpolation_check(HALF_SQ[:1], 1.0)
    assert res.passed and res.worst_violation == 0.0 and res.witness is None


def test_half_square_equality_and_failure():
    res = interpolation_check(HALF_SQ, 1.0)
    assert res.passed and res.worst_violation == 0.0 and res.witness is None
    X, F, G = as_triplets(HALF_SQ)
    np.testing.assert_array_equal(interpolation_slack(X, F, G, 1.0), 0.0)
    bad = interpolation_check(HALF_SQ, 0.5)
    assert not bad.passed
    assert bad.worst_violation == pytest.approx(0.5)
    assert set(bad.witness) == {0, 1}


def test_slack_matches_pairwise_loop():
    rng = np.random.default_rng(3)
    X, G = rng.standard_normal((2, 7, 4))
    F = rng.standard_normal(7)
    S = interpolation_slack(X, F, G, 2.0, tol=1e-3)
    for i in range(7):
        for j in range(7):
            if i == j:
                continue
            want = (F[i] - F[j] - G[j] @ (X[i] - X[j]) - (G[i] - G[j]) @ (G[i] - G[j]) / 4.0
                    + 1e-3 * (1 + abs(F[i]) + abs(F[j])))
            assert S[i, j] == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_triplet_validation():
    with pytest.raises(ValueError):
        as_triplets([])
    with pytest.raises(ValueError):
        as_triplets([(np.zeros(2), 0.0, np.zeros(3))])
    with pytest.raises(ValueError):
        as_triplets([(np.zeros(2), np.nan, np.zeros(2))])
    with pytest.raises(ValueError):
        interpolation_check(HALF_SQ, 0.0)


def test_istm_trace_passes_and_corruption_fails():
    f = worst_case_function(30)
    tr = istm_run(f, NoisePolicy("exact"), np.zeros(30), 60, a=2.0, record_triplets=True)
    assert interpolation_check(tr.triplets, f.L, 1e-8).passed
    assert not interpolation_check(tr.triplets, f.L / 2).passed
    x, fv, g = tr.triplets[17]
    bad = list(tr.triplets)
    bad[17] = (x, fv - 0.01 * abs(fv), g)
    res = interpolation_check(bad, f.L, 1e-8)
    assert not res.passed and 17 in res.witness


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_smooth_convex_samples_pass(n, m, seed):
    rng = np.random.default_rng(seed)
    f = quadratic(rng.uniform(0.05, 3.0, n), rng.standard_normal(n))
    pts = rng.standard_normal((m, n)) * 3
    trip = [(x, f.value(x), f.gradient(x)) for x in pts]
    assert interpolation_check(trip, f.L, 1e-10).passed


def test_plateau_examples():
    assert plateau_detect(0.5 ** np.arange(40), 3, 1e-3) is None
    i, level = plateau_detect([1, 0.5, 0.25, 0.25, 0.25, 0.25, 0.25], 3, 1e-3)
    assert (i, level) == (2, 0.25)
    with pytest.raises(ValueError):
        plateau_detect([1, 2], 3, 1e-3)
    with pytest.raises(ValueError):
        plateau_detect([1, 2, 3], 1, 0.0)


def test_divergence_examples():
    assert divergence_onset([5, 4, 3, 2, 1]) is None
    assert divergence_onset([1, 0.5, 0.1, 0.15, 0.25, 0.3]) == 4
    assert divergence_onset([]) is None


def test_early_perturbations_can_stay_interpolable():
    # the first query sits at x0 = 0 where f = 0, so a 1% change is a no-op;
    # a few early iterates keep enough slack to absorb a 1% drop
    f = worst_case_function(100)
    tr = istm_run(f, NoisePolicy("exact"), np.zeros(100), 200, a=2.0, record_triplets=True)
    x, fv, g = tr.triplets[1]
    assert fv == 0.0
    missed = []
    for i in range(1, 30):
        bad = list(tr.triplets)
        x, fv, g = bad[i]
        bad[i] = (x, fv - 0.01 * abs(fv), g)
        if interpolation_check(bad, f.L, 1e-8).passed:
            missed.append(i)
    assert missed == [1, 2, 3, 4]
