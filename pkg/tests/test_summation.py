"""Tests for the summation operator and the norm solvers."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tree_hardy.bounds import theorem1_bound
from tree_hardy.generators import gen_chain, gen_regular_tree, gen_star, level_weight_pair
from tree_hardy.models import (
    Exponents,
    InvalidExponent,
    LevelProfile,
    LevelWeights,
    NonFiniteIterate,
    SolverOptions,
    TooLarge,
    WeightPair,
)
from tree_hardy.summation import (
    adjoint_apply,
    apply_summation,
    brute_force_norm,
    dense_matrix,
    lp_norm,
    mixed_norm,
    mixed_operator_norm,
    mixed_rayleigh_ratio,
    operator_norm,
    rayleigh_ratio,
)
from tree_hardy.tree import build_tree

from .helpers import ones, random_instance


def test_apply_on_small_tree(small_tree):
    wt = WeightPair.for_tree(small_tree, [1, 2, 3, 4, 5, 6], [1, 1, 1, 1, 1, 2])
    g = apply_summation(small_tree, wt, np.ones(6))
    np.testing.assert_array_equal(g, [1, 3, 4, 7, 8, 20])


def test_adjoint_is_the_transpose(rng):
    t, wt = random_instance(25, seed=4)
    f, y = rng.random(t.n), rng.random(t.n)
    expected = np.dot(f, adjoint_apply(t, wt, y))
    assert np.dot(apply_summation(t, wt, f), y) == pytest.approx(expected, rel=1e-12)
    np.testing.assert_allclose(dense_matrix(t, wt) @ f, apply_summation(t, wt, f), rtol=1e-12)


def test_apply_is_linear(rng):
    t, wt = random_instance(40, seed=8)
    f, g = rng.normal(size=t.n), rng.normal(size=t.n)
    a, b = 2.5, -0.75
    np.testing.assert_allclose(
        apply_summation(t, wt, a * f + b * g),
        a * apply_summation(t, wt, f) + b * apply_summation(t, wt, g),
        rtol=1e-12,
        atol=1e-12,
    )


def test_mixed_norm_levels(small_tree):
    f = np.array([1.0, 3.0, 4.0, 0.0, 0.0, 0.0])
    # levels: {1}, {3, 4} -> (1, 5) in l_2, then l_2 across levels
    assert mixed_norm(small_tree, f, 2.0, 2.0) == pytest.approx(math.sqrt(26))
    with pytest.raises(InvalidExponent):
        mixed_norm(small_tree, f, 1.0, 2.0)


def test_single_vertex(single, e23):
    t, wt = single
    estimate = operator_norm(t, wt, e23)
    assert estimate.value == pytest.approx(6.0, rel=1e-15)
    assert estimate.start_labels.kind == "certificate"
    assert estimate.converged


def test_two_chain_golden_ratio(fast_opts):
    t = gen_chain(2)
    estimate = operator_norm(t, ones(t), Exponents(p=2, q=2), fast_opts)
    assert estimate.value == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-8)


def test_chain3_dominates_tree_bound(chain3, chain3_ones, e23, fast_opts):
    estimate = operator_norm(chain3, chain3_ones, e23, fast_opts)
    assert estimate.value >= 2 ** (5 / 6) * (1 - 1e-9)
    assert estimate.regime == "p<q"


@pytest.mark.parametrize("m", [2, 5, 10])
def test_star_with_root_source(m, e23, fast_opts):
    t = gen_star(m)
    wt = WeightPair.for_tree(t, [1.0] + [0.0] * m, [0.0] + [1.0] * m)
    assert operator_norm(t, wt, e23, fast_opts).value == pytest.approx(m ** (1 / 3), rel=1e-12)


def test_zero_operator(small_tree, e23):
    wt = WeightPair.for_tree(small_tree, [0.0] * 6, [1.0] * 6)
    estimate = operator_norm(small_tree, wt, e23)
    assert estimate.value == 0.0
    assert estimate.restarts_used == 0
    assert sum(x**2 for x in estimate.maximizer) == pytest.approx(1.0)


def test_estimate_certifies_itself(e23, fast_opts):
    t, wt = random_instance(30, seed=8)
    estimate = operator_norm(t, wt, e23, fast_opts)
    assert rayleigh_ratio(t, wt, e23, estimate.maximizer) == pytest.approx(estimate.value, rel=1e-12)
    assert min(estimate.maximizer) >= 0.0
    assert all(b >= a * (1 - 1e-12) for a, b in zip(estimate.history, estimate.history[1:]))


def test_supplied_start_is_used(chain3, chain3_ones, e23):
    opts = SolverOptions(restarts=0, include_certificate_starts=False, extra_starts=((0.0, 1.0, 0.0),))
    estimate = operator_norm(chain3, chain3_ones, e23, opts)
    assert estimate.restarts_used == 2
    assert estimate.value >= 2 ** (5 / 6) * (1 - 1e-9)


def test_scale_equivariance(e23, fast_opts):
    t, wt = random_instance(15, seed=1)
    base = operator_norm(t, wt, e23, fast_opts).value
    scaled = operator_norm(t, wt.scaled(3.0, 0.25), e23, fast_opts).value
    assert scaled == pytest.approx(0.75 * base, rel=1e-7)


def test_overflow_is_reported(e23):
    t = gen_chain(2)
    wt = WeightPair.for_tree(t, [1e300, 1e300], [1e300, 1e300])
    with pytest.raises(NonFiniteIterate):
        operator_norm(t, wt, e23)


def test_spectral_norm_at_p_equals_q_equals_two():
    opts = SolverOptions(restarts=2, tol=1e-15, max_iter=50_000)
    e = Exponents(p=2, q=2)
    for seed in range(5):
        t, wt = random_instance(10 + 5 * seed, seed=seed)
        expected = np.linalg.norm(dense_matrix(t, wt), 2)
        assert operator_norm(t, wt, e, opts).value == pytest.approx(expected, rel=1e-8)


def test_mixed_dominates_lp(fast_opts):
    t = gen_regular_tree(LevelProfile(branching=(2, 3)))
    wt = level_weight_pair(t, LevelWeights(u_levels=(1.0, 0.5, 2.0), w_levels=(1.0, 2.0, 0.5)))
    e = Exponents(p=1.5, q=3.0)
    lp = operator_norm(t, wt, e, fast_opts)
    mixed = mixed_operator_norm(t, wt, e, fast_opts)
    assert mixed.value >= lp.value - 1e-9
    assert mixed_rayleigh_ratio(t, wt, e, mixed.maximizer) == pytest.approx(mixed.value, rel=1e-12)


def test_mixed_on_chain_is_the_q_to_q_norm(fast_opts):
    t = gen_chain(6)
    wt = WeightPair.for_tree(t, [1.0, 0.5, 2.0, 1.0, 0.3, 1.2], [0.7, 1.0, 1.5, 0.2, 1.0, 0.9])
    mixed = mixed_operator_norm(t, wt, Exponents(p=2, q=3), fast_opts)
    same = operator_norm(t, wt, Exponents(p=3, q=3), fast_opts)
    assert mixed.value == pytest.approx(same.value, rel=1e-6)


def test_brute_force_limits(e23):
    t = gen_chain(9)
    with pytest.raises(TooLarge):
        brute_force_norm(t, ones(t), e23)


def test_solver_reaches_the_brute_force_value(small_tree, e23):
    wt = WeightPair.for_tree(small_tree, [1.0, 0.4, 2.0, 1.3, 0.8, 0.5], [0.6, 1.0, 0.3, 2.0, 1.1, 0.9])
    oracle = brute_force_norm(small_tree, wt, e23, samples=20_000, seed=3)
    estimate = operator_norm(small_tree, wt, e23, SolverOptions(restarts=32))
    assert estimate.value >= oracle * (1 - 1e-6)


@st.composite
def instances(draw):
    n = draw(st.integers(min_value=1, max_value=20))
    parents = [None] + [draw(st.integers(min_value=0, max_value=k - 1)) for k in range(1, n)]
    weight = st.floats(min_value=0.01, max_value=100.0)
    u = draw(st.lists(weight, min_size=n, max_size=n))
    w = draw(st.lists(weight, min_size=n, max_size=n))
    p = draw(st.sampled_from([1.25, 1.5, 2.0, 3.0]))
    q = p + draw(st.sampled_from([0.25, 1.0, 3.0]))
    return parents, u, w, Exponents(p=p, q=q)


@settings(max_examples=40, deadline=None)
@given(instances())
def test_lower_estimate_holds_with_constant_one(instance):
    parents, u, w, e = instance
    t = build_tree(parents)
    wt = WeightPair.for_tree(t, u, w)
    M = theorem1_bound(t, wt, e).value
    estimate = operator_norm(t, wt, e, SolverOptions(restarts=2, max_iter=500))
    assert estimate.value >= M * (1 - 1e-9)


@pytest.mark.parametrize("p, q", [(1.5, 2.0), (2.0, 2.0), (2.0, 5.0)])
def test_mixed_norm_is_at_most_the_lp_norm(p, q, rng):
    t, _ = random_instance(60, seed=3)
    for _ in range(20):
        f = rng.exponential(size=t.n) * (rng.random(t.n) < 0.7)
        assert mixed_norm(t, f, p, q) <= lp_norm(f, p) * (1 + 1e-12)


def test_mixed_operator_norm_scale_equivariance(fast_opts):
    profile = LevelProfile(branching=(2, 2, 3))
    t = gen_regular_tree(profile)
    wt = level_weight_pair(t, LevelWeights(u_levels=(1.0, 0.4, 2.0, 0.8), w_levels=(0.5, 1.5, 1.0, 0.3)))
    e = Exponents(p=1.5, q=2.5)
    base = mixed_operator_norm(t, wt, e, fast_opts).value
    scaled = mixed_operator_norm(t, wt.scaled(4.0, 0.125), e, fast_opts).value
    assert scaled == pytest.approx(0.5 * base, rel=1e-7)
