import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import context
from flrs import linalg
from flrs.skew import (MINUS_INF, MultiSkewPoly, SkewError, SkewPoly, annihilator, generalized_power,
                       is_p_independent, lclm, left_divmod, linear_factor, moore_matrix, op_evaluate,
                       op_power, rem_evaluate, rem_interpolate, rem_op_bridge, right_divmod,
                       scaled_point_eval, skew_mul)
from oracles import long_division_remainder, naive_rank, rewrite_mul


def rand_poly(ctx, rng, deg):
    return SkewPoly(ctx, [rng.randrange(ctx.field.order) for _ in range(deg + 1)])


def test_zero_polynomial_degree():
    ctx = context(3, 2)
    assert SkewPoly(ctx).degree == MINUS_INF
    assert SkewPoly(ctx, [0, 0]).is_zero()
    assert SkewPoly(ctx, [1, 2, 0]).degree == 1


@pytest.mark.parametrize("u,d", [(1, 0), (1, 4)])
def test_product_matches_rewriting(u, d):
    ctx = context(3, 2, u, d)
    rng = random.Random(d)
    for _ in range(200):
        f, g = rand_poly(ctx, rng, 3), rand_poly(ctx, rng, 3)
        assert list(skew_mul(f, g).coeffs) == rewrite_mul(ctx, f.coeffs, g.coeffs)


def test_x_times_scalar_is_twisted():
    ctx = context(2, 4, 1, 3)
    F = ctx.field
    for c in range(F.order):
        prod = SkewPoly.x(ctx) * SkewPoly.const(ctx, c)
        assert prod == SkewPoly(ctx, [ctx.derivation(c), ctx.aut(c)])


def test_operator_power_example():
    ctx = context(2, 2)
    z = 2
    assert op_power(ctx, z, z, 2) == z


def test_op_evaluate_matches_sum_of_powers():
    ctx = context(3, 2, 1, 5)
    F = ctx.field
    rng = random.Random(4)
    for _ in range(200):
        f = rand_poly(ctx, rng, 4)
        a, b = rng.randrange(9), rng.randrange(9)
        expect = 0
        for i, c in enumerate(f.coeffs):
            expect = F.add(expect, F.mul(c, op_power(ctx, a, b, i)))
        assert op_evaluate(f, b, a) == expect


def test_moore_rank_two_blocks_over_f9():
    ctx = context(3, 2)
    # the two evaluation parameters come from different conjugacy classes
    a = ctx.conjugacy_representatives(2)
    rng = random.Random(8)
    for _ in range(50):
        xs = [[rng.randrange(9) for _ in range(2)], [rng.randrange(9) for _ in range(2)]]
        M = moore_matrix(ctx, 4, xs, a)
        assert linalg.rank(ctx.field, M) == naive_rank(ctx.field, M)


def test_generalized_power_is_field_norm():
    ctx = context(3, 4)
    F = ctx.field
    rng = random.Random(1)
    for _ in range(100):
        a = rng.randrange(1, F.order)
        assert generalized_power(ctx, a, 4) == F.pow(a, (F.order - 1) // 2)


def test_remainder_evaluation_examples():
    ctx = context(2, 2)
    z = 2
    assert rem_evaluate(SkewPoly(ctx, [0, 0, 1]), z) == 1
    assert rem_evaluate(SkewPoly.const(ctx, 3), z) == 3
    with pytest.raises(SkewError):
        rem_evaluate(SkewPoly(context(2, 2, 1, 1), [0, 1]), 1)


def test_remainder_evaluation_all_small_polys_over_f9():
    ctx = context(3, 2)
    rng = random.Random(0)
    for _ in range(300):
        f = rand_poly(ctx, rng, rng.randrange(5))
        b = rng.randrange(9)
        assert rem_evaluate(f, b) == long_division_remainder(ctx, f.coeffs, b)
        _, rem = right_divmod(f, linear_factor(ctx, b))
        assert rem[0] == rem_evaluate(f, b)


@pytest.mark.parametrize("d", [0, 2])
def test_division_identities(d):
    ctx = context(2, 4, 1, d)
    rng = random.Random(d + 10)
    for _ in range(100):
        f, g = rand_poly(ctx, rng, 6), rand_poly(ctx, rng, rng.randrange(1, 4))
        quo, rem = right_divmod(f, g)
        assert skew_mul(quo, g) + rem == f
        assert rem.is_zero() or rem.degree < g.degree
        quo, rem = left_divmod(f, g)
        assert skew_mul(g, quo) + rem == f
        assert rem.is_zero() or rem.degree < g.degree
    with pytest.raises(ZeroDivisionError):
        right_divmod(f, SkewPoly(ctx))


def test_rem_op_bridge_over_f9():
    ctx = context(3, 2)
    rng = random.Random(7)
    for _ in range(200):
        f = rand_poly(ctx, rng, 4)
        lhs, rhs = rem_op_bridge(f, rng.randrange(1, 9), rng.randrange(9))
        assert lhs == rhs
    with pytest.raises(SkewError):
        rem_op_bridge(f, 0, 1)


def test_scaled_point_evaluation():
    ctx = context(4, 2)
    F = ctx.field
    rng = random.Random(9)
    for _ in range(200):
        f = rand_poly(ctx, rng, 3)
        c, j, b = rng.randrange(1, 16), rng.randrange(4), rng.randrange(16)
        assert scaled_point_eval(f, c, j, b) == rem_evaluate(f, F.mul(F.pow(c, j), b))


def test_lclm_of_three_factors():
    ctx = context(3, 2)
    F = ctx.field
    # one class of F_9 holds at most m = 2 independent points, so the third comes from the class of alpha
    pts = [1, F.div(ctx.op(1, ctx.alpha), ctx.alpha), ctx.op(ctx.alpha, 1)]
    assert is_p_independent(ctx, pts)
    facs = [linear_factor(ctx, b) for b in pts]
    L = lclm(facs)
    assert L.degree == 3 and L.lead() == 1
    for g in facs:
        assert right_divmod(L, g)[1].is_zero()


def test_rem_interpolation_reproduces_values():
    ctx = context(3, 2)
    rng = random.Random(12)
    pts = [1, 3, 5]
    assert is_p_independent(ctx, pts)
    for _ in range(50):
        vals = [rng.randrange(9) for _ in pts]
        f = rem_interpolate(ctx, pts, vals)
        assert f.degree < 3
        assert [rem_evaluate(f, b) for b in pts] == vals


def test_p_independence_repeated_element():
    ctx = context(3, 2)
    assert not is_p_independent(ctx, [4, 4])
    assert is_p_independent(ctx, [])


def test_p_independence_against_zero_sets():
    ctx = context(2, 2)
    F = ctx.field
    for size in (1, 2, 3):
        for pts in itertools.combinations(range(F.order), size):
            vanishing = [c for c in itertools.product(range(F.order), repeat=size)
                         if any(c) and all(long_division_remainder(ctx, c, b) == 0 for b in pts)]
            assert is_p_independent(ctx, list(pts)) == (not vanishing), pts


def test_annihilator_vanishes_and_is_minimal():
    ctx = context(2, 4)
    a = ctx.conjugacy_representatives(1)
    xs = [[1, ctx.alpha, ctx.field.pow(ctx.alpha, 2)]]
    A = annihilator(ctx, xs, a)
    assert A.degree == 3
    for x in xs[0]:
        assert op_evaluate(A, x, a[0]) == 0


def test_multivariate_evaluation_and_composition():
    ctx = context(3, 2)
    rng = random.Random(3)
    Q = MultiSkewPoly([rand_poly(ctx, rng, 2), rand_poly(ctx, rng, 1), rand_poly(ctx, rng, 1)])
    f = rand_poly(ctx, rng, 1)
    a, b = 1, 4
    fb = op_evaluate(f, b, a)
    fab = op_evaluate(skew_mul(f, SkewPoly.const(ctx, ctx.alpha)), b, a)
    point = (b, fb, fab)
    # composing with f and then evaluating at b matches evaluating at the image point
    assert op_evaluate(Q.compose(f, ctx.alpha), b, a) == Q.evaluate(point, a)
    assert Q.s == 2
    with pytest.raises(SkewError):
        MultiSkewPoly([Q[0]])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=5), st.lists(st.integers(0, 8), min_size=1, max_size=5),
       st.integers(0, 8), st.integers(0, 8))
def test_operator_composition_property(fc, gc, a, b):
    ctx = context(3, 2, 1, 2)
    f, g = SkewPoly(ctx, fc), SkewPoly(ctx, gc)
    assert op_evaluate(skew_mul(f, g), b, a) == op_evaluate(f, op_evaluate(g, b, a), a)
