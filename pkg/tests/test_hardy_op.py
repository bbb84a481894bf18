import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardy_snumbers import (
    DomainError,
    GridFunction,
    InputError,
    OperatorSpec,
    WeightPair,
    a_profile,
    a_sup,
    apply,
    compactness_profile,
    holder_bound,
    norm_bracket,
    operator_norm_lower,
)
from hardy_snumbers._kernel import op_norm
from hardy_snumbers.hardy_op import local_operator

from conftest import UNIT, const, fn, ones_pair, random_step


def unit_op(p=2.0, M=512, J=None, c=None):
    return OperatorSpec.on(ones_pair(M), p, J, c)


# -- apply ----------------------------------------------------------------------------

def test_apply_identity_weights_gives_primitive():
    op = unit_op()
    Tf = apply(op, const(1.0))
    assert np.allclose(Tf.samples, Tf.x, atol=1e-14)
    Tx = apply(op, fn(lambda x: x))
    assert np.max(np.abs(Tx.samples - Tx.x ** 2 / 2)) <= 1 / 512 ** 2


def test_apply_interior_base_point_changes_sign():
    op = unit_op(c=0.25)
    Tf = apply(op, const(1.0))
    assert np.allclose(Tf.samples, Tf.x - 0.25, atol=1e-14)


def test_apply_vanishes_outside_J():
    op = unit_op(J=(0.25, 0.75))
    Tf = apply(op, const(1.0))
    x = Tf.x
    assert np.all(Tf.samples[(x < 0.25) | (x > 0.75)] == 0)
    inside = (x > 0.25) & (x < 0.75)
    assert np.allclose(Tf.samples[inside], x[inside] - 0.25, atol=1e-14)


@given(st.integers(0, 2 ** 32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_apply_is_linear(seed, alpha, beta):
    rng = np.random.default_rng(seed)
    M = 128
    W = WeightPair(random_step(rng, M), random_step(rng, M))
    op = OperatorSpec.on(W, 2.0, (0.1, 0.9), 0.3)
    f, g = GridFunction(UNIT, rng.standard_normal(M)), GridFunction(UNIT, rng.standard_normal(M))
    lhs = apply(op, alpha * f + beta * g).samples
    rhs = alpha * apply(op, f).samples + beta * apply(op, g).samples
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_apply_grid_mismatch():
    with pytest.raises(InputError):
        apply(unit_op(M=512), const(1.0, 256))


# -- split functional ---------------------------------------------------------------------

def test_a_profile_examples():
    op = unit_op()
    assert a_profile(op, 0.5) == pytest.approx(0.5)
    assert a_profile(op, 0.0) == 0.0 and a_profile(op, 1.0) == 0.0
    with pytest.raises(DomainError):
        a_profile(op, 1.5)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
def test_a_sup_calculus_oracle(p):
    q = p / (p - 1)
    t_star = p / (p + q)
    value, arg = a_sup(unit_op(p))
    assert arg == pytest.approx(t_star, abs=2e-3)
    assert value == pytest.approx(t_star ** (1 / q) * (1 - t_star) ** (1 / p), rel=1e-6)


def test_a_sup_dilation():
    assert a_sup(unit_op(J=(0, 0.5)))[0] == pytest.approx(0.25, rel=1e-6)


# -- norm bracket -------------------------------------------------------------------------

def test_norm_bracket_unit_weights():
    br = norm_bracket(unit_op(2.0, 1024))
    assert br.a_sup == pytest.approx(0.5, rel=1e-6)
    assert br.K == pytest.approx(2.0)
    assert br.lower == pytest.approx(2 / math.pi, abs=1e-3)
    assert br.upper == pytest.approx(1.0, rel=1e-6)
    assert not br.heuristic_K


def test_norm_bracket_variable_exponent_flags():
    W = ones_pair(256)
    from hardy_snumbers import VariableExponent
    br = norm_bracket(OperatorSpec.on(W, VariableExponent(fn(lambda x: 2 + x, 256))))
    assert br.heuristic_K and "heuristic_K" in br.flags and "associate_caveat" in br.flags
    assert br.lower <= br.upper


def test_norm_bracket_randomized(rng):
    M = 128
    for i in range(100):
        p = [1.5, 2.0, 3.0][i % 3]
        W = WeightPair(random_step(rng, M, 4, 0.1, 3), random_step(rng, M, 4, 0.1, 3))
        op = OperatorSpec.on(W, p)
        br = norm_bracket(op, budget=8, restarts=1)
        assert 0 < br.lower <= br.upper
        assert br.lower <= holder_bound(op) * (1 + 1e-9)
        assert br.a_sup <= br.lower * (1 + 1e-12)


def test_operator_norm_lower_volterra_and_budget_monotone():
    op = unit_op(2.0, 1024)
    vals = [operator_norm_lower(op, budget=b, restarts=2) for b in (1, 3, 10, 40)]
    assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(2 / math.pi, abs=1e-4)
    assert vals[-1] <= 2 / math.pi + 1e-6
    with pytest.raises(InputError):
        operator_norm_lower(op, budget=0)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_converged_norm_is_independent_of_base_point(p):
    W = ones_pair(512)
    n0 = op_norm(local_operator(W, p, 0, 1, 0.0))[0]
    n1 = op_norm(local_operator(W, p, 0, 1, 1.0))[0]
    assert n0 == pytest.approx(n1, rel=1e-9)


def test_factor_and_restriction_monotonicity(rng):
    M = 256
    u, v = random_step(rng, M), random_step(rng, M)
    base = op_norm(local_operator(WeightPair(u, v), 2.0, 0, 1, 0))[0]
    bigger = op_norm(local_operator(WeightPair(u * 1.5, v * 2.0), 2.0, 0, 1, 0))[0]
    assert bigger == pytest.approx(3.0 * base, rel=1e-9)
    sub = op_norm(local_operator(WeightPair(u, v), 2.0, 0.2, 0.7, 0.2))[0]
    assert sub <= base * (1 + 1e-9)
    # pointwise larger weights give a larger norm
    up = op_norm(local_operator(WeightPair(u + 0.3, v), 2.0, 0, 1, 0))[0]
    assert up >= base


def test_holder_bound_dominates():
    op = unit_op(2.0)
    assert holder_bound(op) == pytest.approx(1.0)
    assert operator_norm_lower(op) <= holder_bound(op)


# -- compactness profile ---------------------------------------------------------------

def test_compactness_profile_unit_weights():
    prof = compactness_profile(unit_op(2.0, 1024), n_points=6)
    assert len(prof.left) == len(prof.right) == 6
    expected = [0.5 * 2.0 ** -i for i in range(1, 7)]
    assert np.allclose(prof.left, expected, rtol=1e-4)
    assert np.allclose(prof.right, expected, rtol=1e-4)


def test_compactness_profile_singular_weight_decays():
    M = 2048
    W = WeightPair(fn(lambda x: x ** -0.4, M), const(1.0, M))
    prof = compactness_profile(OperatorSpec.on(W, 2.0), n_points=8)
    assert all(b < a for a, b in zip(prof.left, prof.left[1:]))
    assert prof.left[-1] < 0.25 * prof.left[0]
    with pytest.raises(InputError):
        compactness_profile(unit_op(), n_points=1)
