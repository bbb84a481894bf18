import math

import numpy as np
import pytest

from hardy_snumbers import (
    GridFunction,
    InputError,
    OperatorSpec,
    WeightPair,
    apply,
    discretize,
    script_a_l2,
    svd_snumbers,
)

from conftest import UNIT, const, fn, ones_pair


def test_matrix_entries():
    M = 32
    W = WeightPair(fn(lambda x: 1 + x, M), fn(lambda x: 2 - x, M))
    K = discretize(OperatorSpec.on(W, 2.0)).matrix
    h = 1 / M
    u, v = W.u.samples, W.v.samples
    assert K[5, 2] == pytest.approx(v[5] * u[2] * h)
    assert K[5, 5] == pytest.approx(v[5] * u[5] * h / 2)
    assert K[2, 5] == 0.0


def test_matvec_agrees_with_apply(rng):
    M = 256
    W = WeightPair(fn(lambda x: 1 + x, M), fn(np.exp, M))
    op = OperatorSpec.on(W, 2.0)
    f = GridFunction(UNIT, rng.standard_normal(M))
    K = discretize(op).matrix
    assert np.max(np.abs(K @ f.samples - apply(op, f).samples)) <= 2 / M


def test_volterra_singular_values():
    km = discretize(OperatorSpec.on(ones_pair(512), 2.0))
    s = svd_snumbers(km, 5)
    exact = 2 / ((2 * np.arange(1, 6) - 1) * math.pi)
    assert np.allclose(s, exact, rtol=1e-4)
    assert np.all(np.diff(s) <= 0)


def test_grid_convergence():
    W = WeightPair(const(1.0, 256), fn(lambda x: np.exp(-x), 256))
    op = OperatorSpec.on(W, 2.0)
    for M in (256, 512):
        s1 = svd_snumbers(discretize(op, M), 10)
        s2 = svd_snumbers(discretize(op, 2 * M), 10)
        assert np.max(np.abs(s1 - s2)) <= 10 / M


def test_weighted_asymptote():
    W = WeightPair(const(1.0, 1024), fn(lambda x: np.exp(-x), 1024))
    s = svd_snumbers(discretize(OperatorSpec.on(W, 2.0)), 40)
    ref = (1 - math.exp(-1)) / math.pi
    n = np.arange(1, 41)
    assert abs(40 * s[39] / ref - 1) <= 0.02
    # the half-index shift of the unweighted case persists
    assert abs((40 - 0.5) * s[39] / ref - 1) <= 3e-3
    assert np.all(n * s > 0)


def test_errors():
    op = OperatorSpec.on(ones_pair(64), 2.0)
    with pytest.raises(InputError):
        discretize(op, 8)
    with pytest.raises(InputError):
        svd_snumbers(discretize(op), 65)


def test_projected_l2_unit_weights_and_resolution():
    vals = [script_a_l2((0, 1), ones_pair(M)) for M in (256, 512, 1024)]
    assert vals[-1] == pytest.approx(1 / math.pi, rel=1e-4)
    W = lambda M: WeightPair(fn(lambda x: 1 + x, M), fn(lambda x: np.exp(-x), M))
    a, b = script_a_l2((0.2, 0.9), W(512)), script_a_l2((0.2, 0.9), W(1024))
    assert abs(a - b) <= 1e-3 * b
