import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from hardy_snumbers import (
    ConstantExponent,
    DomainError,
    GridFunction,
    InputError,
    VariableExponent,
    WeightPair,
    associate_norm,
    conjugate,
    holder_defect,
    integrate,
    log_holder_check,
    luxemburg_norm,
    muckenhoupt_constant,
)

from conftest import UNIT, const, fn, random_step


def modular_root(modular, lo=1e-3, hi=1e3):
    """High-precision bisection for modular(lam) = 1 (modular decreasing in lam)."""
    mpmath.mp.dps = 40
    lo, hi = mpmath.mpf(lo), mpmath.mpf(hi)
    for _ in range(200):
        mid = (lo + hi) / 2
        if modular(mid) > 1:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


# -- luxemburg_norm ------------------------------------------------------------------

@pytest.mark.parametrize("c", [0.3, 1.0, 7.5])
def test_constant_function_p2(c):
    assert luxemburg_norm(const(c), 2.0, (0, 1)) == pytest.approx(c, rel=1e-12)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 7.0])
@pytest.mark.parametrize("t", [0.1, 0.37, 0.9])
def test_indicator_closed_form(p, t):
    f = GridFunction.indicator((0, t), UNIT, 1000)
    assert luxemburg_norm(f, p) == pytest.approx(t ** (1 / p), rel=1e-12)


def test_piecewise_exponent_against_modular_bisection():
    M = 512
    p = GridFunction(UNIT, np.where(np.arange(M) < M // 2, 2.0, 3.0))
    expected = modular_root(lambda lam: 0.5 / lam ** 2 + 0.5 / lam ** 3)
    assert luxemburg_norm(const(1.0, M), VariableExponent(p)) == pytest.approx(expected, rel=1e-10)


def test_luxemburg_zero_and_errors():
    assert luxemburg_norm(const(0.0), 2.0) == 0.0
    with pytest.raises(DomainError):
        luxemburg_norm(const(1.0), 2.0, (0.5, 0.5))
    with pytest.raises(DomainError):
        luxemburg_norm(const(1.0), 2.0, (0.5, 1.5))


# -- associate_norm / conjugate ----------------------------------------------------------

def test_associate_examples():
    assert associate_norm(const(1.0), 3.0) == pytest.approx(1.0)
    g = GridFunction.indicator((0, 0.3), UNIT, 1000)
    assert associate_norm(g, 2.0) == pytest.approx(math.sqrt(0.3), rel=1e-12)


def test_associate_variable_exponent_against_quadrature_oracle():
    M = 4096
    p = fn(lambda x: 2 + x, M)
    q = lambda x: (2 + x) / (1 + x)
    expected = modular_root(lambda lam: mpmath.quad(lambda x: lam ** (-q(x)), [0, 1]))
    assert associate_norm(const(1.0, M), VariableExponent(p)) == pytest.approx(expected, rel=1e-6)


def test_conjugate():
    assert conjugate(ConstantExponent(2.0)).p == 2.0
    assert conjugate(ConstantExponent(3.0)).p == pytest.approx(1.5)
    p = fn(lambda x: 2 + x)
    q = conjugate(VariableExponent(p)).p
    assert np.allclose(q.samples, (2 + q.x) / (1 + q.x))
    back = conjugate(conjugate(VariableExponent(p))).p
    assert np.allclose(back.samples, p.samples, rtol=1e-13)


def test_space_invariants():
    with pytest.raises(InputError):
        ConstantExponent(1.0)
    with pytest.raises(InputError):
        ConstantExponent(math.inf)
    with pytest.raises(InputError):
        VariableExponent(fn(lambda x: 0.9 + x))


# -- integrate --------------------------------------------------------------------------

def test_integrate_examples():
    assert integrate(const(1.0)) == pytest.approx(1.0)
    M = 200
    assert abs(integrate(fn(lambda x: x, M)) - 0.5) <= 1 / M ** 2
    assert integrate(fn(lambda x: np.exp(-x), 4096)) == pytest.approx(1 - math.exp(-1), abs=1e-6)


def test_integrate_additive_and_linear(rng):
    f, g = random_step(rng, 300), random_step(rng, 300)
    assert integrate(f, (0, 0.4)) + integrate(f, (0.4, 1)) == pytest.approx(integrate(f))
    assert integrate(2 * f + g) == pytest.approx(2 * integrate(f) + integrate(g))


# -- holder_defect ------------------------------------------------------------------------

def test_holder_examples(rng):
    assert holder_defect(const(1.0), const(1.0), 2.0) == pytest.approx(1.0)
    f = GridFunction.indicator((0, 0.5), UNIT, 512)
    g = GridFunction.indicator((0.5, 1), UNIT, 512)
    assert holder_defect(f, g, 2.0) == 0.0
    M = 400
    f, g = random_step(rng, M, 5), random_step(rng, M, 7)
    # closed forms for step functions: integral and norms are finite sums
    expected = np.sum(f.samples * g.samples) / M / (
        (np.sum(f.samples ** 3) / M) ** (1 / 3) * (np.sum(g.samples ** 1.5) / M) ** (2 / 3))
    val = holder_defect(f, g, 3.0)
    assert 0 < val <= 1 and val == pytest.approx(expected, rel=1e-12)


def test_holder_zero_norm():
    with pytest.raises(DomainError):
        holder_defect(const(0.0), const(1.0), 2.0)


# -- diagnostics ---------------------------------------------------------------------------

@pytest.mark.parametrize("p", [2.0, 1.3, 4.0])
def test_muckenhoupt_constant_exponent(p):
    assert muckenhoupt_constant(p, UNIT, 4) == pytest.approx(1.0, rel=1e-12)


def test_muckenhoupt_variable_exponent_is_grid_stable():
    f = lambda x: 2 + 0.5 * np.sin(2 * np.pi * x)
    c1 = muckenhoupt_constant(VariableExponent(fn(f, 1024)), UNIT, 8)
    c2 = muckenhoupt_constant(VariableExponent(fn(f, 2048)), UNIT, 8)
    assert math.isfinite(c1) and 1.0 <= c1
    assert abs(c1 - c2) <= 0.05 * c1


def test_log_holder():
    r = log_holder_check(const(2.0, 256))
    assert r.constant == 0.0 and r.passed
    r = log_holder_check(fn(lambda x: 2 + x, 1024))
    # pairwise max over the sample grid
    M = 1024
    x = (np.arange(M) + 0.5) / M
    d = np.abs(x[:, None] - x[None, :])
    mask = (d > 0) & (d <= 0.5)
    brute = np.max(np.where(mask, d * np.log(np.e + 1 / np.where(mask, d, 1)), 0))
    assert r.passed and not r.suspected_jump
    assert r.constant == pytest.approx(brute, rel=1e-12)
    jump = log_holder_check(fn(lambda x: np.where(x < 0.5, 2.0, 3.0), 1024))
    assert jump.suspected_jump and not jump.passed


# -- weights ------------------------------------------------------------------------------

def test_weight_pair_rejects_zeros_and_mismatch():
    with pytest.raises(InputError):
        WeightPair(const(0.0), const(1.0))
    with pytest.raises(InputError):
        WeightPair(const(1.0, 64), const(1.0, 128))
    w = WeightPair(const(1e-20), const(1.0))
    assert w.u.samples.min() == 1e-12


# -- properties ---------------------------------------------------------------------------

samples = st.lists(st.floats(-5, 5, allow_nan=False), min_size=8, max_size=8)
exponents = st.sampled_from([1.2, 1.5, 2.0, 3.0, 6.0])


def _variable_space(M=64):
    return VariableExponent(fn(lambda x: 1.5 + 2 * x * (1 - x) + 0.3 * x, M))


def _gf(vals, M=64):
    return GridFunction(UNIT, np.repeat(np.asarray(vals, float), M // len(vals)))


@given(samples, st.floats(-100, 100).filter(lambda c: abs(c) > 1e-6), st.booleans(), exponents)
def test_homogeneity(vals, c, variable, p):
    f = _gf(vals)
    space = _variable_space() if variable else p
    n1, n2 = luxemburg_norm(c * f, space), luxemburg_norm(f, space)
    assert n1 == pytest.approx(abs(c) * n2, rel=1e-10, abs=1e-300)
    a1, a2 = associate_norm(c * f, space), associate_norm(f, space)
    assert a1 == pytest.approx(abs(c) * a2, rel=1e-10, abs=1e-300)


@given(samples, st.lists(st.floats(0, 1), min_size=8, max_size=8), st.booleans(), exponents)
def test_lattice_monotonicity(vals, shrink, variable, p):
    g = _gf(vals)
    f = _gf(np.asarray(vals) * np.asarray(shrink))
    space = _variable_space() if variable else p
    assert luxemburg_norm(f, space) <= luxemburg_norm(g, space) * (1 + 1e-12)


@given(samples, exponents)
def test_constant_exponent_agreement(vals, p):
    f = _gf(vals)
    closed = (np.sum(np.abs(f.samples) ** p) / f.M) ** (1 / p)
    assert luxemburg_norm(f, p) == pytest.approx(closed, rel=1e-8, abs=1e-300)
    # the variable-exponent solver on a constant exponent agrees too
    pv = VariableExponent(const(p, f.M))
    assert luxemburg_norm(f, pv) == pytest.approx(closed, rel=1e-8, abs=1e-300)


@given(samples, exponents, st.floats(0.05, 0.95))
def test_p_power_additive_over_disjoint_intervals(vals, p, cut):
    f = _gf(vals)
    whole = luxemburg_norm(f, p) ** p
    parts = luxemburg_norm(f, p, (0, cut)) ** p + luxemburg_norm(f, p, (cut, 1)) ** p
    assert parts == pytest.approx(whole, rel=1e-8, abs=1e-300)


def test_holder_randomized_constant_and_variable(rng):
    M = 128
    worst_c, worst_v = 0.0, 0.0
    pv = _variable_space(M)
    for i in range(500):
        f = GridFunction(UNIT, rng.standard_normal(M) * rng.uniform(0.1, 3))
        g = GridFunction(UNIT, rng.standard_normal(M) * rng.uniform(0.1, 3))
        worst_c = max(worst_c, holder_defect(f, g, float(rng.choice([1.5, 2.0, 3.0]))))
        worst_v = max(worst_v, holder_defect(f, g, pv))
    assert worst_c <= 1 + 1e-8
    assert worst_v <= 2 + 1e-8
