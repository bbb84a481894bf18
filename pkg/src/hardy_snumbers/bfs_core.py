"""Lebesgue and variable-exponent Lebesgue spaces on a grid.

Norms are Luxemburg norms of the piecewise-constant interpretation of the
samples.  The associate norm is the Luxemburg norm with the conjugate
exponent; for a variable exponent that is only equivalent to the true
associate norm (within a factor 2), which results record via
``associate_caveat``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernel
from .errors import DomainError, InputError
from .grid import GridFunction, Interval, as_interval, cells, midpoints

WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class ConstantExponent:
    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (1.0 < p < math.inf):
            raise InputError(f"exponent must satisfy 1 < p < inf, got {p}")
        object.__setattr__(self, "p", p)

    @property
    def p_minus(self) -> float:
        return self.p

    @property
    def p_plus(self) -> float:
        return self.p

    variable = False


@dataclass(frozen=True, eq=False)
class VariableExponent:
    p: GridFunction

    def __post_init__(self):
        s = self.p.samples
        if not (s.min() > 1.0):
            raise InputError(f"variable exponent needs p_- > 1, got {s.min()}")

    @property
    def p_minus(self) -> float:
        return float(self.p.samples.min())

    @property
    def p_plus(self) -> float:
        return float(self.p.samples.max())

    variable = True


SpaceSpec = Union[ConstantExponent, VariableExponent]


def space_from(p) -> SpaceSpec:
    if isinstance(p, (ConstantExponent, VariableExponent)):
        return p
    if isinstance(p, GridFunction):
        return VariableExponent(p)
    return ConstantExponent(float(p))


def conjugate(space: SpaceSpec) -> SpaceSpec:
    """Pointwise conjugate exponent, ``1/p + 1/q = 1``."""
    if isinstance(space, ConstantExponent):
        return ConstantExponent(_kernel.conj(space.p))
    return VariableExponent(space.p.with_samples(_kernel.conj(space.p.samples)))


def exponent_cells(space: SpaceSpec, interval: Interval, M: int, k0: int, k1: int):
    """Exponent restricted to cells ``k0..k1-1`` of the ``(interval, M)`` grid."""
    if isinstance(space, ConstantExponent):
        return space.p
    pf = space.p
    if pf.interval != interval or pf.M != M:
        xs = midpoints(interval, M)[k0:k1]
        return np.interp(xs, pf.x, pf.samples)
    return pf.samples[k0:k1]


def _restrict(f: GridFunction, space: SpaceSpec, J):
    J = as_interval(J) if J is not None else f.interval
    if not f.interval.contains(J):
        raise DomainError(f"({J.a}, {J.b}) is not inside ({f.interval.a}, {f.interval.b})")
    k0, k1, w = cells(f.interval, f.M, J.a, J.b)
    return w, f.samples[k0:k1], exponent_cells(space, f.interval, f.M, k0, k1)


def luxemburg_norm(f: GridFunction, space: SpaceSpec, J=None) -> float:
    """``||f chi_J||`` in ``E(J)``; the classical ``p``-norm for a constant exponent."""
    w, s, p = _restrict(f, space_from(space), J)
    return _kernel.lux_norm(w, s, p)


def associate_norm(g: GridFunction, space: SpaceSpec, J=None) -> float:
    """Conjugate-exponent Luxemburg norm of ``g chi_J``.

    Exact associate norm for constant ``p``; for a variable exponent it lies
    within ``[1/2, 1]`` of the true one.
    """
    w, s, p = _restrict(g, space_from(space), J)
    return _kernel.lux_norm(w, s, _kernel.conj(p))


def associate_caveat(space: SpaceSpec) -> bool:
    return isinstance(space, VariableExponent)


def integrate(f: GridFunction, J=None) -> float:
    """Composite midpoint rule over ``J`` (fractional boundary cells)."""
    J = as_interval(J) if J is not None else f.interval
    if not f.interval.contains(J):
        raise DomainError(f"({J.a}, {J.b}) is not inside ({f.interval.a}, {f.interval.b})")
    k0, k1, w = cells(f.interval, f.M, J.a, J.b)
    return float(np.dot(w, f.samples[k0:k1]))


def holder_defect(f: GridFunction, g: GridFunction, space: SpaceSpec, J=None) -> float:
    """``int_J |fg| / (||f||_E ||g||_E')``; at most 1 (constant p) or 2 (variable p)."""
    if not f.same_grid(g):
        raise InputError("f and g must share a grid")
    space = space_from(space)
    nf = luxemburg_norm(f, space, J)
    ng = associate_norm(g, space, J)
    if nf == 0.0 or ng == 0.0:
        raise DomainError("Hölder defect undefined for a zero-norm function")
    return integrate(f.with_samples(np.abs(f.samples * g.samples)), J) / (nf * ng)


def muckenhoupt_constant(space: SpaceSpec, I, depth: int = 6, M: int | None = None) -> float:
    """Largest ``|J|^-1 ||chi_J||_E ||chi_J||_E'`` over a finite family of ``J`` in ``I``.

    The family is every dyadic subinterval down to level ``depth`` plus
    windows of each dyadic width slid at a quarter of that width.  The result
    is a lower bound for the supremum over all subintervals.
    """
    if depth < 1:
        raise InputError("depth must be >= 1")
    space = space_from(space)
    I = as_interval(I)
    if isinstance(space, ConstantExponent):
        grid_iv, grid_M = I, M or 2 ** (depth + 2)
    else:
        grid_iv, grid_M = space.p.interval, M or space.p.M
        if not grid_iv.contains(I):
            raise DomainError("I must lie inside the exponent's interval")
    best = 0.0
    for level in range(depth + 1):
        width = I.length / 2 ** level
        starts = set(I.a + width * np.arange(2 ** level))
        if level >= 1:
            stride = width / 4
            n_win = int(round((I.length - width) / stride))
            starts.update(I.a + stride * np.arange(n_win + 1))
        for s in sorted(starts):
            e = min(s + width, I.b)
            if e - s <= 0:
                continue
            k0, k1, w = cells(grid_iv, grid_M, s, e)
            p = exponent_cells(space, grid_iv, grid_M, k0, k1)
            one = np.ones(w.size)
            val = _kernel.lux_norm(w, one, p) * _kernel.lux_norm(w, one, _kernel.conj(p)) / (e - s)
            best = max(best, val)
    return best


@dataclass(frozen=True)
class LogHolderReport:
    constant: float
    passed: bool
    short_scale: float
    short_scale_coarse: float
    suspected_jump: bool


def log_holder_check(p: GridFunction, short_lags: int = 4) -> LogHolderReport:
    """Empirical log-Hölder constant of a sampled exponent.

    ``constant`` is ``max |p(x)-p(y)| log(e + 1/|x-y|)`` over sample pairs
    with ``|x-y| <= 1/2``.  A jump is suspected when the same maximum taken
    over the shortest ``short_lags`` separations fails to shrink when the
    grid is halved (a smooth exponent roughly halves it, a jump keeps it).
    """
    s = p.samples
    pm, pp = float(s.min()), float(s.max())
    h = p.h
    C = _lag_max(s, h, max_lag=min(p.M - 1, int(math.floor(0.5 / h + 1e-9))))
    fine = _lag_max(s, h, max_lag=min(short_lags, p.M - 1))
    coarse_s = 0.5 * (s[0 : 2 * (p.M // 2) : 2] + s[1 : 2 * (p.M // 2) : 2])
    coarse = _lag_max(coarse_s, 2 * h, max_lag=min(short_lags, coarse_s.size - 1))
    jump = fine > 1e-12 and fine > 0.75 * coarse
    passed = math.isfinite(C) and pm > 1.0 and math.isfinite(pp) and not jump
    return LogHolderReport(C, passed, fine, coarse, jump)


def _lag_max(s, h, max_lag):
    best = 0.0
    for lag in range(1, max_lag + 1):
        d = float(np.abs(s[lag:] - s[:-lag]).max())
        best = max(best, d * math.log(math.e + 1.0 / (lag * h)))
    return best


@dataclass(frozen=True, eq=False)
class WeightPair:
    u: GridFunction
    v: GridFunction

    def __post_init__(self):
        if not self.u.same_grid(self.v):
            raise InputError("u and v must share interval and grid")
        for name, g in (("u", self.u), ("v", self.v)):
            if np.any(g.samples < 0):
                raise InputError(f"weight {name} has negative samples")
            if np.any(g.samples == 0):
                raise InputError(f"weight {name} vanishes on a grid cell")
        object.__setattr__(self, "u", self.u.with_samples(np.maximum(self.u.samples, WEIGHT_FLOOR)))
        object.__setattr__(self, "v", self.v.with_samples(np.maximum(self.v.samples, WEIGHT_FLOOR)))

    @property
    def interval(self) -> Interval:
        return self.u.interval

    @property
    def M(self) -> int:
        return self.u.M

    def scaled(self, lam: float = 1.0, mu: float = 1.0) -> "WeightPair":
        return WeightPair(self.u * lam, self.v * mu)

    def check_admissible(self, space: SpaceSpec) -> None:
        """Conditions (u chi_(a,x) in E', chi_(x,b) v in E) on the whole interval."""
        nu = associate_norm(self.u, space)
        nv = luxemburg_norm(self.v, space)
        if not (math.isfinite(nu) and math.isfinite(nv)):
            raise InputError("weights are not admissible: infinite norm")
