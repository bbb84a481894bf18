"""The weighted Hardy operator ``T_{c,J} f(x) = v(x) chi_J(x) int_c^x u f chi_J``.

Besides applying the operator this module brackets its norm: the split
functional ``A_J`` gives the two-sided estimate ``A_J <= ||T|| <= K A_J``,
and a p-power ascent gives a certified lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernel
from .bfs_core import (
    ConstantExponent,
    SpaceSpec,
    WeightPair,
    associate_caveat,
    associate_norm,
    exponent_cells,
    luxemburg_norm,
    space_from,
)
from .errors import DomainError, InputError
from .grid import GridFunction, Interval, as_interval, cells

DEFAULT_K_VARIABLE = 4.0


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    c: float
    J: Interval
    weights: WeightPair
    space: SpaceSpec

    def __post_init__(self):
        object.__setattr__(self, "J", as_interval(self.J))
        object.__setattr__(self, "space", space_from(self.space))
        iv = self.weights.interval
        if not iv.contains(self.J):
            raise DomainError("J must lie inside the weights' interval")
        if not iv.a - 1e-12 * iv.length <= self.c <= iv.b + 1e-12 * iv.length:
            raise DomainError(f"base point c={self.c} outside [{iv.a}, {iv.b}]")

    @classmethod
    def on(cls, weights: WeightPair, space, J=None, c=None) -> "OperatorSpec":
        J = as_interval(J) if J is not None else weights.interval
        return cls(J.a if c is None else float(c), J, weights, space)

    @property
    def u(self) -> GridFunction:
        return self.weights.u

    @property
    def v(self) -> GridFunction:
        return self.weights.v

    def restricted(self, J, c=None) -> "OperatorSpec":
        J = as_interval(J)
        return OperatorSpec(J.a if c is None else c, J, self.weights, self.space)


@dataclass(frozen=True)
class NormBracket:
    lower: float
    upper: float
    method: str
    a_sup: float = 0.0
    argmax: float = math.nan
    K: float = 1.0
    heuristic_K: bool = False
    flags: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper * (1 + 1e-9):
            raise ValueError(f"invalid bracket [{self.lower}, {self.upper}]")


def local_operator(weights: WeightPair, space: SpaceSpec, c: float, d: float, base: float) -> _kernel.LocalOp:
    """Discrete ``T_{base,(c,d)}`` on the cells of ``(c, d)``; the base point is clipped into ``[c, d]``."""
    space = space_from(space)
    iv, M = weights.interval, weights.M
    base = min(max(base, c), d)
    kl0, kl1, wl = cells(iv, M, c, base)
    kr0, kr1, wr = cells(iv, M, base, d)
    u, v = weights.u.samples, weights.v.samples
    if wl.size and wr.size:
        w = np.concatenate([wl, wr])
        us = np.concatenate([u[kl0:kl1], u[kr0:kr1]])
        vs = np.concatenate([v[kl0:kl1], v[kr0:kr1]])
        p = exponent_cells(space, iv, M, kl0, kl1)
        if not isinstance(space, ConstantExponent):
            p = np.concatenate([p, exponent_cells(space, iv, M, kr0, kr1)])
        return _kernel.LocalOp(w, us, vs, p, k=wl.size)
    if wl.size:
        return _kernel.LocalOp(wl, u[kl0:kl1], v[kl0:kl1], exponent_cells(space, iv, M, kl0, kl1), k=wl.size)
    return _kernel.LocalOp(wr, u[kr0:kr1], v[kr0:kr1], exponent_cells(space, iv, M, kr0, kr1), k=0)


def as_local(op: OperatorSpec) -> _kernel.LocalOp:
    return local_operator(op.weights, op.space, op.J.a, op.J.b, op.c)


def apply(op: OperatorSpec, f: GridFunction) -> GridFunction:
    """``T_{c,J} f`` sampled on the weights' grid; negative left of ``c`` for positive integrands."""
    if not f.same_grid(op.u):
        raise InputError("f must live on the weights' grid")
    iv, M = op.weights.interval, op.weights.M
    k0, k1, w = cells(iv, M, op.J.a, op.J.b)
    s = np.zeros(M)
    s[k0:k1] = op.u.samples[k0:k1] * f.samples[k0:k1] * w
    G = np.cumsum(s) - 0.5 * s
    # exact cumulative integral from J.a up to c of the piecewise-constant integrand
    ck0, ck1, cw = cells(iv, M, op.J.a, min(max(op.c, op.J.a), op.J.b))
    Gc = float(np.dot(cw, op.u.samples[ck0:ck1] * f.samples[ck0:ck1]))
    x = op.u.x
    inside = (x > op.J.a) & (x < op.J.b)
    return f.with_samples(np.where(inside, op.v.samples * (G - Gc), 0.0))


def a_profile(op: OperatorSpec, t: float) -> float:
    """``A_J(t) = ||v chi_(t,d)||_E * ||u chi_(c,t)||_E'`` for ``J = (c, d)``."""
    c, d = op.J
    if not c <= t <= d:
        raise DomainError(f"split point {t} outside ({c}, {d})")
    head = associate_norm(op.u, op.space, (c, t)) if t > c else 0.0
    tail = luxemburg_norm(op.v, op.space, (t, d)) if t < d else 0.0
    return head * tail


def a_sup(op: OperatorSpec, n_scan: int = 256, n_refine: int = 3):
    """Maximize ``A_J(t)``: a uniform scan then bounded refinement in the best cells.

    Returns ``(value, argmax)``.
    """
    c, d = op.J
    ts = np.linspace(c, d, n_scan + 1)
    vals = np.array([a_profile(op, t) for t in ts])
    best_i = int(np.argmax(vals))
    best, arg = float(vals[best_i]), float(ts[best_i])
    for i in np.argsort(-vals, kind="stable")[:n_refine]:
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, n_scan)]
        res = minimize_scalar(lambda t: -a_profile(op, t), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-10 * (d - c)})
        if -res.fun > best:
            best, arg = float(-res.fun), float(res.x)
    return best, arg


def muckenhoupt_K(space: SpaceSpec, K_variable: float = DEFAULT_K_VARIABLE):
    """Upper-bracket constant: ``p^(1/p) q^(1/q)`` for constant ``p``, a configured default otherwise."""
    if isinstance(space, ConstantExponent):
        p = space.p
        q = p / (p - 1)
        return p ** (1 / p) * q ** (1 / q), False
    return float(K_variable), True


def operator_norm_lower(op: OperatorSpec, budget: int = 20, restarts: int = 5, seed: int = 0,
                        return_maximizer: bool = False):
    """Certified lower bound for ``||T_{c,J}||`` on ``E(J)``.

    Takes the best ratio ``||Tf|| / ||f||`` over a family of indicators and
    the iterates of ``budget`` rounds of p-power ascent started from a
    constant and from ``restarts`` seeded random positive functions.
    Non-decreasing in ``budget``.
    """
    if budget < 1:
        raise InputError("budget must be >= 1")
    L = as_local(op)
    n = L.n
    best, best_f = 0.0, None
    for f in _indicator_family(L.w):
        r = L.ratio(f)
        if r > best:
            best, best_f = r, f
    rng = np.random.default_rng(seed)
    starts = [np.ones(n)] + [rng.uniform(0.1, 1.0, n) for _ in range(restarts)]
    for f in starts:
        f = f / L.norm(f)
        for _ in range(budget):
            r = L.ratio(f)
            if r > best:
                best, best_f = r, f
            f = L.ascent_step(f)
            if not np.all(np.isfinite(f)) or not f.any():
                break
        else:
            r = L.ratio(f)
            if r > best:
                best, best_f = r, f
    return (best, best_f) if return_maximizer else best


def _indicator_family(w, levels: int = 4):
    n = w.size
    for level in range(levels):
        cuts = np.linspace(0, n, 2 ** level + 1).round().astype(int)
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi > lo:
                f = np.zeros(n)
                f[lo:hi] = 1.0
                yield f


def norm_bracket(op: OperatorSpec, budget: int = 20, restarts: int = 5, seed: int = 0,
                 K_variable: float = DEFAULT_K_VARIABLE) -> NormBracket:
    """``[max(A_J, ascent lower bound), K A_J]``."""
    A, arg = a_sup(op)
    lower = max(A, operator_norm_lower(op, budget, restarts, seed))
    K, heuristic = muckenhoupt_K(op.space, K_variable)
    flags = []
    if heuristic:
        flags.append("heuristic_K")
    if associate_caveat(op.space):
        flags.append("associate_caveat")
    method = "A_J scan + p-power ascent; K=" + ("configured" if heuristic else "p^(1/p) q^(1/q)")
    return NormBracket(lower, max(K * A, lower), method, A, arg, K, heuristic, tuple(flags))


def holder_bound(op: OperatorSpec) -> float:
    """``||u chi_J||_E' ||v chi_J||_E``, an upper bound for ``||T_{c,J}||``."""
    return associate_norm(op.u, op.space, op.J) * luxemburg_norm(op.v, op.space, op.J)


@dataclass(frozen=True)
class CompactnessProfile:
    x_left: list
    left: list
    x_right: list
    right: list


def compactness_profile(op: OperatorSpec, n_points: int = 10, n_scan: int = 64) -> CompactnessProfile:
    """Boundary decay of the split functional at both ends of ``J = (a, b)``.

    ``left[i] = sup_{a<r<x_i} ||v chi_(r,x_i)||_E ||u chi_(a,r)||_E'`` with
    ``x_i = a + |J| 2^-i``; ``right`` mirrors this at ``b``.  Both vanish
    in the limit for a compact operator.
    """
    if n_points < 2:
        raise InputError("n_points must be >= 2")
    a, b = op.J
    L = b - a
    xl, left, xr, right = [], [], [], []
    for i in range(1, n_points + 1):
        x = a + L * 2.0 ** -i
        sub = op.restricted((a, x))
        xl.append(x)
        left.append(a_sup(sub, n_scan=n_scan, n_refine=1)[0])
        y = b - L * 2.0 ** -i
        xr.append(y)
        right.append(a_sup(op.restricted((y, b)), n_scan=n_scan, n_refine=1)[0])
    return CompactnessProfile(xl, left, xr, right)
