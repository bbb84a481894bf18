"""Equal-level partitions and the s-number estimates they give.

For a level ``eps`` the interval is cut left to right: the first piece
``(a, a1)`` has ``||T_{a,(a,a1)}|| = eps``, every following piece has
``A-hat = eps``, and the last one has ``A-hat <= eps``.  The number of
pieces ``N(eps)`` is a non-increasing step function; ``eps_N`` is the level
where exactly ``N`` pieces close up, and ``s_N(T)`` is comparable to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bfs_core import ConstantExponent, associate_caveat, integrate
from .errors import InputError, NumericError, ResolutionError
from .grid import GridFunction, Interval
from .hardy_op import OperatorSpec
from .script_a import NormMaps

FIRST_NORM, A_HAT = "first_norm", "a_hat"
MIN_CELLS = 1.0


@dataclass(frozen=True)
class IntervalValue:
    kind: str
    value: float


@dataclass(frozen=True)
class PartitionResult:
    epsilon: float
    points: tuple
    per_interval: tuple

    @property
    def N(self) -> int:
        return len(self.points) - 1

    def check(self, rtol: float = 1e-3) -> None:
        """Raise ``AssertionError`` unless the partition meets its defining equalities."""
        pts = np.asarray(self.points)
        assert np.all(np.diff(pts) > 0), "points must increase"
        eps = self.epsilon
        first = self.per_interval[0]
        assert first.kind == FIRST_NORM
        if self.N == 1:
            assert first.value <= eps * (1 + rtol)
            return
        assert abs(first.value - eps) <= rtol * eps, (first.value, eps)
        for iv in self.per_interval[1:-1]:
            assert iv.kind == A_HAT and abs(iv.value - eps) <= rtol * eps, (iv.value, eps)
        assert self.per_interval[-1].value <= eps * (1 + rtol)


class Marcher:
    """Left-to-right construction of level-``eps`` partitions for one operator."""

    def __init__(self, op: OperatorSpec, xtol: float = 1e-10, min_cells: float = MIN_CELLS):
        self.op = op
        self.a, self.b = op.J
        self.maps = NormMaps(op.weights, op.space, xtol=xtol)
        self.xtol = xtol
        self.min_width = min_cells * op.weights.interval.length / op.weights.M
        self._total = None

    @property
    def total_norm(self) -> float:
        """``||T_{a,(a,b)}||``, the largest useful level."""
        if self._total is None:
            self._total = self.maps.right(self.a, self.b)
        return self._total

    def first_cut(self, eps: float):
        """``a1`` with ``||T_{a,(a,a1)}|| = eps``, or ``None`` if the whole interval stays below."""
        a, b = self.a, self.b
        if self.total_norm <= eps:
            return None
        return brentq(lambda y: self.maps.right(a, y) - eps, a, b,
                      xtol=self.xtol * (b - a), rtol=4 * np.finfo(float).eps, maxiter=200)

    def next_cut(self, c: float, eps: float):
        """``d`` with ``A-hat(c, d) = eps``; ``None`` if ``A-hat(c, b) <= eps``."""
        b = self.b
        if self.maps.a_hat(c, b)[0] <= eps:
            return None
        return brentq(lambda y: self.maps.a_hat(c, y)[0] - eps, c, b,
                      xtol=self.xtol * (b - self.a), rtol=4 * np.finfo(float).eps, maxiter=200)

    def march(self, eps: float, max_cuts=None):
        """Cut points ``a1 < a2 < ...`` at level ``eps`` (at most ``max_cuts`` of them)."""
        if not eps > 0:
            raise InputError("eps must be positive")
        cuts = []
        x = self.first_cut(eps)
        while x is not None:
            left = cuts[-1] if cuts else self.a
            if x - left < self.min_width:
                raise ResolutionError(f"level {eps:g} needs pieces narrower than the grid cell",
                                      {"eps": eps, "piece": (left, x)})
            cuts.append(x)
            if max_cuts is not None and len(cuts) >= max_cuts:
                break
            x = self.next_cut(x, eps)
        return cuts

    def result(self, eps: float, cuts) -> PartitionResult:
        pts = [self.a, *cuts, self.b]
        vals = [IntervalValue(FIRST_NORM, self.maps.right(self.a, pts[1]))]
        for c, d in zip(pts[1:-1], pts[2:]):
            vals.append(IntervalValue(A_HAT, self.maps.a_hat(c, d)[0]))
        return PartitionResult(float(eps), tuple(float(p) for p in pts), tuple(vals))


def count_intervals(eps: float, op: OperatorSpec, marcher: Marcher | None = None):
    """``(N(eps), partition)`` from greedy left-to-right marching."""
    m = marcher or Marcher(op)
    cuts = m.march(eps)
    return len(cuts) + 1, m.result(eps, cuts)


def solve_epsilon(N: int, op: OperatorSpec, marcher: Marcher | None = None, rtol: float = 1e-9) -> PartitionResult:
    """Level ``eps_N`` whose partition has exactly ``N`` pieces and a closing last piece.

    After ``N - 1`` cuts the remaining piece has ``A-hat`` above the level
    when the level is too small and below it (or the cuts run out) when it is
    too large; the crossing is located by Brent's method on ``log eps``.
    """
    if N < 2:
        raise InputError("N must be >= 2")
    if N > op.weights.M / 8:
        raise ResolutionError(f"N={N} is not resolvable on a grid of {op.weights.M} cells")
    m = marcher or Marcher(op)
    hi = m.total_norm
    lo = hi / (8 * N)

    def residual(log_eps):
        eps = math.exp(log_eps)
        cuts = m.march(eps, max_cuts=N - 1)
        if len(cuts) < N - 1:
            return -1.0 - (N - 1 - len(cuts))
        return m.maps.a_hat(cuts[-1], m.b)[0] / eps - 1.0

    r_lo = residual(math.log(lo))
    for _ in range(30):
        if r_lo > 0:
            break
        lo /= 2
        r_lo = residual(math.log(lo))
    else:
        raise NumericError("could not bracket eps_N from below", {"N": N, "lo": lo})
    log_eps = brentq(residual, math.log(lo), math.log(hi), xtol=rtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    eps = math.exp(log_eps)
    cuts = m.march(eps, max_cuts=N - 1)
    # land on the side where the cuts exist
    for _ in range(60):
        if len(cuts) == N - 1:
            break
        eps *= 1 - rtol
        cuts = m.march(eps, max_cuts=N - 1)
    return m.result(eps, cuts)


@dataclass(frozen=True)
class SNumberEstimate:
    N: int
    epsilon_N: float
    lower: float
    upper: float
    notes: tuple = field(default_factory=tuple)
    partition: PartitionResult | None = None


def snum_estimate(N: int, op: OperatorSpec, c_low: float = 1.0, c_up: float = 1.0,
                  marcher: Marcher | None = None) -> SNumberEstimate:
    """Bracket ``[c_low eps_N, c_up eps_N]`` for the ``N``-th s-number.

    The same bracket covers the approximation, Gelfand, Kolmogorov,
    Bernstein and isomorphism numbers, which are ordered between the
    approximation and isomorphism numbers.  The constants are configured,
    not sharp.
    """
    if c_low > c_up:
        raise InputError("c_low must not exceed c_up")
    part = solve_epsilon(N, op, marcher)
    eps = part.epsilon
    notes = ("equivalence constants are configured, not sharp",
             "bracket applies to a_N, c_N, d_N, b_N, i_N")
    if associate_caveat(op.space):
        notes += ("associate_caveat",)
    return SNumberEstimate(N, eps, c_low * eps, c_up * eps, notes, part)


def gamma_p(p: float) -> float:
    """``pi^-1 p^(1/q) q^(1/p) sin(pi/p)``."""
    q = p / (p - 1)
    return p ** (1 / q) * q ** (1 / p) * math.sin(math.pi / p) / math.pi


def variable_density(p):
    """``(q p^(p-1))^(1/p) sin(pi/p) / (2 pi)`` pointwise; reduces to ``gamma_p / 2`` for constant ``p``."""
    p = np.asarray(p, dtype=float)
    q = p / (p - 1)
    return (q * p ** (p - 1)) ** (1 / p) * np.sin(np.pi / p) / (2 * math.pi)


@dataclass(frozen=True)
class AsymptoteRow:
    N: int
    epsilon_N: float
    N_eps: float
    ratio: float


@dataclass(frozen=True)
class AsymptoteReport:
    rows: tuple
    integral_uv: float
    reference: float
    reference_kind: str
    flags: tuple

    @property
    def min_N_eps(self) -> float:
        return min(r.N_eps for r in self.rows)

    @property
    def max_N_eps(self) -> float:
        return max(r.N_eps for r in self.rows)


def reference_constant(op: OperatorSpec):
    """``(integral of u v, reference limit for N eps_N, kind, flags)``."""
    uv = op.u * op.v
    I_uv = integrate(uv, op.J)
    if isinstance(op.space, ConstantExponent):
        return I_uv, 0.5 * gamma_p(op.space.p) * I_uv, "half_gamma_p_integral_uv", ()
    from .bfs_core import exponent_cells
    from .grid import cells
    iv, M = op.weights.interval, op.weights.M
    k0, k1, w = cells(iv, M, op.J.a, op.J.b)
    p = exponent_cells(op.space, iv, M, k0, k1)
    ref = float(np.dot(w, variable_density(p) * uv.samples[k0:k1]))
    flags = ["equivalence_only", "associate_caveat"]
    if not (np.allclose(op.u.samples, op.u.samples[0]) and np.allclose(op.v.samples, op.v.samples[0])):
        flags.append("reference_only")
    return I_uv, ref, "variable_exponent_integral", tuple(flags)


def asymptote(N_list, op: OperatorSpec, marcher: Marcher | None = None) -> AsymptoteReport:
    """Table of ``(N, eps_N, N eps_N)`` against the reference constant."""
    N_list = list(N_list)
    if not N_list:
        raise InputError("N_list must be non-empty")
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise InputError("N_list must be increasing")
    m = marcher or Marcher(op)
    I_uv, ref, kind, flags = reference_constant(op)
    rows = []
    for N in N_list:
        eps = solve_epsilon(N, op, m).epsilon
        rows.append(AsymptoteRow(N, eps, N * eps, N * eps / ref))
    return AsymptoteReport(tuple(rows), I_uv, ref, kind, flags)
