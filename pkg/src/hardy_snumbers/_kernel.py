"""Discrete engine behind every norm and operator computation.

Functions here work on raw cell data: a vector ``w`` of cell widths and
per-cell samples.  The exponent ``p`` is either a Python float (constant
exponent) or an array with one entry per cell (variable exponent).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericError

_TINY = np.finfo(float).tiny


def is_const(p) -> bool:
    return np.ndim(p) == 0


def conj(p):
    return p / (p - 1.0)


def lux_norm(w, f, p) -> float:
    """Luxemburg norm ``inf{lam > 0 : sum w (|f|/lam)^p <= 1}``."""
    a = np.abs(f)
    m = float(a.max()) if a.size else 0.0
    if m == 0.0:
        return 0.0
    g = a / m
    if is_const(p):
        return m * float(np.dot(w, g ** p)) ** (1.0 / p)
    return m * _unit_scale(w, g, p)


def _unit_scale(w, g, p) -> float:
    # Solve sum w g^p mu^-p = 1 for mu, 0 <= g <= 1, by Newton on s = log mu
    # safeguarded by the bracket [|g|_1/(1+L), 1+L].
    keep = g > 0
    w, g, p = w[keep], g[keep], p[keep]
    L = float(w.sum())
    lg = np.log(g)
    lo = math.log(max(float(np.dot(w, g)) / (1.0 + L), _TINY))
    hi = math.log1p(L)
    s = min(max(math.log(float(np.dot(w, g ** p))) / float(p.mean()), lo), hi)
    for _ in range(200):
        t = w * np.exp(p * (lg - s))
        rho = float(t.sum())
        if rho > 1.0:
            lo = s
        else:
            hi = s
        F = math.log(rho)
        dF = -float(np.dot(p, t)) / rho
        s_new = s - F / dF
        if not lo <= s_new <= hi:
            s_new = 0.5 * (lo + hi)
        if abs(s_new - s) <= 1e-15 * max(1.0, abs(s)) or hi - lo <= 1e-15 * max(1.0, abs(s)):
            return math.exp(s_new)
        s = s_new
    raise NumericError("Luxemburg solver did not converge", {"bracket": (lo, hi)})


def modular(w, f, p, lam: float = 1.0) -> float:
    return float(np.dot(w, (np.abs(f) / lam) ** p))


def norming_direction(w, g, p):
    """Gradient direction of ``f -> ||f||`` at ``g`` (a supporting functional, up to scale)."""
    if is_const(p):
        return np.sign(g) * np.abs(g) ** (p - 1.0)
    lam = lux_norm(w, g, p)
    if lam == 0.0:
        return np.zeros_like(g)
    return np.sign(g) * p * np.abs(g / lam) ** (p - 1.0)


def dual_maximizer(w, h, p):
    """Unit-norm ``f`` maximizing ``sum w h f`` over the unit ball of ``L^p``.

    For a variable exponent the Lagrange condition gives
    ``f = sign(h) (|h| / (mu p))^(q-1)``, and the multiplier ``mu`` is the
    ``L^q`` Luxemburg norm of ``|h| / p``.
    """
    if is_const(p):
        q = conj(p)
        f = np.sign(h) * np.abs(h) ** (q - 1.0)
        n = lux_norm(w, f, p)
        return f / n if n > 0 else f
    q = conj(p)
    r = np.abs(h) / p
    mu = lux_norm(w, r, q)
    if mu == 0.0:
        return np.zeros_like(h)
    return np.sign(h) * (r / mu) ** (q - 1.0)


class LocalOp:
    """Hardy operator ``f -> v(x) int_x0^x u f`` on a run of cells.

    ``k`` is the index of the cell boundary where the base point sits:
    ``k = 0`` integrates from the left end, ``k = n`` from the right end.
    Values are collocated at cell midpoints, so the diagonal contributes half
    a cell.
    """

    __slots__ = ("w", "u", "v", "p", "k")

    def __init__(self, w, u, v, p, k: int = 0):
        self.w = np.asarray(w, dtype=float)
        self.u = np.asarray(u, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.p = p
        self.k = int(k)

    @property
    def n(self) -> int:
        return self.w.size

    def matvec(self, f):
        s = self.u * f * self.w
        c = np.cumsum(s) - 0.5 * s
        if self.k:
            c -= s[: self.k].sum()
        return self.v * c

    def rmatvec(self, phi):
        s = self.v * phi * self.w
        k = self.k
        if k == 0:
            out = np.cumsum(s[::-1])[::-1] - 0.5 * s
        elif k == s.size:
            out = -(np.cumsum(s) - 0.5 * s)
        else:
            out = np.empty_like(s)
            head = s[:k]
            tail = s[k:]
            out[:k] = -(np.cumsum(head) - 0.5 * head)
            out[k:] = np.cumsum(tail[::-1])[::-1] - 0.5 * tail
        return self.u * out

    def norm(self, f) -> float:
        return lux_norm(self.w, f, self.p)

    def ratio(self, f) -> float:
        nf = self.norm(f)
        return self.norm(self.matvec(f)) / nf if nf > 0 else 0.0

    def ascent_step(self, f):
        return dual_maximizer(self.w, self.rmatvec(norming_direction(self.w, self.matvec(f), self.p)), self.p)


def op_norm(op: LocalOp, f0=None, rtol: float = 1e-12, maxiter: int = 500):
    """Power-type ascent for ``||op||``; returns ``(value, maximizer)``.

    The value is the best Rayleigh-type ratio seen, hence a lower bound.
    """
    if op.n == 0:
        return 0.0, np.zeros(0)
    if f0 is None or np.size(f0) != op.n:
        f = np.ones(op.n)
    else:
        f = np.asarray(f0, dtype=float)
    f = f / op.norm(f)
    best, best_f = op.ratio(f), f
    prev = best
    for _ in range(maxiter):
        f = op.ascent_step(f)
        if not np.all(np.isfinite(f)) or not f.any():
            break
        r = op.ratio(f)
        if r > best:
            best, best_f = r, f
        if abs(r - prev) <= rtol * max(r, _TINY):
            break
        prev = r
    return best, best_f


def resample_shape(f, n: int):
    """Carry a maximizer over to a run of ``n`` cells by relative position (warm start)."""
    m = np.size(f)
    if m == n:
        return f
    if m == 0:
        return None
    return np.interp((np.arange(n) + 0.5) / n, (np.arange(m) + 0.5) / m, f)
