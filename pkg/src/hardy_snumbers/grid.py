"""Uniform midpoint grids and the sampled functions that live on them.

Every function in the package (weights, trial functions, exponents) is a
:class:`GridFunction`: ``M`` samples taken at the cell midpoints of a uniform
partition of a finite interval, interpreted as piecewise constant.  Sub-interval
work goes through :func:`cells`, which returns the (possibly fractional) cell
widths covering ``(c, d)`` so that norms depend continuously on the endpoints.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, InputError

DEFAULT_M = 4096


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise DomainError(f"interval endpoints must be finite, got ({a}, {b})")
        if not a < b:
            raise DomainError(f"empty interval ({a}, {b})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return self.b - self.a

    def contains(self, other: "Interval", tol: float = 1e-12) -> bool:
        slack = tol * self.length
        return other.a >= self.a - slack and other.b <= self.b + slack

    def __iter__(self):
        yield self.a
        yield self.b


def as_interval(J) -> Interval:
    if isinstance(J, Interval):
        return J
    a, b = J
    if not a < b:
        raise DomainError(f"empty interval ({a}, {b})")
    return Interval(a, b)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Piecewise-constant function sampled at the ``M`` cell midpoints of ``interval``."""

    interval: Interval
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float).copy()
        if s.ndim != 1:
            raise InputError("samples must be one-dimensional")
        if s.size < 2:
            raise InputError(f"need at least 2 samples, got {s.size}")
        if not np.all(np.isfinite(s)):
            raise InputError("samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def M(self) -> int:
        return self.samples.size

    @property
    def h(self) -> float:
        return self.interval.length / self.M

    @property
    def x(self) -> np.ndarray:
        return midpoints(self.interval, self.M)

    @classmethod
    def from_callable(cls, fn, interval, M: int = DEFAULT_M) -> "GridFunction":
        interval = as_interval(interval)
        return cls(interval, np.broadcast_to(fn(midpoints(interval, M)), (M,)))

    @classmethod
    def constant(cls, value: float, interval, M: int = DEFAULT_M) -> "GridFunction":
        return cls(as_interval(interval), np.full(M, float(value)))

    @classmethod
    def indicator(cls, J, interval, M: int = DEFAULT_M) -> "GridFunction":
        """Cell-average of ``chi_J`` (fractional on the two boundary cells)."""
        interval = as_interval(interval)
        J = as_interval(J)
        s = np.zeros(M)
        k0, k1, w = cells(interval, M, J.a, J.b)
        s[k0:k1] = w / (interval.length / M)
        return cls(interval, s)

    def same_grid(self, other: "GridFunction") -> bool:
        return self.M == other.M and self.interval == other.interval

    def resample(self, M: int) -> "GridFunction":
        if M == self.M:
            return self
        return GridFunction(self.interval, np.interp(midpoints(self.interval, M), self.x, self.samples))

    def with_samples(self, samples) -> "GridFunction":
        return GridFunction(self.interval, samples)

    def __add__(self, other):
        if isinstance(other, GridFunction):
            _check_same_grid(self, other)
            return self.with_samples(self.samples + other.samples)
        return self.with_samples(self.samples + other)

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            _check_same_grid(self, other)
            return self.with_samples(self.samples - other.samples)
        return self.with_samples(self.samples - other)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            _check_same_grid(self, other)
            return self.with_samples(self.samples * other.samples)
        return self.with_samples(self.samples * other)

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_samples(-self.samples)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "value"])
            for xi, yi in zip(self.x, self.samples):
                writer.writerow([repr(float(xi)), repr(float(yi))])

    @classmethod
    def from_csv(cls, path, interval=None, M: int = DEFAULT_M) -> "GridFunction":
        """Read an ``x,value`` table and resample it by linear interpolation.

        When ``interval`` is omitted the table's own midpoint grid is assumed,
        so a file written by :meth:`to_csv` reads back bit for bit.
        """
        xs, ys = read_xy_csv(path)
        if interval is None:
            if xs.size < 2:
                raise InputError(f"{path}: need at least 2 rows")
            h = (xs[-1] - xs[0]) / (xs.size - 1)
            interval = Interval(xs[0] - h / 2, xs[-1] + h / 2)
            if M == xs.size or M is None:
                grid = midpoints(interval, xs.size)
                if np.allclose(grid, xs, rtol=0, atol=1e-9 * h):
                    return cls(interval, ys)
        interval = as_interval(interval)
        return cls(interval, np.interp(midpoints(interval, M), xs, ys))


def _check_same_grid(f: GridFunction, g: GridFunction) -> None:
    if not f.same_grid(g):
        raise InputError("grid mismatch between functions")


def midpoints(interval: Interval, M: int) -> np.ndarray:
    h = interval.length / M
    return interval.a + h * (np.arange(M) + 0.5)


def cells(interval: Interval, M: int, c: float, d: float):
    """Grid cells overlapping ``(c, d)``.

    Returns ``(k0, k1, w)`` where cells ``k0..k1-1`` overlap the sub-interval
    and ``w`` holds the overlap lengths.  Boundary cells get fractional widths.
    """
    a, b = interval.a, interval.b
    slack = 1e-12 * (b - a)
    if c < a - slack or d > b + slack:
        raise DomainError(f"({c}, {d}) is not contained in ({a}, {b})")
    c, d = max(c, a), min(d, b)
    if not c < d:
        return 0, 0, np.zeros(0)
    h = (b - a) / M
    k0 = min(int(math.floor((c - a) / h)), M - 1)
    k1 = max(min(int(math.ceil((d - a) / h)), M), k0 + 1)
    edges = a + h * np.arange(k0, k1 + 1)
    w = np.minimum(edges[1:], d) - np.maximum(edges[:-1], c)
    np.maximum(w, 0.0, out=w)
    # drop slivers produced by rounding at exact grid boundaries
    lo, hi = 0, w.size
    while lo < hi and w[lo] <= 1e-13 * h:
        lo += 1
    while hi > lo and w[hi - 1] <= 1e-13 * h:
        hi -= 1
    return k0 + lo, k0 + hi, w[lo:hi]


def read_xy_csv(path):
    path = Path(path)
    if not path.exists():
        raise InputError(f"no such file: {path}")
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "value"]:
        raise InputError(f"{path}: expected header 'x,value'")
    try:
        data = np.array([[float(r[0]), float(r[1])] for r in rows[1:] if r], dtype=float)
    except (ValueError, IndexError) as exc:
        raise InputError(f"{path}: bad row ({exc})") from None
    if data.shape[0] < 2:
        raise InputError(f"{path}: need at least 2 rows")
    xs, ys = data[:, 0], data[:, 1]
    if not np.all(np.diff(xs) > 0):
        raise InputError(f"{path}: x must be strictly increasing")
    if not np.all(np.isfinite(ys)):
        raise InputError(f"{path}: non-finite value")
    return xs, ys


def parse_function(spec: str, interval, M: int = DEFAULT_M) -> GridFunction:
    """Build a :class:`GridFunction` from a spec string.

    Recognised forms: ``const:<c>``, ``pow:<beta>``, ``exp:<k>``,
    ``sin:<A>,<omega>,<c>``, ``lin:<c0>,<c1>`` and ``csv:<path>``.  A bare number is read as a
    constant.
    """
    interval = as_interval(interval)
    spec = spec.strip()
    kind, _, arg = spec.partition(":")
    kind = kind.lower()
    try:
        if not arg:
            return GridFunction.constant(float(spec), interval, M)
        if kind == "csv":
            return GridFunction.from_csv(arg, interval, M)
        if kind == "const":
            return GridFunction.constant(float(arg), interval, M)
        if kind == "pow":
            beta = float(arg)
            if beta <= -1:
                raise InputError(f"pow:{beta} is not integrable (need beta > -1)")
            return GridFunction.from_callable(lambda x: np.abs(x) ** beta, interval, M)
        if kind == "exp":
            k = float(arg)
            return GridFunction.from_callable(lambda x: np.exp(k * x), interval, M)
        if kind == "lin":
            c0, c1 = (float(t) for t in arg.split(","))
            return GridFunction.from_callable(lambda x: c0 + c1 * x, interval, M)
        if kind == "sin":
            A, omega, c0 = (float(t) for t in arg.split(","))
            return GridFunction.from_callable(lambda x: c0 + A * np.sin(omega * x), interval, M)
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"cannot parse function spec {spec!r}: {exc}") from None
    raise InputError(f"unknown function spec {spec!r}")
