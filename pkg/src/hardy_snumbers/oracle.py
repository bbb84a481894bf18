"""Matrix discretization of ``T`` and singular-value ground truth for ``p = 2``.

In a Hilbert space every s-number of a compact operator is a singular value,
so for ``E = L^2`` the SVD of the collocation matrix is an independent check
on the partition estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .bfs_core import WeightPair
from .errors import InputError, NumericError
from .grid import Interval, as_interval, cells
from .hardy_op import OperatorSpec


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    matrix: np.ndarray
    interval: Interval
    h: float

    @property
    def M(self) -> int:
        return self.matrix.shape[0]


def _kernel(w, u, v):
    n = w.size
    K = np.tril(np.ones((n, n)), -1)
    K[np.diag_indices(n)] = 0.5
    K *= v[:, None]
    K *= (u * w)[None, :]
    return K


def discretize(op: OperatorSpec, M: int | None = None) -> KernelMatrix:
    """Midpoint collocation of ``T_{a,J}`` with a half-weight diagonal.

    Entry ``(i, j)`` is ``v_i u_j h`` below the diagonal and ``v_i u_i h / 2``
    on it.  Weights are linearly resampled when ``M`` differs from their grid.
    """
    W = _resampled(op.weights, M)
    if W.M < 16:
        raise InputError("M must be >= 16")
    J = op.J
    k0, k1, w = cells(W.interval, W.M, J.a, J.b)
    K = _kernel(w, W.u.samples[k0:k1], W.v.samples[k0:k1])
    return KernelMatrix(K, J, J.length / max(k1 - k0, 1))


def _resampled(weights: WeightPair, M) -> WeightPair:
    if M is None or M == weights.M:
        return weights
    return WeightPair(weights.u.resample(M), weights.v.resample(M))


def svd_snumbers(km: KernelMatrix, k: int) -> np.ndarray:
    """Top ``k`` singular values, non-increasing."""
    if k > km.M:
        raise InputError(f"k={k} exceeds matrix size {km.M}")
    try:
        s = scipy.linalg.svdvals(km.matrix, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"SVD failed: {exc}") from None
    return s[:k]


def script_a_l2(J, weights: WeightPair, M: int | None = None) -> float:
    """Largest singular value of ``(I - P_v) T`` on ``L^2(J)``.

    ``P_v`` is the orthogonal projection onto ``span{v}``, so this equals
    ``sup_f inf_alpha ||Tf - alpha v|| / ||f||`` for the discretized operator.
    """
    J = as_interval(J)
    W = _resampled(weights, M)
    k0, k1, w = cells(W.interval, W.M, J.a, J.b)
    u, v = W.u.samples[k0:k1], W.v.samples[k0:k1]
    if not np.any(v):
        raise InputError("v vanishes on J")
    K = _kernel(w, u, v)
    sw = np.sqrt(w)
    # isometric coordinates: g -> sqrt(w) g
    B = sw[:, None] * K / sw[None, :]
    e = sw * v
    e /= np.linalg.norm(e)
    B -= np.outer(e, e @ B)
    try:
        return float(scipy.linalg.svdvals(B)[0])
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"SVD failed: {exc}") from None
