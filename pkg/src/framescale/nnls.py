"""Nonnegative least squares by the classic active-set iteration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import _freeze


@dataclass(frozen=True)
class NNLSResult:
    x: np.ndarray
    residual: float
    converged: bool
    iterations: int


def nnls(A, b, max_iter: int | None = None) -> NNLSResult:
    """Minimize ||A x - b||_2 subject to x >= 0, Lawson-Hanson style.

    The passive set grows by the most positive gradient coordinate; the
    unconstrained least squares solution on it is pulled back toward
    feasibility whenever a passive coordinate would go negative.
    ``max_iter`` caps the total number of least squares solves (default
    ``50 * ncols``); on cap overflow the best iterate found so far is
    returned with ``converged=False``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float).ravel()
    if A.ndim != 2 or b.shape[0] != A.shape[0]:
        raise ValueError(f"incompatible shapes A={A.shape}, b={b.shape}")
    nrow, ncol = A.shape
    if max_iter is None:
        max_iter = 50 * ncol
    x = np.zeros(ncol)
    passive = np.zeros(ncol, dtype=bool)
    gtol = 1e-12 * max(1.0, float(np.abs(A.T @ b).max(initial=0.0)))
    eps = float(np.finfo(float).eps)
    objective = float(b @ b)
    converged = False
    iters = 0
    while True:
        grad = A.T @ (b - A @ x)
        grad[passive] = -np.inf
        j = int(np.argmax(grad))
        if not np.isfinite(grad[j]) or grad[j] <= gtol:
            converged = True
            break
        passive[j] = True
        while iters < max_iter:
            iters += 1
            z = np.zeros(ncol)
            z[passive] = np.linalg.lstsq(A[:, passive], b, rcond=None)[0]
            if z[passive].size == 0 or z[passive].min() > 0.0:
                x = z
                break
            shrink = passive & (z <= 0.0)
            gap = x[shrink] - z[shrink]
            safe = gap > 0.0
            alpha = float((x[shrink][safe] / gap[safe]).min()) if safe.any() else 0.0
            x = x + alpha * (z - x)
            # coordinates pulled to the boundary land at rounding level,
            # not exactly at zero; clip them so the passive set shrinks
            boundary = 10.0 * max(nrow, ncol) * eps * max(1.0, float(np.abs(x).max(initial=0.0)))
            passive &= x > boundary
            x[~passive] = 0.0
        if iters >= max_iter:
            break
        r = A @ x - b
        new_objective = float(r @ r)
        if new_objective > objective * (1.0 - 1e-13):
            # no measurable progress this pass: rounding noise would cycle
            converged = True
            break
        objective = new_objective
    residual = float(np.linalg.norm(A @ x - b))
    return NNLSResult(x=_freeze(x), residual=residual, converged=converged, iterations=iters)
