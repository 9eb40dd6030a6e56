"""Seeded data generators and fixed example frames shared across the suite."""

from __future__ import annotations

import numpy as np

import framescale as fs


def unit_rows(rng: np.random.Generator, m: int, n: int) -> np.ndarray:
    X = rng.standard_normal((m, n))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def random_unit_frame(rng: np.random.Generator, n: int, m: int) -> fs.Frame:
    """Unit-norm frame with m vectors spanning R^n."""
    for _ in range(32):
        frame = fs.Frame(unit_rows(rng, m, n))
        if frame.is_frame():
            return frame
    raise RuntimeError("failed to draw a spanning frame")


def clustered_unit_frame(
    rng: np.random.Generator, n: int, m: int, spread: float, max_closeness: float | None = None
) -> fs.Frame:
    """Unit-norm spanning frame whose vectors sit within a small cluster."""
    for _ in range(64):
        center = rng.standard_normal(n)
        center /= np.linalg.norm(center)
        X = center + spread * rng.standard_normal((m, n))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        frame = fs.Frame(X)
        if not frame.is_frame():
            continue
        if max_closeness is not None and fs.pairwise_closeness(frame) > max_closeness:
            continue
        return frame
    raise RuntimeError("failed to draw a clustered spanning frame")


def random_rotation(rng: np.random.Generator, n: int) -> np.ndarray:
    Q = np.linalg.qr(rng.standard_normal((n, n)))[0]
    return Q


def random_onb_rows(rng: np.random.Generator, n: int) -> np.ndarray:
    return np.linalg.qr(rng.standard_normal((n, n)))[0].T


def open_quadrant_frame(rng: np.random.Generator, m: int) -> fs.Frame:
    """Spanning family of unit vectors with strictly positive coordinates."""
    for _ in range(32):
        X = rng.uniform(0.05, 1.0, size=(m, 2))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        frame = fs.Frame(X)
        if frame.is_frame():
            return frame
    raise RuntimeError("failed to draw a spanning quadrant frame")


def mercedes_frame() -> fs.Frame:
    s = np.sqrt(3.0) / 2.0
    return fs.Frame([[0.0, 1.0], [-s, -0.5], [s, -0.5]])


def tilted_pair_frame(eps: float) -> fs.Frame:
    """Unit pair in R^2: one vector nearly vertical, one on the diagonal."""
    r = np.sqrt(2.0) / 2.0
    return fs.Frame([[eps, np.sqrt(1.0 - eps**2)], [r, r]])


def blocked_split_frame() -> fs.Frame:
    """Basis of R^4 whose coordinate split scales on each side but never jointly."""
    return fs.Frame(
        [
            [1.0, 0.0, 1.0, 1.0],
            [0.0, 1.0, 1.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ]
    )


def r3_fixture() -> fs.Frame:
    return fs.Frame([[1.0, 0.0, 0.0], [0.5, np.sqrt(3.0) / 2.0, 0.0], [0.0, 0.0, 1.0]])


def r4_special_fixture() -> fs.Frame:
    return fs.Frame(
        [
            [0.5, 0.5, 0.5, 0.5],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ]
    )


def r4_special_expected_basis() -> np.ndarray:
    r = 1.0 / np.sqrt(2.0)
    return np.array(
        [
            [0.0, 0.0, r, r],
            [-r, r, 0.0, 0.0],
            [0.0, 0.0, r, -r],
            [r, r, 0.0, 0.0],
        ]
    )
