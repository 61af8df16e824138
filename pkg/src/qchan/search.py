"""Derivative-free 1-D search and simplex projection."""

from __future__ import annotations

import math

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f, a: float, b: float, tol: float = 1e-9, max_iter: int = 200):
    """Maximize a unimodal ``f`` on [a, b]; returns ``(x, f(x))``.

    The interval shrinks until its width is below ``tol``. The endpoints are
    compared against the interior optimum so a monotone ``f`` still returns
    the right boundary.
    """
    if b < a:
        a, b = b, a
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x, fx = (c, fc) if fc >= fd else (d, fd)
    return x, fx


def project_to_simplex(v) -> np.ndarray:
    """Euclidean projection onto {x : x >= 0, sum x = 1} (sort-based)."""
    v = np.asarray(v, dtype=float)
    n = v.size
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ks = np.arange(1, n + 1)
    rho = np.nonzero(u - css / ks > 0)[0][-1]
    shift = css[rho] / (rho + 1)
    return np.maximum(v - shift, 0.0)


def project_rows_to_simplex(V: np.ndarray) -> np.ndarray:
    """Row-wise :func:`project_to_simplex` for a 2-D array."""
    V = np.asarray(V, dtype=float)
    n = V.shape[-1]
    U = -np.sort(-V, axis=-1)
    css = np.cumsum(U, axis=-1) - 1.0
    ks = np.arange(1, n + 1)
    cond = U - css / ks > 0
    rho = n - 1 - np.argmax(cond[..., ::-1], axis=-1)
    shift = np.take_along_axis(css, rho[..., None], axis=-1) / (rho[..., None] + 1)
    return np.maximum(V - shift, 0.0)
