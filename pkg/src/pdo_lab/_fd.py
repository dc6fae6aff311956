"""Finite-difference stencils on uniform lattices."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def fd_weights(offsets: tuple[int, ...], order: int) -> np.ndarray:
    """Weights ``w`` with ``sum_k w_k f(x + o_k h) ~ h^order f^(order)(x)``."""
    o = np.asarray(offsets, dtype=float)
    V = np.vander(o, increasing=True).T
    rhs = np.zeros(len(o))
    rhs[order] = float(np.prod(np.arange(1, order + 1)))
    return np.linalg.solve(V, rhs)


def _centered(order: int, accuracy: int) -> tuple[int, ...]:
    p = (order + 1) // 2 - 1 + accuracy // 2
    return tuple(range(-p, p + 1))


def derivative(f: np.ndarray, axis: int, order: int, h: float, *,
               periodic: bool, accuracy: int = 4) -> np.ndarray:
    """``order``-th derivative along ``axis``.

    Periodic axes use a centered stencil with wrap-around; bounded axes use the
    centered stencil inside and one-sided stencils of equal width at the ends.
    """
    if order == 0:
        return f
    f = np.asarray(f)
    offs = _centered(order, accuracy)
    w = fd_weights(offs, order)
    if periodic:
        out = sum(wk * np.roll(f, -o, axis=axis) for wk, o in zip(w, offs))
        return out / h**order
    n = f.shape[axis]
    width = max(len(offs), order + accuracy)
    if n < width:
        raise ValueError(f"axis of length {n} too short for a {width}-point stencil")
    fm = np.moveaxis(f, axis, 0)
    out = np.empty_like(fm, dtype=np.result_type(fm, float))
    p = offs[-1]
    inner = sum(wk * fm[p + o: n - p + o] for wk, o in zip(w, offs))
    out[p: n - p] = inner
    for i in list(range(p)) + list(range(n - p, n)):
        start = min(max(i - p, 0), n - width)
        so = tuple(k - i for k in range(start, start + width))
        ws = fd_weights(so, order)
        out[i] = sum(wk * fm[start + k] for k, wk in enumerate(ws))
    return np.moveaxis(out / h**order, 0, axis)
