"""Hoelder norms, Bessel potential norms and a Littlewood-Paley proxy for H^s_p.

All suprema over R^n become maxima over the periodic lattice; Hoelder
quotients use the minimum-image distance of the torus.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ._fd import derivative
from .lattice import Field, Grid, bracket, dyadic_eval, fourier, fourier_multiplier

__all__ = [
    "HoelderSpec",
    "SpaceSpec",
    "InterpolationReport",
    "default_window",
    "multi_indices",
    "field_derivative",
    "sup_norm",
    "hoelder_seminorm",
    "hoelder_norm",
    "ck_norm",
    "hoelder_norm_batch",
    "besov_lp_norm",
    "bessel_norm",
    "lp_route_norm",
    "lp_blocks",
    "translate_diff_ratio",
    "interpolation_suite",
    "product_ratio",
]


def default_window(grid: Grid) -> float:
    return min(1.0, 64 * grid.h)


@dataclass(frozen=True)
class HoelderSpec:
    """Order ``m_tilde`` and exponent ``tau`` of C^{m_tilde, tau}.

    ``window`` bounds ``|x - y|`` in the quotients; ``None`` means
    :func:`default_window`, ``math.inf`` means every pair on the torus.
    """

    m_tilde: int
    tau: float
    window: float | None = None

    def __post_init__(self) -> None:
        if not 0 < self.tau < 1:
            raise ValueError(f"Hoelder exponent must lie in (0, 1), got {self.tau}")
        if self.m_tilde < 0 or int(self.m_tilde) != self.m_tilde:
            raise ValueError("m_tilde must be a non-negative integer")

    def resolved_window(self, grid: Grid) -> float:
        w = default_window(grid) if self.window is None else self.window
        if w < grid.h:
            raise ValueError(f"window {w} is below the grid spacing {grid.h}")
        return w


@dataclass(frozen=True)
class SpaceSpec:
    """Descriptor standing in for ``(H^s_p)^l``; q is fixed to 2.

    ``p == 2`` is realized exactly; any other p uses the Littlewood-Paley
    proxy and is marked by :attr:`proxy`.
    """

    s: float
    p: float = 2.0
    q: float = 2.0
    l: int = 1

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if self.q != 2:
            raise ValueError("only q = 2 is supported")

    @property
    def proxy(self) -> bool:
        return self.p != 2

    @property
    def p_mode(self) -> str:
        return "exact" if not self.proxy else f"proxy-p{self.p:g}"

    def shifted(self, ds: float) -> "SpaceSpec":
        return SpaceSpec(self.s + ds, self.p, self.q, self.l)


def multi_indices(n: int, order: int, exact: bool = False) -> list[tuple[int, ...]]:
    """Multi-indices of length ``n`` with ``|a| <= order`` (or ``== order``)."""
    out = [a for a in itertools.product(range(order + 1), repeat=n) if sum(a) <= order]
    if exact:
        out = [a for a in out if sum(a) == order]
    return sorted(out, key=lambda a: (sum(a), a))


def field_derivative(values: np.ndarray, grid: Grid, alpha: tuple[int, ...]) -> np.ndarray:
    """Periodic 4th-order finite-difference ``d^alpha`` over the leading x-axes."""
    out = values
    for axis, k in enumerate(alpha):
        if k:
            out = derivative(out, axis, k, grid.h, periodic=True)
    return out


def matrix_norm(v: np.ndarray) -> np.ndarray:
    """Operator 2-norm over the trailing ``(l, l)`` axes."""
    if v.shape[-2:] == (1, 1):
        return np.abs(v[..., 0, 0])
    if v.shape[-2:] == (2, 2):
        fro2 = np.sum(np.abs(v) ** 2, axis=(-2, -1))
        det = np.abs(v[..., 0, 0] * v[..., 1, 1] - v[..., 0, 1] * v[..., 1, 0])
        disc = np.sqrt(np.maximum(fro2**2 - 4 * det**2, 0.0))
        return np.sqrt((fro2 + disc) / 2)
    return np.linalg.norm(v, ord=2, axis=(-2, -1))


def _pointwise_norm(v: np.ndarray, matrix: bool) -> np.ndarray:
    return matrix_norm(v) if matrix else np.abs(v)


def _offsets(grid: Grid, window: float) -> list[tuple[int, ...]]:
    dmax = grid.N // 2 if window >= grid.N * grid.h else int(np.floor(window / grid.h + 1e-9))
    dmax = max(min(dmax, grid.N // 2), 1)
    if grid.n == 1:
        return [(d,) for d in range(1, dmax + 1)]
    offs = []
    for d1 in range(0, dmax + 1):
        for d2 in range(-dmax, dmax + 1):
            if d1 == 0 and d2 <= 0:
                continue
            if math.isinf(window) or math.hypot(d1, d2) * grid.h <= window + 1e-12:
                offs.append((d1, d2))
    return offs


def _sup(values: np.ndarray, grid: Grid, mask, matrix: bool) -> np.ndarray:
    a = _pointwise_norm(values, matrix)
    if mask is not None:
        a = np.where(mask.reshape(mask.shape + (1,) * (a.ndim - grid.n)), a, 0.0)
    return a.reshape((grid.size,) + a.shape[grid.n:]).max(axis=0)


def _quotient(values: np.ndarray, grid: Grid, tau: float, window: float,
              mask, matrix: bool) -> np.ndarray:
    ax = tuple(range(grid.n))
    best = None
    for d in _offsets(grid, window):
        dist = grid.h * math.sqrt(sum(min(abs(k), grid.N - abs(k)) ** 2 for k in d))
        shifted = np.roll(values, tuple(-k for k in d), axis=ax)
        q = _pointwise_norm(shifted - values, matrix) / dist**tau
        if mask is not None:
            pair = mask & np.roll(mask, tuple(-k for k in d), axis=ax)
            q = np.where(pair.reshape(pair.shape + (1,) * (q.ndim - grid.n)), q, 0.0)
        q = q.reshape((grid.size,) + q.shape[grid.n:]).max(axis=0)
        best = q if best is None else np.maximum(best, q)
    return best


def sup_norm(f: Field, mask=None, matrix: bool = False) -> float:
    return float(_sup(f.values, f.grid, mask, matrix))


def hoelder_seminorm(f: Field, tau: float, window: float | None = None,
                     mask=None, matrix: bool = False) -> float:
    """Largest discrete quotient ``|f(x) - f(y)| / |x - y|^tau`` inside the window."""
    w = default_window(f.grid) if window is None else window
    return float(_quotient(f.values, f.grid, tau, w, mask, matrix))


def hoelder_norm_batch(values: np.ndarray, grid: Grid, spec: HoelderSpec, *,
                       mask=None, matrix: bool = False) -> np.ndarray:
    """C^{m_tilde, tau} norm of every trailing-batch slice of ``values``.

    ``values`` has the grid's x-axes first; remaining axes are batched
    (for ``matrix=True`` the last two axes are the matrix entries).
    """
    n_stencil = 2 * ((spec.m_tilde + 1) // 2 + 1) + 1
    if spec.m_tilde > 0 and grid.N < 2 * n_stencil:
        raise ValueError(f"grid with N={grid.N} is too coarse for m_tilde={spec.m_tilde}")
    window = spec.resolved_window(grid)
    sups, quots = [], []
    for alpha in multi_indices(grid.n, spec.m_tilde):
        d = field_derivative(values, grid, alpha)
        sups.append(_sup(d, grid, mask, matrix))
        quots.append(_quotient(d, grid, spec.tau, window, mask, matrix))
    return np.max(sups, axis=0) + np.max(quots, axis=0)


def hoelder_norm(f: Field, spec: HoelderSpec, *, mask=None, matrix: bool | None = None) -> float:
    """``max_alpha sup|d^alpha f| + max_alpha [d^alpha f]_tau`` for ``|alpha| <= m_tilde``.

    Matrix-valued fields (values shaped ``grid.shape + (l, l)``) use the
    operator norm pointwise.
    """
    if matrix is None:
        matrix = f.values.ndim == f.grid.n + 2
    return float(hoelder_norm_batch(f.values, f.grid, spec, mask=mask, matrix=matrix))


def ck_norm(f: Field, k: int, mask=None, exact: bool = False) -> float:
    """``max_{|alpha| <= k} sup |d^alpha f|`` (``|alpha| == k`` with ``exact``)."""
    vals = [
        _sup(field_derivative(f.values, f.grid, a), f.grid, mask, False)
        for a in multi_indices(f.grid.n, k, exact=exact)
    ]
    return float(np.max(vals))


def lp_blocks(grid: Grid) -> int:
    """Number of dyadic blocks needed so that the partition covers the lattice."""
    return int(np.ceil(np.log2(max(float(np.max(grid.abs_xi)), 2.0))))


def bessel_norm(f: Field, s: float) -> float:
    """Exact discrete ``||<D>^s f||_{L^2}`` via Plancherel."""
    g = f.grid
    fh = fourier(f).values
    w = bracket(g.xi) ** (2 * s)
    if fh.ndim > g.n:
        w = w[..., None]
    return float(np.sqrt((g.dxi / (2 * np.pi)) ** g.n * np.sum(w * np.abs(fh) ** 2)))


def lp_route_norm(f: Field, s: float, p: float) -> float:
    """``|| (sum_j 2^{2js} |phi_j(D) f|^2)^{1/2} ||_{L^p}`` on the lattice."""
    g = f.grid
    acc = np.zeros(f.values.shape, dtype=float)
    for j in range(lp_blocks(g) + 1):
        blk = fourier_multiplier(f, dyadic_eval(j, g.xi)).values
        acc = acc + 2.0 ** (2 * j * s) * np.abs(blk) ** 2
    pointwise = np.sqrt(acc)
    if pointwise.ndim > g.n:
        pointwise = np.sqrt(np.sum(pointwise**2, axis=-1))
    return float((g.h**g.n * np.sum(pointwise**p)) ** (1.0 / p))


def besov_lp_norm(f: Field, spec: SpaceSpec) -> float:
    """Norm of ``f`` in the space described by ``spec``.

    For ``p == 2`` this is the exact Bessel potential norm; otherwise the
    Littlewood-Paley square-function proxy (``spec.proxy`` is then True).
    """
    if not spec.proxy:
        return bessel_norm(f, spec.s)
    return lp_route_norm(f, spec.s, spec.p)


def translate_diff_ratio(f: Field, shift, m_tilde: int, t: float, tau: float,
                         window: float | None = None) -> float:
    """``||f(. - y) - f||_{C^{m,t}} / (|y|^{tau - t} ||f||_{C^{m,tau}})`` for a lattice shift."""
    if not 0 < t < tau < 1:
        raise ValueError("need 0 < t < tau < 1")
    g = f.grid
    shift = (shift,) if np.isscalar(shift) else tuple(shift)
    y = g.h * math.sqrt(sum(min(abs(k), g.N - abs(k)) ** 2 for k in shift))
    denom_norm = hoelder_norm(f, HoelderSpec(m_tilde, tau, window))
    if denom_norm == 0:
        raise ValueError("reference norm vanishes")
    if y == 0:
        return 0.0
    moved = np.roll(f.values, shift, axis=tuple(range(g.n)))
    num = hoelder_norm(Field(g, moved - f.values), HoelderSpec(m_tilde, t, window))
    return num / (y ** (tau - t) * denom_norm)


@dataclass
class InterpolationReport:
    """Ratios LHS / RHS (constants dropped) for each interpolation inequality."""

    ratios: dict[str, float] = field(default_factory=dict)
    skipped: bool = False


def _safe_ratio(lhs: float, rhs: float, floor: float = 0.0) -> float:
    if lhs <= floor:
        return 0.0
    return lhs / rhs if rhs > 0 else math.inf


def interpolation_suite(f: Field, m_tilde: int, tau: float, *, k: int = 1, s: float = 0.3,
                        R: float = 1.0, window: float | None = None) -> InterpolationReport:
    """Empirical constants for the Hoelder interpolation inequalities.

    Keys: ``global`` (C^k_b against C^0 and C^{m,tau}), ``ext_i``, ``ext_ii``,
    ``ext_iii`` (the three exterior-ball statements, iii on the whole box),
    ``ext_R_deriv`` and ``ext_R_hoelder`` (the ``|x| >= R`` variants with
    ``|alpha| = k``).
    """
    if f.values.ndim != f.grid.n:
        raise ValueError("interpolation suite expects a scalar field")
    if not (1 <= k <= m_tilde):
        raise ValueError("need 1 <= k <= m_tilde")
    if not 0 < s < 1:
        raise ValueError("need 0 < s < 1")
    g = f.grid
    c0 = sup_norm(f)
    if c0 == 0:
        return InterpolationReport(skipped=True)
    r = {}
    full_m = hoelder_norm(f, HoelderSpec(m_tilde, tau, window))

    theta = k / (m_tilde + tau)
    r["global"] = _safe_ratio(ck_norm(f, k), c0 ** (1 - theta) * full_m**theta)

    ext1 = g.abs_x >= 1.0
    e0 = sup_norm(f, ext1)
    e_cm = ck_norm(f, m_tilde, ext1)
    r["ext_i"] = _safe_ratio(ck_norm(f, k, ext1), e0 ** (1 - k / m_tilde) * e_cm ** (k / m_tilde))
    if k + s < m_tilde + tau:
        th = (k + s) / (m_tilde + tau)
        lhs = hoelder_norm(f, HoelderSpec(k, s, window), mask=ext1)
        rhs = e0 ** (1 - th) * hoelder_norm(f, HoelderSpec(m_tilde, tau, window), mask=ext1) ** th
        r["ext_ii"] = _safe_ratio(lhs, rhs)
    dk = ck_norm(f, k, exact=True)
    dk1 = ck_norm(f, k + 1, exact=True)
    # finite-difference noise on constants is not a derivative
    tiny = 1e-9 * c0
    r["ext_iii"] = _safe_ratio(dk, c0 ** (1 - k / (k + 1)) * dk1 ** (k / (k + 1)), tiny)

    extR = g.abs_x >= R
    R0 = sup_norm(f, extR)
    Rm = ck_norm(f, m_tilde, extR)
    th2 = k / m_tilde
    alphas = multi_indices(g.n, k, exact=True)
    r["ext_R_deriv"] = _safe_ratio(ck_norm(f, k, extR, exact=True), R0 ** (1 - th2) * Rm**th2, tiny)
    th3 = (k + s) / (m_tilde + tau)
    lhs3 = max(
        hoelder_norm(Field(g, field_derivative(f.values, g, a)), HoelderSpec(0, s, window), mask=extR)
        for a in alphas
    )
    RmT = hoelder_norm(f, HoelderSpec(m_tilde, tau, window), mask=extR)
    r["ext_R_hoelder"] = _safe_ratio(lhs3, R0 ** (1 - th2) * Rm**th2 + R0 ** (1 - th3) * RmT**th3, tiny)
    return InterpolationReport(r)


def product_ratio(f: Field, g_: Field, m_tilde: int, tau: float, window: float | None = None) -> float:
    """``||fg||_{C^{m,tau}}`` over the Leibniz split-norm sum (constant dropped)."""
    lhs = hoelder_norm(Field(f.grid, f.values * g_.values), HoelderSpec(m_tilde, tau, window))
    rhs = 0.0
    for m1 in range(m_tilde + 1):
        m2 = m_tilde - m1
        rhs += ck_norm(f, m1) * hoelder_norm(g_, HoelderSpec(m2, tau, window))
        rhs += hoelder_norm(f, HoelderSpec(m1, tau, window)) * ck_norm(g_, m2)
    return _safe_ratio(lhs, rhs)
