"""Smooth and Hoelder-regular (matrix-valued) symbols and their seminorms.

A :class:`Symbol` wraps a closed form ``func(x, xi)``; ``x`` and ``xi`` are
arrays in 1D and tuples of arrays in 2D, broadcast against each other.
Scalar symbols return the broadcast shape, matrix symbols append ``(l, l)``.
Derived symbols (mollified, smoothed, sums) carry a ``sampler`` instead and
are only defined on grid nodes in x.

Samples always have shape ``grid.shape + xi_shape + (l, l)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ._fd import derivative
from .lattice import Grid, bracket
from .spaces import HoelderSpec, hoelder_norm_batch, matrix_norm, multi_indices

__all__ = [
    "SymbolMeta",
    "Symbol",
    "SeminormReport",
    "EllipticReport",
    "Profile",
    "refined_xi",
    "xi_spacing",
    "matrix_norm",
    "symbol_derivative",
    "smooth_seminorm",
    "nonsmooth_seminorm",
    "ck_estimate",
    "is_elliptic",
    "slowly_varying_profile",
    "unif_modulus",
    "is_cunif",
    "limit_decay_profile",
    "CORPUS",
    "make_symbol",
]


@dataclass(frozen=True)
class SymbolMeta:
    """Class data of ``C^{m_tilde,tau} S^m_{rho,delta}(M; L(C^l))``.

    ``m_tilde = None`` marks a symbol smooth in x; ``M = None`` an unbounded
    xi-derivative budget.
    """

    m: float
    rho: float = 1.0
    delta: float = 0.0
    m_tilde: int | None = None
    tau: float | None = None
    M: int | None = None
    l: int = 1

    def __post_init__(self) -> None:
        if not (0 <= self.rho <= 1 and 0 <= self.delta <= 1):
            raise ValueError("rho and delta must lie in [0, 1]")
        if self.tau is not None and not 0 < self.tau < 1:
            raise ValueError("tau must lie in (0, 1)")
        if self.l < 1:
            raise ValueError("l must be positive")

    @property
    def smooth(self) -> bool:
        return self.m_tilde is None

    def check_budget(self, k: int) -> None:
        if self.M is not None and k > self.M:
            raise ValueError(f"derivative level {k} exceeds budget M={self.M}")


@dataclass(frozen=True)
class Symbol:
    """Phase-space function ``a(x, xi)`` with class metadata."""

    func: Callable | None
    meta: SymbolMeta
    name: str = "anon"
    a_inf: Callable | None = None
    sampler: Callable | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.func is None and self.sampler is None:
            raise ValueError("symbol needs a closed form or a sampler")

    @property
    def l(self) -> int:
        return self.meta.l

    def sample(self, grid: Grid, xi=None) -> np.ndarray:
        """Values on ``grid`` x-nodes times the xi points (default: the lattice)."""
        if xi is None:
            xi = grid.xi
        if self.sampler is not None:
            return self.sampler(grid, xi)
        xi_shape = _xi_shape(xi)
        k = len(xi_shape)
        if grid.n == 1:
            X = grid.x_axis.reshape((grid.N,) + (1,) * k)
            XI = np.asarray(xi)[None, ...]
        else:
            X = tuple(c.reshape(grid.shape + (1,) * k) for c in grid.x)
            XI = tuple(np.asarray(c)[None, None, ...] for c in xi)
        return _normalize(self.func(X, XI), grid.shape + xi_shape, self.l)

    def limit(self, xi) -> np.ndarray:
        if self.a_inf is None:
            raise ValueError(f"symbol {self.name!r} has no limit symbol")
        return _normalize(self.a_inf(xi), _xi_shape(xi), self.l)

    def with_meta(self, **kw) -> "Symbol":
        return replace(self, meta=replace(self.meta, **kw))

    def scaled(self, c: complex) -> "Symbol":
        f = self.func
        inf = self.a_inf
        return Symbol(
            None if f is None else (lambda x, xi: c * np.asarray(f(x, xi))),
            self.meta,
            f"{c}*{self.name}",
            None if inf is None else (lambda xi: c * np.asarray(inf(xi))),
            None if self.sampler is None else (lambda g, xi: c * self.sampler(g, xi)),
        )

    def __add__(self, other: "Symbol") -> "Symbol":
        if self.l != other.l:
            raise ValueError("matrix sizes differ")
        meta = _join_meta(self.meta, other.meta)
        name = f"({self.name}+{other.name})"
        inf = None
        if self.a_inf is not None and other.a_inf is not None:
            inf = lambda xi: self.limit(xi) + other.limit(xi)  # noqa: E731
        if self.sampler is None and other.sampler is None:
            f1, f2 = self.func, other.func
            return Symbol(lambda x, xi: np.asarray(f1(x, xi)) + np.asarray(f2(x, xi)), meta, name, inf)
        return Symbol(None, meta, name, inf, lambda g, xi: self.sample(g, xi) + other.sample(g, xi))

    def __mul__(self, c) -> "Symbol":
        return self.scaled(c)

    __rmul__ = __mul__


def _join_meta(a: SymbolMeta, b: SymbolMeta) -> SymbolMeta:
    mt = [v for v in (a.m_tilde, b.m_tilde) if v is not None]
    taus = [v for v in (a.tau, b.tau) if v is not None]
    Ms = [v for v in (a.M, b.M) if v is not None]
    return SymbolMeta(
        m=max(a.m, b.m),
        rho=min(a.rho, b.rho),
        delta=max(a.delta, b.delta),
        m_tilde=min(mt) if mt else None,
        tau=min(taus) if taus else None,
        M=min(Ms) if Ms else None,
        l=a.l,
    )


def _xi_shape(xi) -> tuple[int, ...]:
    return np.shape(xi[0]) if isinstance(xi, tuple) else np.shape(xi)


def _normalize(v, shape: tuple[int, ...], l: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if l == 1 and (v.ndim < 2 or v.shape[-2:] != (1, 1) or v.ndim == len(shape)):
        v = np.broadcast_to(v, shape)[..., None, None]
    else:
        v = np.broadcast_to(v, shape + (l, l))
    return np.array(v)


def xi_spacing(xi) -> float:
    ax = xi[0][:, 0] if isinstance(xi, tuple) else np.asarray(xi)
    return float(ax[1] - ax[0])


def refined_xi(grid: Grid, spacing: float | None = None, extent: float | None = None,
               max_nodes: int | None = None):
    """Uniform xi nodes finer than the lattice, used for xi-derivatives.

    The default covers the lattice range with spacing ``min(pi/L, 1/8)`` in
    1D (at most 4096 nodes) and a 64-per-axis mesh in 2D.
    """
    ext = grid.dxi * (grid.N // 2) if extent is None else extent
    if grid.n == 1:
        d = min(grid.dxi, 0.125) if spacing is None else spacing
        cap = 4096 if max_nodes is None else max_nodes
        K = min(int(round(2 * ext / d)), cap)
        return np.linspace(-ext, ext, K + 1)
    cap = 64 if max_nodes is None else max_nodes
    d = max(grid.dxi, 2 * ext / cap) if spacing is None else spacing
    K = int(round(2 * ext / d))
    ax = np.linspace(-ext, ext, K + 1)
    return tuple(np.meshgrid(ax, ax, indexing="ij"))


def symbol_derivative(values: np.ndarray, grid: Grid, xi, alpha=None, beta=None) -> np.ndarray:
    """``d_xi^alpha d_x^beta`` of samples: periodic in x, one-sided at the xi ends."""
    n = grid.n
    out = values
    if beta is not None:
        for i, k in enumerate(beta):
            if k:
                out = derivative(out, i, k, grid.h, periodic=True)
    if alpha is not None and any(alpha):
        d = xi_spacing(xi)
        for i, k in enumerate(alpha):
            if k:
                out = derivative(out, n + i, k, d, periodic=False)
    return out


def _xi_weight(grid: Grid, xi, power: float) -> np.ndarray:
    w = bracket(xi) ** power
    return w.reshape((1,) * grid.n + w.shape)


@dataclass
class SeminormReport:
    """Seminorm value with its per-multi-index breakdown."""

    k: int
    value: float
    entries: dict = field(default_factory=dict)
    se_included: bool = False
    se_entries: dict = field(default_factory=dict)


def _x_axes_max(arr: np.ndarray, grid: Grid) -> np.ndarray:
    return arr.reshape((grid.size,) + arr.shape[grid.n:]).max(axis=0)


def smooth_seminorm(a: Symbol, grid: Grid, k: int, xi=None) -> SeminormReport:
    """``max_{|alpha|,|beta| <= k} sup |d_xi^alpha d_x^beta a| <xi>^{-(m - rho|alpha| + delta|beta|)}``."""
    a.meta.check_budget(k)
    xi = refined_xi(grid) if xi is None else xi
    vals = a.sample(grid, xi)
    mt = a.meta
    entries = {}
    for al in multi_indices(grid.n, k):
        dxi_vals = symbol_derivative(vals, grid, xi, alpha=al)
        for be in multi_indices(grid.n, k):
            d = symbol_derivative(dxi_vals, grid, xi, beta=be)
            w = _xi_weight(grid, xi, -(mt.m - mt.rho * sum(al) + mt.delta * sum(be)))
            entries[(al, be)] = float(np.max(matrix_norm(d) * w))
    return SeminormReport(k, max(entries.values()), entries)


def nonsmooth_seminorm(a: Symbol, grid: Grid, k: int, m_tilde: int, s: float, xi=None,
                       window: float | None = None) -> SeminormReport:
    """Hoelder-symbol seminorm ``|a|_{k, C^{m_tilde,s} S^m_{rho,delta}}``.

    The ``Se_alpha`` term (sup-norm part) enters iff ``delta != 0``.
    """
    a.meta.check_budget(k)
    xi = refined_xi(grid) if xi is None else xi
    vals = a.sample(grid, xi)
    mt = a.meta
    spec = HoelderSpec(m_tilde, s, window)
    entries, se_entries = {}, {}
    with_se = mt.delta != 0
    for al in multi_indices(grid.n, k):
        d = symbol_derivative(vals, grid, xi, alpha=al)
        hn = hoelder_norm_batch(d, grid, spec, matrix=True)
        bx = bracket(xi)
        total = hn * bx ** (-mt.m + mt.rho * sum(al) - mt.delta * (m_tilde + s))
        if with_se:
            se = _x_axes_max(matrix_norm(d), grid) * bx ** (-mt.m + mt.rho * sum(al))
            se_entries[al] = float(np.max(se))
            total = total + se
        entries[al] = float(np.max(total))
    return SeminormReport(k, max(entries.values()), entries, with_se, se_entries)


def ck_estimate(a: Symbol, grid: Grid, alpha: tuple[int, ...], k: int, xi=None) -> dict:
    """Sup over xi of ``||d_xi^alpha a(., xi)||_{C^k_b}`` against two weights.

    ``as_printed`` divides by ``<xi>^{m_tilde - rho|alpha| + delta k}``;
    ``order_m`` by ``<xi>^{m - rho|alpha| + delta k}``.
    """
    mt = a.meta
    if mt.m_tilde is not None and k > mt.m_tilde:
        raise ValueError("k exceeds m_tilde")
    a.meta.check_budget(sum(alpha))
    xi = refined_xi(grid) if xi is None else xi
    d = symbol_derivative(a.sample(grid, xi), grid, xi, alpha=alpha)
    ck = None
    for be in multi_indices(grid.n, k):
        cur = _x_axes_max(matrix_norm(symbol_derivative(d, grid, xi, beta=be)), grid)
        ck = cur if ck is None else np.maximum(ck, cur)
    bx = bracket(xi)
    mtil = 0 if mt.m_tilde is None else mt.m_tilde
    return {
        "as_printed": float(np.max(ck * bx ** -(mtil - mt.rho * sum(alpha) + mt.delta * k))),
        "order_m": float(np.max(ck * bx ** -(mt.m - mt.rho * sum(alpha) + mt.delta * k))),
    }


@dataclass
class EllipticReport:
    """Outcome of the ellipticity gate; ``witness`` is ``(x, xi)`` on failure."""

    ok: bool
    margin: float
    witness: tuple | None
    margin_map: np.ndarray = field(repr=False)

    def __bool__(self) -> bool:
        return self.ok


def is_elliptic(a: Symbol, grid: Grid, R: float, C0: float, xi=None) -> EllipticReport:
    """Check ``|det a| <xi>^{-ml} >= C0`` wherever ``|x| + |xi| >= R``."""
    xi = grid.xi if xi is None else xi
    vals = a.sample(grid, xi)
    det = np.abs(vals[..., 0, 0]) if a.l == 1 else np.abs(np.linalg.det(vals))
    q = det * _xi_weight(grid, xi, -a.meta.m * a.l)
    absx = grid.abs_x.reshape(grid.shape + (1,) * len(_xi_shape(xi)))
    absxi = np.sqrt(sum(c**2 for c in xi)) if isinstance(xi, tuple) else np.abs(xi)
    region = absx + absxi.reshape((1,) * grid.n + absxi.shape) >= R
    masked = np.where(region, q, np.inf)
    margin = float(masked.min()) if np.any(region) else math.inf
    witness = None
    if margin < C0:
        idx = np.unravel_index(int(np.argmin(masked)), masked.shape)
        xw = tuple(float(c[idx[: grid.n]]) for c in grid.x) if grid.n == 2 else float(grid.x_axis[idx[0]])
        xiw = (tuple(float(c[idx[grid.n:]]) for c in xi) if isinstance(xi, tuple)
               else float(np.asarray(xi)[idx[grid.n:]]))
        witness = (xw, xiw)
    return EllipticReport(margin >= C0, margin, witness, masked)


@dataclass
class Profile:
    """Radial profile ``values(radii)`` with tail diagnostics (reported only)."""

    radii: np.ndarray
    values: np.ndarray
    tail_fraction: float
    tail_ok: bool
    monotone_tail: bool


def _radial(grid: Grid, per_x: np.ndarray, tol: float = 0.05, tail: float = 0.1) -> Profile:
    r = np.round(grid.abs_x.ravel(), 12)
    v = per_x.ravel()
    radii, inv = np.unique(r, return_inverse=True)
    out = np.zeros(radii.shape)
    np.maximum.at(out, inv, v)
    top = float(out.max())
    cut = radii >= radii[-1] * (1 - tail)
    tail_max = float(out[cut].max())
    frac = tail_max / top if top > 0 else 0.0
    tail_vals = out[radii >= radii[-1] / 2]
    mono = bool(np.all(np.diff(tail_vals) <= 1e-12 * max(top, 1.0)))
    return Profile(radii, out, frac, frac < tol, mono)


def slowly_varying_profile(a: Symbol, grid: Grid, alpha, beta, xi=None, tol: float = 0.05) -> Profile:
    """``C_{alpha beta}(x) = sup_xi |d_xi^alpha D_x^beta a| <xi>^{-(m - rho|alpha| + delta|beta|)}``."""
    mt = a.meta
    mt.check_budget(sum(alpha))
    if mt.m_tilde is not None and sum(beta) > mt.m_tilde:
        raise ValueError("x-derivative order exceeds m_tilde")
    xi = refined_xi(grid) if xi is None else xi
    d = symbol_derivative(a.sample(grid, xi), grid, xi, alpha=alpha, beta=beta)
    w = _xi_weight(grid, xi, -(mt.m - mt.rho * sum(alpha) + mt.delta * sum(beta)))
    per = (matrix_norm(d) * w).reshape(grid.shape + (-1,)).max(axis=-1)
    return _radial(grid, per, tol)


def unif_modulus(a: Symbol, grid: Grid, alpha, shift, xi=None) -> float:
    """``sup ||d_xi^alpha (a(x + h, xi) - a(x, xi))|| <xi>^{-m + rho|alpha|}`` for a lattice shift."""
    mt = a.meta
    mt.check_budget(sum(alpha))
    shift = (shift,) if np.isscalar(shift) else tuple(shift)
    if not any(shift):
        return 0.0
    xi = refined_xi(grid) if xi is None else xi
    d = symbol_derivative(a.sample(grid, xi), grid, xi, alpha=alpha)
    moved = np.roll(d, tuple(-k for k in shift), axis=tuple(range(grid.n)))
    w = _xi_weight(grid, xi, -mt.m + mt.rho * sum(alpha))
    return float(np.max(matrix_norm(moved - d) * w))


def is_cunif(a: Symbol, grid: Grid, alpha=None, shifts=(16, 8, 4, 2, 1), tol: float = 0.05,
             xi=None) -> tuple[bool, list[float]]:
    """Diagnostic: the modulus shrinks along ``shifts`` and ends below ``tol`` times its scale."""
    alpha = (0,) * grid.n if alpha is None else alpha
    vals = [unif_modulus(a, grid, alpha, (s,) + (0,) * (grid.n - 1), xi) for s in shifts]
    xi = refined_xi(grid) if xi is None else xi
    scale = float(np.max(matrix_norm(a.sample(grid, xi)) * _xi_weight(grid, xi, -a.meta.m)))
    ok = all(b <= c + 1e-14 for c, b in zip(vals, vals[1:])) and vals[-1] <= tol * max(scale, 1e-300)
    return ok, vals


def limit_decay_profile(a: Symbol, grid: Grid, alpha, xi=None, tol: float = 0.05) -> Profile:
    """Radial profile of ``sup_xi ||d_xi^alpha (a - a_inf)|| <xi>^{-m + rho|alpha|}``."""
    if a.a_inf is None:
        raise ValueError(f"symbol {a.name!r} has no limit symbol")
    mt = a.meta
    mt.check_budget(sum(alpha))
    xi = refined_xi(grid) if xi is None else xi
    diff = a.sample(grid, xi) - a.limit(xi)[None, ...] if grid.n == 1 else \
        a.sample(grid, xi) - a.limit(xi)[None, None, ...]
    d = symbol_derivative(diff, grid, xi, alpha=alpha)
    w = _xi_weight(grid, xi, -mt.m + mt.rho * sum(alpha))
    per = (matrix_norm(d) * w).reshape(grid.shape + (-1,)).max(axis=-1)
    return _radial(grid, per, tol)


# -- corpus -------------------------------------------------------------------


def _x1(x):
    return x[0] if isinstance(x, tuple) else x


def _xi1(xi):
    return xi[0] if isinstance(xi, tuple) else xi


def _bracket_power(m: float = 1.0):
    return Symbol(lambda x, xi: bracket(xi) ** m, SymbolMeta(m), f"bracket^{m:g}",
                  a_inf=lambda xi: bracket(xi) ** m)


def _one():
    return Symbol(lambda x, xi: np.ones(np.broadcast_shapes(np.shape(_x1(x)), np.shape(_xi1(xi)))),
                  SymbolMeta(0.0), "one", a_inf=lambda xi: np.ones(np.shape(_xi1(xi))))


def _bracket_identity(m: float = 1.0, l: int = 2):
    def f(x, xi):
        return bracket(xi)[..., None, None] ** m * np.eye(l)
    return Symbol(f, SymbolMeta(m, l=l), f"bracket^{m:g}*I{l}")


def _exp_ix(m: float = 1.0):
    return Symbol(lambda x, xi: np.exp(1j * _x1(x)) * bracket(xi) ** m, SymbolMeta(m), "exp(ix)*bracket")


def _cos_bracket(m: float = 1.0):
    return Symbol(lambda x, xi: (2 + np.cos(_x1(x))) * bracket(xi) ** m, SymbolMeta(m), "(2+cos x)*bracket")


def _gauss_bracket(m: float = 0.0):
    return Symbol(lambda x, xi: np.exp(-_x1(x) ** 2) * bracket(xi) ** m, SymbolMeta(m), "gauss*bracket",
                  a_inf=lambda xi: 0 * bracket(xi))


def _sin_bracket(m: float = 0.0):
    return Symbol(lambda x, xi: np.sin(_x1(x)) * bracket(xi) ** m, SymbolMeta(m), "sin*bracket")


def _rough_sin(m: float = 0.0, tau: float = 0.7, m_tilde: int = 0):
    # |sin x|^(m_tilde + tau) lies in C^{m_tilde, tau}
    p = m_tilde + tau
    return Symbol(lambda x, xi: np.abs(np.sin(_x1(x))) ** p * bracket(xi) ** m,
                  SymbolMeta(m, m_tilde=m_tilde, tau=tau), f"|sin|^{p:g}*bracket")


def weierstrass(x, tau: float = 0.7, terms: int = 12):
    """Lacunary series ``sum_k 2^{-k tau} cos(2^k x)``, exactly C^{0,tau}."""
    x = np.asarray(x, dtype=float)
    return sum(2.0 ** (-k * tau) * np.cos(2.0**k * x) for k in range(terms))


def _weierstrass(m: float = 0.0, tau: float = 0.7, terms: int = 12):
    return Symbol(lambda x, xi: weierstrass(_x1(x), tau, terms) * bracket(xi) ** m,
                  SymbolMeta(m, m_tilde=0, tau=tau), f"weierstrass{tau:g}*bracket")


def smoothing_profile(x, s: float = 0.7, terms: int = 8):
    """``2 + cos x + 0.3 sum_{k=1}^{terms} 2^{-ks} cos(2^k x)``; the lacunary tail sets the regularity."""
    x = np.asarray(x, dtype=float)
    return 2 + np.cos(x) + 0.3 * sum(2.0 ** (-k * s) * np.cos(2.0**k * x) for k in range(1, terms + 1))


def _cos_family(m: float = 1.0, s: float = 0.7, terms: int = 8):
    mt, tau = int(math.floor(s)), s - math.floor(s)
    return Symbol(lambda x, xi: smoothing_profile(_x1(x), s, terms) * bracket(xi) ** m,
                  SymbolMeta(m, m_tilde=mt, tau=tau), f"cosfamily{s:g}*bracket")


def _ladder(sign: int = 1):
    return Symbol(lambda x, xi: sign * 1j * _xi1(xi) + _x1(x), SymbolMeta(1.0),
                  "i*xi+x" if sign > 0 else "-i*xi+x")


def _derivative():
    return Symbol(lambda x, xi: 1j * _xi1(xi) + 0 * _x1(x), SymbolMeta(1.0), "i*xi")


def v_profile(x):
    return 1 + 0.5 * np.sin(x) + 0.25 * np.cos(2 * x)


def _multiplier():
    return Symbol(lambda x, xi: v_profile(_x1(x)) + 0 * _xi1(xi), SymbolMeta(0.0), "v(x)")


def _xi_over_bracket():
    return Symbol(lambda x, xi: _xi1(xi) / bracket(xi) + 0 * _x1(x), SymbolMeta(0.0), "xi/bracket")


def _decaying(m: float = 0.0, c: float = 0.5):
    def f(x, xi):
        return bracket(xi) ** m * (1 + c * np.exp(-np.abs(_x1(x))))
    return Symbol(f, SymbolMeta(m, m_tilde=0, tau=0.9), "bracket*(1+c e^-|x|)",
                  a_inf=lambda xi: bracket(xi) ** m)


def _order0_elliptic():
    def f(x, xi):
        x1, k = _x1(x), _xi1(xi)
        return 2 + np.cos(x1) + 0.5j * np.sin(x1) * k / bracket(xi)
    return Symbol(f, SymbolMeta(0.0), "2+cos x+0.5i sin x xi/<xi>")


def _rough_direction(m: float = 1.0, p: float = 1.5):
    return Symbol(lambda x, xi: -np.abs(np.sin(_x1(x))) ** p * bracket(xi) ** m,
                  SymbolMeta(m, m_tilde=int(p), tau=p - int(p)), f"-|sin|^{p:g}*bracket")


def _matrix_cos(m: float = 1.0):
    def f(x, xi):
        x1 = _x1(x)
        b = bracket(xi) ** m
        a11 = (2 + np.cos(x1)) * b
        a12 = 0.5 * np.sin(x1) * b
        z = np.zeros(np.broadcast_shapes(np.shape(a11), np.shape(a12)))
        return np.stack([np.stack([a11 + z, a12 + z], -1), np.stack([-a12 + z, a11 + z], -1)], -2)
    return Symbol(f, SymbolMeta(m, l=2), "matrix(2+cos)")


CORPUS: dict[str, Callable[..., Symbol]] = {
    "bracket_power": _bracket_power,
    "one": _one,
    "bracket_identity": _bracket_identity,
    "exp_ix": _exp_ix,
    "cos_bracket": _cos_bracket,
    "gauss_bracket": _gauss_bracket,
    "sin_bracket": _sin_bracket,
    "rough_sin": _rough_sin,
    "weierstrass": _weierstrass,
    "cos_family": _cos_family,
    "ladder": lambda: _ladder(1),
    "antiladder": lambda: _ladder(-1),
    "derivative": _derivative,
    "multiplier": _multiplier,
    "xi_over_bracket": _xi_over_bracket,
    "decaying": _decaying,
    "order0_elliptic": _order0_elliptic,
    "rough_direction": _rough_direction,
    "matrix_cos": _matrix_cos,
}


def make_symbol(name: str, **params) -> Symbol:
    """Build a corpus symbol by registry name."""
    try:
        factory = CORPUS[name]
    except KeyError:
        raise KeyError(f"unknown symbol {name!r}; known: {sorted(CORPUS)}") from None
    return factory(**params)
