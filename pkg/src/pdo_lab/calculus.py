"""Quantization, mollification, symbol smoothing, composition and parametrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._fd import fd_weights
from .lattice import Field, Grid, bessel_multiplier, bracket, dyadic_eval, fourier, plateau
from .oscint import Amplitude, RegularizerOrder, osc_parts
from .spaces import multi_indices
from .symbols import Symbol, SymbolMeta, matrix_norm, nonsmooth_seminorm, refined_xi

__all__ = [
    "quantize",
    "quantize_reference",
    "symbol_matrix",
    "MollifierFamily",
    "mollify",
    "RateReport",
    "mollify_convergence",
    "SmoothingSplit",
    "symbol_smoothing",
    "decay_exponent",
    "xi_derivative",
    "compose_expansion",
    "compose_exact_periodic",
    "compose_remainder",
    "remainder_point_osc",
    "r_theta_osc",
    "r_theta_periodic",
    "operator_error",
    "Parametrix",
    "build_parametrix",
    "excision",
    "localize_at_infinity",
]


# -- quantization ---------------------------------------------------------------


def _as_components(u: Field) -> np.ndarray:
    """Values with a trailing component axis."""
    return u.values[..., None] if u.values.ndim == u.grid.n else u.values


def _check_shapes(a: Symbol, u: Field) -> None:
    if u.l != a.l:
        raise ValueError(f"field has {u.l} components, symbol acts on {a.l}")


def quantize_reference(a: Symbol, u: Field) -> Field:
    """Literal sum ``op(a)u(x) = sum_xi e^{i x.xi} a(x, xi) u_hat(xi) dbar-xi``.

    Costs ``O(N^{2n})``; every fast path is checked against it.
    """
    _check_shapes(a, u)
    g = u.grid
    uh = _as_components(fourier(u)).reshape(g.size, a.l)
    A = a.sample(g).reshape(g.size, g.size, a.l, a.l)
    xs = np.stack([np.ravel(c) for c in (g.x if g.n == 2 else (g.x,))], -1)
    ks = np.stack([np.ravel(c) for c in (g.xi if g.n == 2 else (g.xi,))], -1)
    w = (g.dxi / (2 * np.pi)) ** g.n
    out = np.empty((g.size, a.l), dtype=complex)
    for s in range(0, g.size, 512):
        E = np.exp(1j * xs[s:s + 512] @ ks.T)
        out[s:s + 512] = np.einsum("xk,xkij,kj->xi", E, A[s:s + 512], uh) * w
    return _wrap(g, out, u)


def _wrap(g: Grid, flat: np.ndarray, like: Field) -> Field:
    vals = flat.reshape(g.shape + (flat.shape[-1],))
    if like.values.ndim == g.n:
        vals = vals[..., 0]
    return Field(g, vals)


def _inverse_lattice_sum(g: Grid, vals: np.ndarray) -> np.ndarray:
    """``sum_xi e^{i x.xi} vals(xi) dbar-xi`` on the x-nodes; leading axes are xi."""
    ax = tuple(range(g.n))
    ph = g._phase.reshape(g._phase.shape + (1,) * (vals.ndim - g.n))
    return np.fft.ifftn(np.fft.ifftshift(ph * vals, axes=ax), axes=ax) / g.h**g.n


def quantize(a: Symbol, u: Field, mode_tol: float = 1e-14) -> Field:
    """Fast ``op(a)u`` through the x-Fourier modes of the sampled symbol.

    Writing ``a(x, xi) = sum_eta c_eta(xi) e^{i x.eta}`` on the grid, each
    retained mode costs one inverse FFT; trigonometric symbols keep few modes.
    """
    _check_shapes(a, u)
    g = u.grid
    ax = tuple(range(g.n))
    A = a.sample(g)  # x..., xi..., l, l
    C = np.fft.fftn(A, axes=ax) / g.size  # x-mode coefficients
    uh = _as_components(fourier(u))
    mag = np.max(np.abs(C).reshape(g.size, -1), axis=1)
    keep = np.flatnonzero(mag > mode_tol * max(mag.max(), 1e-300))
    freqs = [np.fft.fftfreq(g.N, d=1.0 / g.N)] * g.n
    out = np.zeros(g.shape + (a.l,), dtype=complex)
    x = g.x if g.n == 2 else (g.x,)
    for idx in keep:
        multi = np.unravel_index(idx, g.shape)
        c = C[multi]  # xi..., l, l
        v = np.einsum("...ij,...j->...i", c, uh)
        # the first node sits at -L
        wave = np.exp(1j * sum((xc + g.L) * (np.pi / g.L) * freqs[i][multi[i]] for i, xc in enumerate(x)))
        out += wave[..., None] * _inverse_lattice_sum(g, v)
    vals = out[..., 0] if u.values.ndim == g.n else out
    return Field(g, vals)


def symbol_matrix(a: Symbol, g: Grid) -> np.ndarray:
    """Dense matrix of ``op(a)`` acting on nodal values (``l N^n`` square)."""
    n_tot = a.l * g.size
    if n_tot > 4096:
        raise ValueError(f"matrix of size {n_tot} exceeds the 4096 limit")
    A = a.sample(g).reshape(g.size, g.size, a.l, a.l)
    xs = np.stack([np.ravel(c) for c in (g.x if g.n == 2 else (g.x,))], -1)
    ks = np.stack([np.ravel(c) for c in (g.xi if g.n == 2 else (g.xi,))], -1)
    w = (g.dxi / (2 * np.pi)) ** g.n
    E = np.exp(1j * xs @ ks.T) * w
    # u_hat(k) = h^n sum_y e^{-i y.k} u(y)
    F = np.exp(-1j * ks @ xs.T) * g.h**g.n
    K = np.einsum("xk,xkij,ky->xiyj", E, A, F)
    return K.reshape(n_tot, n_tot)


# -- mollification --------------------------------------------------------------


def _gauss(r2, n):
    return (2 * np.pi) ** (-n / 2) * np.exp(-r2 / 2)


_BUMP_MASS = {}


def _bump(r2, n):
    inside = r2 < 1
    v = np.where(inside, np.exp(-1.0 / np.where(inside, 1 - r2, 1.0)), 0.0)
    if n not in _BUMP_MASS:
        from scipy.integrate import quad

        if n == 1:
            mass = 2 * quad(lambda r: math.exp(-1 / (1 - r * r)), 0, 1)[0]
        else:
            mass = 2 * math.pi * quad(lambda r: r * math.exp(-1 / (1 - r * r)), 0, 1)[0]
        _BUMP_MASS[n] = mass
    return v / _BUMP_MASS[n]


@dataclass(frozen=True)
class MollifierFamily:
    """Positive Dirac family ``phi_eps(x) = eps^-n phi(x / eps)``; ``kind`` is gauss or bump."""

    kind: str = "gauss"
    eps: tuple[float, ...] = tuple(2.0**-k for k in range(2, 9))

    def __post_init__(self) -> None:
        if self.kind not in ("gauss", "bump"):
            raise ValueError(f"unknown mollifier {self.kind!r}")
        if any(e <= 0 for e in self.eps):
            raise ValueError("eps values must be positive")

    def kernel(self, grid: Grid, eps: float) -> np.ndarray:
        r2 = np.asarray(grid.abs_x) ** 2 / eps**2
        base = _gauss if self.kind == "gauss" else _bump
        return base(r2, grid.n) / eps**grid.n

    def mass_defect(self, grid: Grid, eps: float) -> float:
        return abs(grid.h**grid.n * float(np.sum(self.kernel(grid, eps))) - 1.0)


def _convolve_x(values: np.ndarray, grid: Grid, kernel: np.ndarray) -> np.ndarray:
    ax = tuple(range(grid.n))
    kh = np.fft.fftn(np.fft.ifftshift(kernel), axes=ax) * grid.h**grid.n
    kh = kh.reshape(kh.shape + (1,) * (values.ndim - grid.n))
    return np.fft.ifftn(np.fft.fftn(values, axes=ax) * kh, axes=ax)


def mollify(a: Symbol, fam: MollifierFamily, eps: float) -> Symbol:
    """``a_eps(x, xi) = (a(., xi) * phi_eps)(x)``, periodic x-convolution by FFT."""
    if eps <= 0:
        raise ValueError("eps must be positive")

    def sampler(grid, xi):
        return _convolve_x(a.sample(grid, xi), grid, fam.kernel(grid, eps))

    meta = SymbolMeta(a.meta.m, a.meta.rho, a.meta.delta, None, None, a.meta.M, a.meta.l)
    return Symbol(None, meta, f"{a.name}*phi_{eps:g}", a.a_inf, sampler)


@dataclass
class RateReport:
    """Seminorm distances over eps with a log-log slope fit."""

    eps: np.ndarray
    values: np.ndarray
    slope: float
    monotone: bool
    flags: list[str] = field(default_factory=list)


def _difference(a: Symbol, b: Symbol) -> Symbol:
    meta = replace_meta(a.meta, m_tilde=a.meta.m_tilde)
    return Symbol(None, meta, f"{a.name}-{b.name}", None, lambda g, xi: a.sample(g, xi) - b.sample(g, xi))


def replace_meta(meta: SymbolMeta, **kw) -> SymbolMeta:
    from dataclasses import replace

    return replace(meta, **kw)


def mollify_convergence(a: Symbol, grid: Grid, fam: MollifierFamily, k: int, t: float,
                        m_tilde: int | None = None, xi=None, window: float | None = None,
                        fit_last: int | None = None) -> RateReport:
    """``|a_eps - a|_{k, C^{m_tilde,t} S^m_{rho,delta}}`` for each eps of the family."""
    mt = a.meta
    if mt.tau is not None and not t < mt.tau:
        raise ValueError(f"need t < tau = {mt.tau}")
    m_tilde = (mt.m_tilde or 0) if m_tilde is None else m_tilde
    xi = refined_xi(grid) if xi is None else xi
    flags = []
    if mt.delta != 0:
        from .symbols import is_cunif

        ok, _ = is_cunif(a, grid, xi=xi)
        if not ok:
            flags.append("cunif-diagnostic-failed")
    eps = np.array(sorted(fam.eps, reverse=True))
    vals = np.array([
        nonsmooth_seminorm(_difference(mollify(a, fam, e), a), grid, k, m_tilde, t, xi, window).value
        for e in eps
    ])
    mono = bool(np.all(np.diff(vals) < 0))
    if not mono:
        flags.append("non-monotone")
    sel = slice(None) if fit_last is None else slice(-fit_last, None)
    pos = vals[sel] > 0
    slope = float("nan")
    if np.count_nonzero(pos) >= 2:
        slope = float(np.polyfit(np.log(eps[sel][pos]), np.log(vals[sel][pos]), 1)[0])
    return RateReport(eps, vals, slope, mono, flags)


# -- symbol smoothing -------------------------------------------------------------


@dataclass(frozen=True)
class SmoothingSplit:
    """``a = a_sharp + a_flat`` with ``eps_j = 2^{-j gamma}``."""

    sharp: Symbol
    flat: Symbol
    gamma: float
    source: Symbol

    def eps(self, j: int) -> float:
        return 2.0 ** (-j * self.gamma)

    def exactness_defect(self, grid: Grid, xi=None) -> float:
        a = self.source.sample(grid, xi)
        return float(np.max(np.abs(self.sharp.sample(grid, xi) + self.flat.sample(grid, xi) - a)))


def _sharp_samples(a: Symbol, grid: Grid, xi, gamma: float) -> np.ndarray:
    vals = a.sample(grid, xi)
    ax = tuple(range(grid.n))
    spec = np.fft.fftn(vals, axes=ax)
    # x-frequencies in FFT order
    k1 = 2 * np.pi * np.fft.fftfreq(grid.N, d=grid.h)
    kabs = np.abs(k1) if grid.n == 1 else np.sqrt(k1[:, None] ** 2 + k1[None, :] ** 2)
    xabs = np.sqrt(sum(c**2 for c in xi)) if isinstance(xi, tuple) else np.abs(np.asarray(xi))
    J = int(np.ceil(np.log2(max(float(xabs.max()), 2.0)))) + 1
    out = np.zeros_like(vals)
    pad = (1,) * grid.n
    for j in range(J + 1):
        psi = dyadic_eval(j, xi)
        if not np.any(psi):
            continue
        Jeps = plateau(2.0 ** (-j * gamma) * kabs)
        sm = np.fft.ifftn(spec * Jeps.reshape(Jeps.shape + (1,) * (vals.ndim - grid.n)), axes=ax)
        out += sm * psi.reshape(pad + psi.shape + (1, 1))
    return out


def symbol_smoothing(a: Symbol, gamma: float) -> SmoothingSplit:
    """Split ``a`` into ``sum_j J_{eps_j} a psi_j`` and the rest, with ``J_eps = phi(eps D_x)``."""
    mt = a.meta
    if not mt.delta < gamma < mt.rho:
        raise ValueError(f"gamma={gamma} must lie in (delta, rho) = ({mt.delta}, {mt.rho})")

    def sharp(grid, xi):
        return _sharp_samples(a, grid, xi, gamma)

    def flat(grid, xi):
        return a.sample(grid, xi) - _sharp_samples(a, grid, xi, gamma)

    s_meta = SymbolMeta(mt.m, mt.rho, gamma, None, None, mt.M, mt.l)
    tau = mt.tau or 0.0
    f_meta = SymbolMeta(mt.m - (gamma - mt.delta) * ((mt.m_tilde or 0) + tau), mt.rho, gamma,
                        mt.m_tilde, mt.tau, mt.M, mt.l)
    return SmoothingSplit(Symbol(None, s_meta, f"{a.name}#", None, sharp),
                          Symbol(None, f_meta, f"{a.name}b", None, flat), gamma, a)


def decay_exponent(a: Symbol, grid: Grid, xi_min: float, xi_max: float) -> float:
    """Slope of ``log sup_x |a(x, xi)|`` against ``log <xi>`` on lattice ``xi_min <= xi <= xi_max``."""
    if grid.n != 1:
        raise ValueError("decay fits are one-dimensional")
    xi = grid.xi_axis[(grid.xi_axis >= xi_min) & (grid.xi_axis <= xi_max)]
    sup = matrix_norm(a.sample(grid, xi)).max(axis=0)
    ok = sup > 0
    return float(np.polyfit(np.log(bracket(xi[ok])), np.log(sup[ok]), 1)[0])


# -- composition -----------------------------------------------------------------------


def _shift_xi(xi, axis: int, d: float):
    if isinstance(xi, tuple):
        return tuple(c + d if i == axis else c for i, c in enumerate(xi))
    return np.asarray(xi) + d


def xi_derivative(a: Symbol, grid: Grid, xi, alpha, step: float = 1.0 / 16, accuracy: int = 8) -> np.ndarray:
    """``d_xi^alpha a`` at arbitrary xi points by centered differences of fresh samples."""
    if not any(alpha):
        return a.sample(grid, xi)
    a.meta.check_budget(sum(alpha))

    def rec(pts, axis):
        if axis == len(alpha):
            return a.sample(grid, pts)
        k = alpha[axis]
        if k == 0:
            return rec(pts, axis + 1)
        half = (k + accuracy + 1) // 2
        offs = tuple(range(-half, half + 1))
        w = fd_weights(offs, k)
        return sum(wi * rec(_shift_xi(pts, axis, o * step), axis + 1) for wi, o in zip(w, offs) if wi != 0) / step**k

    return rec(xi, 0)


def _dx_spectral(values: np.ndarray, grid: Grid, beta) -> np.ndarray:
    """``D_x^beta = (-i d_x)^beta`` spectrally along the x-axes."""
    if not any(beta):
        return values
    ax = tuple(range(grid.n))
    spec = np.fft.fftn(values, axes=ax)
    k1 = 2 * np.pi * np.fft.fftfreq(grid.N, d=grid.h)
    for i, b in enumerate(beta):
        if b:
            shape = [1] * values.ndim
            shape[i] = grid.N
            spec = spec * (k1.reshape(shape) ** b)
    return np.fft.ifftn(spec, axes=ax)


def _matmul(A, B):
    return np.einsum("...ij,...jk->...ik", A, B)


def compose_expansion(a1: Symbol, a2: Symbol, k: int) -> Symbol:
    """``a1 #_k a2 = sum_{|g| < k} (1/g!) d_xi^g a1 D_x^g a2`` (``a2`` smooth in x)."""
    if k < 1:
        raise ValueError("expansion length k must be >= 1")
    if a1.l != a2.l:
        raise ValueError("matrix sizes differ")
    if not a2.meta.smooth and a2.meta.m_tilde < k - 1:
        raise ValueError("a2 lacks the x-regularity for this k")
    a1.meta.check_budget(k - 1)

    def sampler(grid, xi):
        v2 = a2.sample(grid, xi)
        out = 0
        for order in range(k):
            for g_ in multi_indices(grid.n, order, exact=True):
                c = 1.0 / math.prod(math.factorial(t) for t in g_)
                out = out + c * _matmul(xi_derivative(a1, grid, xi, g_), _dx_spectral(v2, grid, g_))
        return np.asarray(out)

    meta = SymbolMeta(a1.meta.m + a2.meta.m, min(a1.meta.rho, a2.meta.rho),
                      max(a1.meta.delta, a2.meta.delta), None, None, None, a1.l)
    return Symbol(None, meta, f"{a1.name}#{k}{a2.name}", None, sampler)


def _x_modes(a2: Symbol, grid: Grid, xi, tol: float = 1e-13):
    """Significant x-Fourier modes ``(zeta, c_zeta(xi))`` of lattice-periodic ``a2``."""
    ax = tuple(range(grid.n))
    v = a2.sample(grid, xi)
    C = np.fft.fftn(v, axes=ax) / grid.size
    # undo the offset of the first node at -L
    k1 = 2 * np.pi * np.fft.fftfreq(grid.N, d=grid.h)
    mags = np.max(np.abs(C).reshape(grid.size, -1), axis=1)
    out = []
    for idx in np.flatnonzero(mags > tol * max(mags.max(), 1e-300)):
        multi = np.unravel_index(idx, grid.shape)
        zeta = tuple(float(k1[i]) for i in multi)
        phase = np.exp(1j * grid.L * sum(zeta))
        out.append((zeta, C[multi] * phase))
    return out


def _xgrid(grid: Grid):
    return grid.x if grid.n == 2 else (grid.x,)


def compose_exact_periodic(a1: Symbol, a2: Symbol) -> Symbol:
    """Exact ``op(a1) op(a2)`` symbol ``sum_zeta a1(x, xi + zeta) c_zeta(xi) e^{i x.zeta}`` for periodic ``a2``."""

    def sampler(grid, xi):
        out = 0
        for zeta, c in _x_modes(a2, grid, xi):
            shifted = xi
            for i, z in enumerate(zeta):
                shifted = _shift_xi(shifted, i, z)
            wave = np.exp(1j * sum(xc * z for xc, z in zip(_xgrid(grid), zeta)))
            wave = wave.reshape(grid.shape + (1,) * (a1.sample(grid, xi).ndim - grid.n))
            out = out + wave * _matmul(a1.sample(grid, shifted), np.broadcast_to(c, a1.sample(grid, xi).shape[grid.n:]))
        return np.asarray(out)

    meta = SymbolMeta(a1.meta.m + a2.meta.m, l=a1.l)
    return Symbol(None, meta, f"{a1.name}o{a2.name}", None, sampler)


def compose_remainder(a1: Symbol, a2: Symbol, k: int, theta_nodes: int = 8) -> Symbol:
    """``R_k = k sum_{|g|=k} (1/g!) int_0^1 (1-t)^{k-1} r_{g,t} dt`` for lattice-periodic ``a2``.

    For periodic ``a2`` the oscillatory integral ``r_{g,t}`` collapses to the
    mode sum ``sum_zeta d_xi^g a1(x, xi + t zeta) zeta^g c_zeta(xi) e^{i x.zeta}``;
    :func:`remainder_point_osc` evaluates the same quantity through
    :func:`osc_parts` for cross-checks. The t-integral is Gauss-Legendre.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    nodes, weights = np.polynomial.legendre.leggauss(theta_nodes)
    th, wt = (nodes + 1) / 2, weights / 2

    def sampler(grid, xi):
        modes = _x_modes(a2, grid, xi)
        out = 0
        for g_ in multi_indices(grid.n, k, exact=True):
            cg = k / math.prod(math.factorial(t) for t in g_)
            for zeta, c in modes:
                zg = math.prod(z**p for z, p in zip(zeta, g_))
                if zg == 0:
                    continue
                wave = np.exp(1j * sum(xc * z for xc, z in zip(_xgrid(grid), zeta)))
                acc = 0
                for t, w in zip(th, wt):
                    shifted = xi
                    for i, z in enumerate(zeta):
                        shifted = _shift_xi(shifted, i, t * z)
                    acc = acc + w * (1 - t) ** (k - 1) * xi_derivative(a1, grid, shifted, g_)
                acc = np.asarray(acc)
                wv = wave.reshape(grid.shape + (1,) * (acc.ndim - grid.n))
                out = out + cg * zg * wv * _matmul(acc, np.broadcast_to(c, acc.shape[grid.n:]))
        if isinstance(out, int):
            shape = grid.shape + np.shape(xi[0] if isinstance(xi, tuple) else xi) + (a1.l, a1.l)
            return np.zeros(shape, dtype=complex)
        return np.asarray(out)

    meta = SymbolMeta(a1.meta.m + a2.meta.m - k * (min(a1.meta.rho, a2.meta.rho) - max(a1.meta.delta, a2.meta.delta)),
                      l=a1.l)
    return Symbol(None, meta, f"R{k}({a1.name},{a2.name})", None, sampler)


def r_theta_osc(a1_func: Callable, a2_func: Callable, k: int, x: float, xi: float, theta: float,
                order: RegularizerOrder | None = None, step: float = 1.0 / 16) -> complex:
    """1D ``r_{k,theta}(x, xi) = Os-iint e^{-iy eta} d_xi^k a1(xi + theta eta) D_x^k a2(x + y)`` via :func:`osc_parts`.

    ``a1_func(xi)`` and ``a2_func(x)`` are closed forms (``a1`` x-independent,
    ``a2`` xi-independent), the setting of the corpus cross-checks.
    """
    order = RegularizerOrder(6, 2) if order is None else order
    half = (k + 9) // 2
    offs = tuple(range(-half, half + 1))
    w = fd_weights(offs, k)

    def dk_a1(z):
        return sum(wi * a1_func(z + o * step) for wi, o in zip(w, offs)) / step**k

    def dk_a2(yy):
        return (-1j) ** k * sum(wi * a2_func(x + yy + o * step) for wi, o in zip(w, offs)) / step**k

    amp = Amplitude(lambda y, eta: dk_a1(xi + theta * eta) * dk_a2(y), m=1.0, tau=0.0)
    return osc_parts(amp, order, tol=1e-7, check=False).value


def remainder_point_osc(a1_func: Callable, a2_func: Callable, k: int, x: float, xi: float,
                        theta_nodes: int = 8, order: RegularizerOrder | None = None) -> complex:
    """1D scalar ``R_k(x, xi)`` with each ``r_{k,theta}`` from :func:`r_theta_osc` (slow)."""
    nodes, weights = np.polynomial.legendre.leggauss(theta_nodes)
    total = 0.0 + 0.0j
    for t, w in zip((nodes + 1) / 2, weights / 2):
        total += w * (1 - t) ** (k - 1) * r_theta_osc(a1_func, a2_func, k, x, xi, t, order)
    return k / math.factorial(k) * total


def r_theta_periodic(a1: Symbol, a2: Symbol, k: int, grid: Grid, xi, theta: float) -> np.ndarray:
    """Mode-sum value of ``r_{k,theta}`` (1D), the closed form matched by :func:`r_theta_osc`."""
    out = 0
    for zeta, c in _x_modes(a2, grid, xi):
        z = zeta[0]
        if z == 0:
            continue
        d = xi_derivative(a1, grid, _shift_xi(xi, 0, theta * z), (k,))
        wave = np.exp(1j * grid.x_axis * z).reshape((grid.N,) + (1,) * (d.ndim - 1))
        out = out + z**k * wave * _matmul(d, np.broadcast_to(c, d.shape[1:]))
    return np.asarray(out)


def operator_error(exact: Callable[[Field], Field], approx: Symbol, u: Field) -> float:
    """``||exact(u) - op(approx)u||_2 / ||u||_2``."""
    return (exact(u) - quantize(approx, u)).l2() / u.l2()


# -- parametrix and localization ---------------------------------------------------------


def excision(r):
    """``psi``: 0 on ``|r| <= 1``, 1 on ``|r| >= 2``."""
    return 1.0 - plateau(r)


@dataclass(frozen=True)
class Parametrix:
    """``Q = <D>^{-m} op(b)`` with ``b = psi(R^-2(|x|^2+|xi|^2)) a_tilde^{-1}``."""

    b: Symbol
    m: float
    R: float

    def apply(self, u: Field) -> Field:
        return bessel_multiplier(quantize(self.b, u), -self.m)

    def residual(self, a: Symbol, u: Field) -> float:
        """``||(Q op(a) - I) u||_2 / ||u||_2``."""
        return (self.apply(quantize(a, u)) - u).l2() / u.l2()


def build_parametrix(a: Symbol, R: float, psi: Callable = excision, det_floor: float = 1e-12) -> Parametrix:
    """Inverse symbol of ``a <xi>^{-m}`` excised near the phase-space origin."""
    m, l = a.meta.m, a.l

    def sampler(grid, xi):
        at = a.sample(grid, xi)
        bx = bracket(xi) ** (-m)
        at = at * bx.reshape((1,) * grid.n + bx.shape + (1, 1))
        absx2 = grid.abs_x.reshape(grid.shape + (1,) * np.ndim(bx)) ** 2
        absxi2 = (bracket(xi) ** 2 - 1).reshape((1,) * grid.n + bx.shape)
        cut = psi((absx2 + absxi2) / R**2)
        live = cut > 0
        det = np.abs(at[..., 0, 0]) if l == 1 else np.abs(np.linalg.det(at))
        if np.any(live & (det < det_floor)):
            raise ValueError("symbol is singular outside the excised region; ellipticity input is corrupt")
        safe = np.where(live[..., None, None], at, np.eye(l))
        inv = np.linalg.inv(safe) if l > 1 else 1.0 / safe
        return inv * cut[..., None, None]

    meta = SymbolMeta(0.0, a.meta.rho, a.meta.delta, a.meta.m_tilde, a.meta.tau, a.meta.M, l)
    return Parametrix(Symbol(None, meta, f"inv({a.name})", None, sampler), m, R)


def localize_at_infinity(a: Symbol, R_hat: float, psi: Callable = excision) -> Symbol:
    """``a psi(x / R_hat) + a_inf (1 - psi(x / R_hat))``: equals ``a_inf`` near the origin."""
    if a.a_inf is None:
        raise ValueError(f"symbol {a.name!r} has no limit symbol")

    def sampler(grid, xi):
        v = a.sample(grid, xi)
        lim = a.limit(xi)
        p = psi(grid.abs_x / R_hat).reshape(grid.shape + (1,) * (v.ndim - grid.n))
        return v * p + lim.reshape((1,) * grid.n + lim.shape) * (1 - p)

    return Symbol(None, a.meta, f"loc({a.name},{R_hat:g})", a.a_inf, sampler)
