"""Finite-dimensional probes of Fredholm index and invertibility.

An operator ``op(a): H^{s+m} -> H^s`` is realized as the dense matrix
``W_s K_hat W_{s+m}^{-1}``, where ``K_hat`` is ``op(a)`` in the orthonormal
Fourier basis and ``W`` are diagonal weights. Square truncations have index
zero algebraically, so kernel and cokernel are counted from near-null
singular pairs whose vectors live in the interior of the box; partners
concentrated at the periodic seam are truncation artifacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .calculus import symbol_matrix
from .lattice import Field, Grid, bracket, dyadic_eval
from .spaces import SpaceSpec, besov_lp_norm, lp_blocks
from .symbols import Symbol, is_elliptic

__all__ = [
    "OperatorMatrix",
    "IndexReport",
    "SweepReport",
    "RegularityReport",
    "PerturbationReport",
    "spec_weights",
    "fourier_basis",
    "assemble",
    "assemble_matrix",
    "numerical_index",
    "winding_index",
    "admissible",
    "invariance_sweep",
    "transfer_residual",
    "regularity_probe",
    "perturbation_probe",
]


def spec_weights(grid: Grid, spec: SpaceSpec, shift: float = 0.0) -> np.ndarray:
    """Diagonal weights on the ascending xi lattice for the order ``spec.s + shift``.

    ``p == 2`` gives ``<xi>^s``; other p use the block weights
    ``sum_j 2^{j (s + n(1/2 - 1/p))} phi_j(xi)``, the Bernstein-scaled proxy.
    """
    s = spec.s + shift
    xi = grid.xi
    if not spec.proxy:
        w = bracket(xi) ** s
    else:
        e = s + grid.n * (0.5 - 1.0 / spec.p)
        w = sum(2.0 ** (j * e) * dyadic_eval(j, xi) for j in range(lp_blocks(grid) + 1))
    return np.asarray(w, dtype=float).ravel()


def fourier_basis(grid: Grid) -> np.ndarray:
    """Unitary matrix taking nodal values to Fourier coefficients on the ascending lattice."""
    F1 = np.fft.fftshift(np.fft.fft(np.eye(grid.N), axis=0, norm="ortho"), axes=0)
    return F1 if grid.n == 1 else np.kron(F1, F1)


@dataclass(frozen=True)
class OperatorMatrix:
    """``W_out K_hat W_in^{-1}`` with lazily computed SVD."""

    matrix: np.ndarray = field(repr=False)
    grid: Grid
    spec: SpaceSpec
    order: float
    symbol_id: str
    l: int = 1
    w_out: np.ndarray = field(default=None, repr=False)
    w_in: np.ndarray = field(default=None, repr=False)
    basis: np.ndarray = field(default=None, repr=False)

    @cached_property
    def svd(self):
        return np.linalg.svd(self.matrix)

    @property
    def singular_values(self) -> np.ndarray:
        return self.svd[1]

    @property
    def sigma_min(self) -> float:
        return float(self.singular_values[-1])

    def to_physical(self, v: np.ndarray, side: str = "in") -> np.ndarray:
        """Nodal function behind a weighted coefficient vector.

        ``side="in"`` undoes the domain weight (kernel vectors);
        ``side="out"`` applies the target weight (cokernel functionals).
        """
        w = self.w_in if side == "in" else self.w_out
        c = v.reshape(-1, self.l)
        c = c / w[:, None] if side == "in" else c * w[:, None]
        return (self.basis.conj().T @ c).reshape(self.grid.shape + ((self.l,) if self.l > 1 else ()))

    def from_physical(self, u: np.ndarray) -> np.ndarray:
        c = self.basis @ np.asarray(u).reshape(self.grid.size, self.l)
        return (c * self.w_in[:, None]).ravel()


def assemble_matrix(K: np.ndarray, grid: Grid, spec: SpaceSpec, order: float, symbol_id: str,
                    l: int = 1) -> OperatorMatrix:
    """Weight a nodal operator matrix ``K`` (``l N^n`` square) for ``H^{s+order} -> H^s``."""
    n_tot = l * grid.size
    if K.shape != (n_tot, n_tot):
        raise ValueError("matrix does not match grid and component count")
    if n_tot > 4096:
        raise ValueError(f"matrix of size {n_tot} exceeds the 4096 limit")
    F = fourier_basis(grid)
    Fl = np.kron(F, np.eye(l)) if l > 1 else F
    Kh = Fl @ K @ Fl.conj().T
    w_out = spec_weights(grid, spec)
    w_in = spec_weights(grid, spec, order)
    wo = np.repeat(w_out, l)
    wi = np.repeat(w_in, l)
    M = (wo[:, None] * Kh) / wi[None, :]
    return OperatorMatrix(M, grid, spec, order, symbol_id, l, w_out, w_in, F)


def assemble(a: Symbol, grid: Grid, spec: SpaceSpec) -> OperatorMatrix:
    """Dense weighted matrix of ``op(a)`` on ``grid``."""
    if spec.l != a.l:
        spec = SpaceSpec(spec.s, spec.p, spec.q, a.l)
    return assemble_matrix(symbol_matrix(a, grid), grid, spec, a.meta.m, a.name, a.l)


@dataclass
class IndexReport:
    """Kernel/cokernel counts of one weighted matrix."""

    kernel_dim: int
    cokernel_dim: int
    gap: float
    flagged: bool
    threshold: float
    symbol_id: str = ""
    s: float = 0.0
    p_mode: str = "exact"
    sigma_min: float = 0.0
    winding: int | None = None
    kernel_vectors: list = field(default_factory=list, repr=False)
    residuals: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def index(self) -> int:
        return self.kernel_dim - self.cokernel_dim

    def record(self) -> dict:
        return {
            "symbol_id": self.symbol_id,
            "s": self.s,
            "p_mode": self.p_mode,
            "kernel_dim": self.kernel_dim,
            "cokernel_dim": self.cokernel_dim,
            "index": self.index,
            "gap": self.gap,
            "flagged": self.flagged,
        }


def _interior_fraction(u: np.ndarray, grid: Grid, frac: float) -> float:
    mass = np.abs(u) ** 2
    if mass.ndim > grid.n:
        mass = mass.sum(axis=-1)
    inside = np.all(np.abs(np.stack(grid.x if grid.n == 2 else (grid.x,))) < frac * grid.L, axis=0)
    tot = float(mass.sum())
    return float(mass[inside].sum()) / tot if tot > 0 else 0.0


def numerical_index(M: OperatorMatrix, tol: float = 1e-8, gap_min: float = 10.0,
                    interior: float = 0.75, min_mass: float = 0.5) -> IndexReport:
    """Count interior-localized near-null singular vectors on each side.

    A singular pair with ``sigma < tol * sigma_max`` contributes to the
    kernel when its right vector (as a function) keeps at least ``min_mass``
    of its energy in ``|x| < interior * L``, and to the cokernel when the
    left vector (as a functional) does.
    """
    U, S, Vh = M.svd
    thr = tol * S[0]
    small = np.flatnonzero(S < thr)
    big = S[S >= thr]
    retained = float(big.min()) if big.size else 0.0
    discarded = float(S[small].max()) if small.size else thr
    gap = retained / discarded if discarded > 0 else math.inf
    ker, coker, vecs, res, notes = 0, 0, [], [], []
    for i in small:
        v = Vh[i].conj()
        w = U[:, i]
        fr = _interior_fraction(M.to_physical(v, "in"), M.grid, interior)
        fl = _interior_fraction(M.to_physical(w, "out"), M.grid, interior)
        if fr >= min_mass:
            ker += 1
            vecs.append(v)
            res.append(float(np.linalg.norm(M.matrix @ v) / np.linalg.norm(v)))
        if fl >= min_mass:
            coker += 1
        if fr < min_mass and fl < min_mass:
            notes.append(f"seam pair sigma={S[i]:.2e}")
    return IndexReport(ker, coker, gap, gap < gap_min, tol, M.symbol_id, M.spec.s, M.spec.p_mode,
                       float(S[-1]), None, vecs, res, notes)


def winding_index(a: Symbol, R: float, grid: Grid | None = None, C0: float = 1e-3,
                  R_bar: float | None = None, samples: int = 4000) -> int:
    """Winding number of ``a / |a|`` along the counter-clockwise boundary of ``[-R_bar, R_bar]^2``."""
    if a.func is None or a.l != 1:
        raise ValueError("winding index needs a scalar closed-form symbol")
    if grid is not None:
        if grid.n != 1:
            raise ValueError("winding index is one-dimensional")
        if not is_elliptic(a, grid, R, C0):
            raise ValueError("ellipticity gate failed")
        lim = 0.9 * min(grid.L, grid.dxi * (grid.N // 2 - 1))
        R_bar = lim if R_bar is None else min(R_bar, lim)
    R_bar = 2 * R if R_bar is None else R_bar
    if R_bar < R:
        raise ValueError(f"boundary radius {R_bar} lies inside the non-elliptic region R={R}")
    t = np.linspace(-R_bar, R_bar, samples, endpoint=False)
    # counter-clockwise in the (x, xi) plane
    xs = np.concatenate([t, np.full_like(t, R_bar), -t, np.full_like(t, -R_bar)])
    ks = np.concatenate([np.full_like(t, -R_bar), t, np.full_like(t, R_bar), -t])
    vals = np.asarray(a.func(xs, ks), dtype=complex) * np.ones(xs.shape)
    if np.min(np.abs(vals)) == 0:
        raise ValueError("symbol vanishes on the boundary")
    ph = np.unwrap(np.angle(np.append(vals, vals[0])))
    w = (ph[-1] - ph[0]) / (2 * np.pi)
    k = int(round(w))
    if abs(w - k) > 0.1:
        raise ValueError(f"phase deviation {abs(w - k):.3f} too large")
    return k


def admissible(a: Symbol, spec: SpaceSpec, n: int = 1) -> bool:
    """``(1-rho) n/p - (1-delta)(m_tilde+tau) < s < m_tilde+tau``; smooth symbols are unrestricted."""
    mt = a.meta
    if mt.smooth:
        return True
    reg = mt.m_tilde + (mt.tau or 0.0)
    return (1 - mt.rho) * n / spec.p - (1 - mt.delta) * reg < spec.s < reg


@dataclass
class SweepReport:
    rows: list[IndexReport]
    invariant: bool
    indices: list[int]


def invariance_sweep(a: Symbol, grid: Grid, specs, tol: float = 1e-8, **kw) -> SweepReport:
    """Index per spec; invariant iff all non-flagged indices coincide."""
    rows = []
    for sp in specs:
        if not admissible(a, sp, grid.n):
            raise ValueError(f"spec {sp} outside the admissible window of {a.name}")
        rows.append(numerical_index(assemble(a, grid, sp), tol, **kw))
    good = [r.index for r in rows if not r.flagged]
    return SweepReport(rows, len(set(good)) <= 1 and bool(good), [r.index for r in rows])


def transfer_residual(u: np.ndarray, M: OperatorMatrix) -> float:
    """``||M v|| / ||v||`` for the nodal function ``u`` expressed in ``M``'s weighted basis."""
    v = M.from_physical(u)
    return float(np.linalg.norm(M.matrix @ v) / np.linalg.norm(v))


@dataclass
class RegularityReport:
    ratio: float
    tail_fraction: float
    sigma_min: float
    solution: np.ndarray = field(repr=False)


def regularity_probe(a: Symbol, grid: Grid, spec_low: SpaceSpec, spec_high: SpaceSpec, phi: Field,
                     sigma_floor: float = 1e-8) -> RegularityReport:
    """Solve ``op(a) u = phi`` at ``spec_low`` and measure ``u`` at ``spec_high``.

    Reports ``||u||_{s_high + m} / ||u||_{s_low + m}`` and the share of
    ``|u_hat|^2`` in the outer quarter of the lattice.
    """
    M = assemble(a, grid, spec_low)
    if M.sigma_min < sigma_floor * M.singular_values[0]:
        raise ValueError("operator is not invertible at spec_low")
    F = M.basis
    rhs = (F @ np.asarray(phi.values).reshape(grid.size, a.l)) * M.w_out[:, None]
    try:
        v = np.linalg.solve(M.matrix, rhs.ravel())
    except np.linalg.LinAlgError as exc:
        raise ValueError("solver failure at spec_low") from exc
    u = M.to_physical(v, "in")
    uf = Field(grid, u)
    m = a.meta.m
    lo = besov_lp_norm(uf, spec_low.shifted(m))
    hi = besov_lp_norm(uf, spec_high.shifted(m))
    c = np.abs(F @ u.reshape(grid.size, a.l)) ** 2
    outer = np.asarray(grid.abs_xi).ravel() >= 0.75 * grid.dxi * (grid.N // 2)
    tot = float(c.sum())
    tail = float(c[outer].sum()) / tot if tot > 0 else 0.0
    return RegularityReport(hi / lo if lo > 0 else 0.0, tail, M.sigma_min, u)


@dataclass
class PerturbationReport:
    radii: np.ndarray
    sigma: dict  # spec label -> sigma_min per radius
    radius: dict  # spec label -> invertibility radius
    spread: float  # max radius / min radius


def _crossing(radii, sig, level):
    for i in range(1, len(radii)):
        if sig[i] <= level:
            r0, r1, s0, s1 = radii[i - 1], radii[i], sig[i - 1], sig[i]
            return float(r0 + (s0 - level) * (r1 - r0) / (s0 - s1)) if s0 != s1 else float(r1)
    return math.inf


def perturbation_probe(a: Symbol, h: Symbol, grid: Grid, specs, radii, frac: float = 0.1) -> PerturbationReport:
    """``sigma_min`` of ``a + r h`` per spec; the radius is where it first drops to ``frac * sigma_min(a)``."""
    radii = np.asarray(sorted(radii), dtype=float)
    Ka = symbol_matrix(a, grid)
    Kh = symbol_matrix(h, grid)
    sig, rad = {}, {}
    for sp in specs:
        label = f"s={sp.s:g},{sp.p_mode}"
        base = assemble_matrix(Ka, grid, sp, a.meta.m, a.name, a.l).sigma_min
        if not base > 0:
            raise ValueError(f"{a.name} is not invertible at {label}")
        vals = np.array([
            assemble_matrix(Ka + r * Kh, grid, sp, a.meta.m, a.name, a.l).sigma_min for r in radii
        ])
        sig[label] = vals
        rad[label] = _crossing(np.concatenate([[0.0], radii]), np.concatenate([[base], vals]), frac * base)
    finite = [r for r in rad.values() if math.isfinite(r)]
    spread = max(finite) / min(finite) if finite and len(finite) == len(rad) else math.inf
    return PerturbationReport(radii, sig, rad, spread)
