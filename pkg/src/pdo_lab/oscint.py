"""Oscillatory integrals ``Os-iint e^{-i y eta} a(y, eta) dy dbar-eta`` in 1D.

Two routes: a Schwartz cutoff ``chi(eps y, eps eta)`` with Richardson
extrapolation in ``eps**2``, and integration by parts with the regularizing
operators ``A^l``, which turns the integral into an absolutely convergent one.
Both use the trapezoidal rule on a box whose half-widths double until the
value settles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._fd import derivative

__all__ = [
    "Amplitude",
    "RegularizerOrder",
    "OscResult",
    "gaussian_cutoff",
    "apply_regularizer",
    "osc_cutoff",
    "osc_parts",
    "osc_sequence",
]

DEFAULT_EPS = tuple(2.0**-k for k in range(2, 8))


@dataclass(frozen=True)
class Amplitude:
    """Amplitude ``a(y, eta)`` with declared growth ``(1+|eta|)^m (1+|y|)^tau``.

    ``N`` and ``M`` are the eta- and y-derivative budgets (``None`` = unbounded).
    """

    func: Callable
    m: float = 0.0
    tau: float = 0.0
    N: int | None = None
    M: int | None = None
    name: str = "anon"

    def __call__(self, y, eta):
        y, eta = np.broadcast_arrays(np.asarray(y, dtype=float), np.asarray(eta, dtype=float))
        return np.asarray(self.func(y, eta), dtype=complex) * np.ones(y.shape)

    def growth_ratio(self, radius: float = 8.0, step: float = 0.05, order: int = 1) -> float:
        """Max of ``|d_eta^a d_y^b a| (1+|eta|)^-m (1+|y|)^-tau`` over a sample box, ``a, b <= order``."""
        ax = np.arange(-radius, radius + step / 2, step)
        Y, E = np.meshgrid(ax, ax, indexing="ij")
        vals = self(Y, E)
        w = (1 + np.abs(E)) ** -self.m * (1 + np.abs(Y)) ** -self.tau
        best = 0.0
        for a in range(order + 1):
            va = derivative(vals, 1, a, step, periodic=False) if a else vals
            for b in range(order + 1):
                vb = derivative(va, 0, b, step, periodic=False) if b else va
                best = max(best, float(np.max(np.abs(vb) * w)))
        return best


@dataclass(frozen=True)
class RegularizerOrder:
    """Orders ``l`` (acting in y) and ``lp`` (acting in eta) of the regularizers."""

    l: int
    lp: int

    def __post_init__(self) -> None:
        if self.l < 1 or self.lp < 1:
            raise ValueError("regularizer orders must be positive integers")

    def check(self, amp: Amplitude, n: int = 1) -> None:
        if not self.l > n + amp.m:
            raise ValueError(f"need l > n + m, got l={self.l}, m={amp.m}")
        if not self.lp > n + amp.tau:
            raise ValueError(f"need l' > n + tau, got l'={self.lp}, tau={amp.tau}")
        if amp.M is not None and self.l > amp.M:
            raise ValueError(f"order l={self.l} exceeds the y-derivative budget M={amp.M}")
        if amp.N is not None and self.lp > amp.N:
            raise ValueError(f"order l'={self.lp} exceeds the eta-derivative budget N={amp.N}")


@dataclass
class OscResult:
    """Value plus diagnostics; ``converged`` is False when the estimate is unreliable."""

    value: complex
    converged: bool
    error_estimate: float
    per_eps: dict = field(default_factory=dict)
    box: tuple[float, float] = (0.0, 0.0)


def gaussian_cutoff(y, eta):
    return np.exp(-(y**2 + eta**2))


def _steps(Y: float, E: float, fine: bool) -> tuple[float, float]:
    cap = 0.125 if fine else 0.25
    return min(cap, math.pi / (4 * E)), min(cap, math.pi / (4 * Y))


def _axis(R: float, d: float) -> np.ndarray:
    k = int(math.ceil(R / d))
    return d * np.arange(-k, k + 1)


def _phase_sum(vals: np.ndarray, y: np.ndarray, eta: np.ndarray, dy: float, deta: float,
               chunk: int = 256) -> complex:
    total = 0.0 + 0.0j
    for s in range(0, eta.size, chunk):
        e = eta[s:s + chunk]
        total += np.sum(vals[:, s:s + chunk] * np.exp(-1j * y[:, None] * e[None, :]))
    return total * dy * deta / (2 * np.pi)


def _adaptive(integral: Callable[[float, float], complex], tol: float, r0: float = 4.0,
              r_max: float = 4096.0) -> tuple[complex, bool, tuple[float, float]]:
    """Double each half-width until the value changes by less than ``tol``."""
    Y = E = r0
    cur = integral(Y, E)
    while True:
        grow_y = grow_e = False
        if Y < r_max:
            vy = integral(2 * Y, E)
            grow_y = abs(vy - cur) > tol * (1 + abs(cur))
        if E < r_max:
            ve = integral(Y, 2 * E)
            grow_e = abs(ve - cur) > tol * (1 + abs(cur))
        if not (grow_y or grow_e):
            return cur, True, (Y, E)
        Y, E = (2 * Y if grow_y else Y), (2 * E if grow_e else E)
        if Y > r_max or E > r_max:
            return cur, False, (Y, E)
        cur = integral(Y, E)


def osc_cutoff(a: Amplitude, chi: Callable = gaussian_cutoff, eps=DEFAULT_EPS, order: int = 3,
               tol: float = 1e-8, conv_tol: float = 1e-6) -> OscResult:
    """Cutoff-limit route with polynomial extrapolation in ``eps**2``."""
    if abs(chi(np.array(0.0), np.array(0.0)) - 1) > 1e-14:
        raise ValueError("cutoff must satisfy chi(0, 0) = 1")
    eps = tuple(sorted(eps, reverse=True))
    if len(eps) < 2 or any(e <= 0 for e in eps):
        raise ValueError("need at least two positive eps values")

    per, ok_all, box = {}, True, (0.0, 0.0)
    for e in eps:
        def integral(Y, E, e=e):
            dy, de = _steps(Y, E, fine=False)
            y, eta = _axis(Y, dy), _axis(E, de)
            Yg, Eg = y[:, None], eta[None, :]
            return _phase_sum(chi(e * Yg, e * Eg) * a(Yg, Eg), y, eta, dy, de)

        v, ok, box = _adaptive(integral, tol)
        per[e] = v
        ok_all &= ok
    # interpolate through the smallest eps values (Richardson/Neville in eps^2)
    small = eps[::-1]
    x = np.array([e**2 for e in small])
    v = np.array([per[e] for e in small])
    deg = min(order, len(eps) - 1)
    hi = np.polyval(np.polyfit(x[: deg + 1], v[: deg + 1], deg), 0.0)
    lo = np.polyval(np.polyfit(x[:deg], v[:deg], deg - 1), 0.0)
    err = float(abs(hi - lo))
    return OscResult(complex(hi), ok_all and err <= conv_tol * (1 + abs(hi)), err, per, box)


DIFF_STEP = 0.1


def _strided_derivative(values: np.ndarray, axis: int, order: int, h: float, accuracy: int) -> np.ndarray:
    """Derivative with step ``s*h ~ DIFF_STEP`` on each of the ``s`` interleaved sub-grids.

    Decouples the difference step from the quadrature step, which shrinks
    with the box and would otherwise amplify roundoff.
    """
    s = max(1, int(round(DIFF_STEP / h)))
    if s == 1:
        return derivative(values, axis, order, h, periodic=False, accuracy=accuracy)
    out = np.empty_like(values)
    for r in range(s):
        idx = [slice(None)] * values.ndim
        idx[axis] = slice(r, None, s)
        out[tuple(idx)] = derivative(values[tuple(idx)], axis, order, s * h, periodic=False,
                                     accuracy=accuracy)
    return out


def _bracket_power_op(values: np.ndarray, axis: int, k: int, h: float, accuracy: int) -> np.ndarray:
    """``(1 - d^2)^k`` along ``axis`` by finite differences."""
    out = np.zeros_like(values)
    for i in range(k + 1):
        term = values if i == 0 else _strided_derivative(values, axis, 2 * i, h, accuracy)
        out = out + math.comb(k, i) * (-1) ** i * term
    return out


def apply_regularizer(values: np.ndarray, axis: int, order: int, h: float, dual: np.ndarray,
                      transpose: bool = True, accuracy: int = 8) -> np.ndarray:
    """Apply ``A^order(D, dual)`` along ``axis``; ``dual`` broadcasts against ``values``.

    With ``transpose`` the operator is applied as its formal transpose
    (``D -> -D``), which is what moves it off the phase ``e^{-i y eta}``.
    """
    br = np.sqrt(1.0 + dual**2)
    if order % 2 == 0:
        return br ** (-order) * _bracket_power_op(values, axis, order // 2, h, accuracy)
    P = _bracket_power_op(values, axis, (order - 1) // 2, h, accuracy)
    DP = -1j * _strided_derivative(P, axis, 1, h, accuracy)
    sign = 1.0 if transpose else -1.0
    return br ** (-order - 1) * P + sign * br ** (-order) * (dual / br) * DP


def osc_parts(a: Amplitude, ord: RegularizerOrder, tol: float = 1e-8, accuracy: int = 8,
              check: bool = True) -> OscResult:
    """Absolutely convergent form ``iint e^{-iy eta} A^{l'}(D_eta, y) A^l(D_y, eta) a``."""
    if check:
        ord.check(a)

    def integral(Y, E):
        dy, de = _steps(Y, E, fine=True)
        pad = (accuracy + ord.l + ord.lp) * DIFF_STEP
        y, eta = _axis(Y + pad, dy), _axis(E + pad, de)
        Yg, Eg = y[:, None], eta[None, :]
        b = apply_regularizer(a(Yg, Eg), 0, ord.l, dy, Eg, accuracy=accuracy)
        c = apply_regularizer(b, 1, ord.lp, de, Yg, accuracy=accuracy)
        iy = np.abs(y) <= Y + 1e-12
        ie = np.abs(eta) <= E + 1e-12
        return _phase_sum(c[np.ix_(iy, ie)], y[iy], eta[ie], dy, de)

    v, ok, box = _adaptive(integral, tol)
    return OscResult(complex(v), ok, 0.0, {}, box)


def osc_sequence(a: Amplitude, js, ord: RegularizerOrder | None = None) -> list[complex]:
    """Values for ``a_j(y, eta) = a(y, eta) phi_0(y / j)``, which tend to the value for ``a``."""
    from .lattice import plateau

    ord = RegularizerOrder(2, 2) if ord is None else ord
    out = []
    for j in js:
        aj = Amplitude(lambda y, eta, j=j: a(y, eta) * plateau(y / j), a.m, a.tau, a.N, a.M, f"{a.name}@{j}")
        out.append(osc_parts(aj, ord).value)
    return out
