"""Periodic lattice model of R^n (n = 1, 2) with its Fourier dual.

Conventions: the forward transform is ``u_hat(xi) = int e^{-i x.xi} u(x) dx``
(trapezoidal weight ``h**n``) and the inverse carries ``(2 pi)^{-n} d xi``.
Frequency arrays are stored in ascending order, not in FFT order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "Grid",
    "Field",
    "DyadicPartition",
    "bracket",
    "smooth_step",
    "plateau",
    "fourier",
    "inverse_fourier",
    "dyadic_eval",
    "bessel_multiplier",
    "fourier_multiplier",
]


def _norm2(v):
    """|v|^2 for a scalar-coordinate array or a tuple of coordinate arrays."""
    if isinstance(v, tuple):
        return sum(np.abs(np.asarray(c, dtype=float)) ** 2 for c in v)
    return np.abs(np.asarray(v, dtype=float)) ** 2


def bracket(v):
    """Japanese bracket ``(1 + |v|^2)^(1/2)``.

    ``v`` is an array of 1D coordinates or a tuple ``(v1, v2)`` of arrays.
    """
    return np.sqrt(1.0 + _norm2(v))


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, glued with ``e^{-1/t}``."""
    t = np.asarray(t, dtype=float)
    a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
    b = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return a / (a + b)


def plateau(r):
    """Radial cutoff equal to 1 on ``|r| <= 1`` and 0 on ``|r| >= 2``."""
    return 1.0 - smooth_step(np.abs(np.asarray(r, dtype=float)) - 1.0)


@dataclass(frozen=True)
class Grid:
    """Periodic truncation ``[-L, L)^n`` with ``N`` points per axis.

    Parameters
    ----------
    n : int
        Spatial dimension, 1 or 2.
    L : float
        Half-width of the box.
    N : int
        Points per axis; a power of two, at least 16.
    """

    n: int
    L: float
    N: int

    def __post_init__(self) -> None:
        if self.n not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.n}")
        if self.N < 16 or self.N & (self.N - 1):
            raise ValueError(f"N must be a power of two >= 16, got {self.N}")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def dxi(self) -> float:
        return np.pi / self.L

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def size(self) -> int:
        return self.N**self.n

    @cached_property
    def x_axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.N)

    @cached_property
    def xi_axis(self) -> np.ndarray:
        return self.dxi * np.arange(-self.N // 2, self.N // 2)

    @cached_property
    def x(self):
        """Node coordinates: an array for n = 1, a tuple of meshes for n = 2."""
        if self.n == 1:
            return self.x_axis
        return tuple(np.meshgrid(self.x_axis, self.x_axis, indexing="ij"))

    @cached_property
    def xi(self):
        if self.n == 1:
            return self.xi_axis
        return tuple(np.meshgrid(self.xi_axis, self.xi_axis, indexing="ij"))

    @cached_property
    def abs_x(self) -> np.ndarray:
        return np.sqrt(_norm2(self.x))

    @cached_property
    def abs_xi(self) -> np.ndarray:
        return np.sqrt(_norm2(self.xi))

    @cached_property
    def _phase(self) -> np.ndarray:
        # e^{i L xi_k} = (-1)^k on the shifted lattice
        s = np.where(np.arange(-self.N // 2, self.N // 2) % 2 == 0, 1.0, -1.0)
        if self.n == 1:
            return s
        return np.multiply.outer(s, s)

    def field(self, values) -> "Field":
        return Field(self, np.asarray(values))

    def sample(self, f) -> "Field":
        """Sample a callable ``f(x)`` on the nodes."""
        return Field(self, np.asarray(f(self.x)))

    def plancherel_gap(self, u: "Field") -> float:
        """Relative mismatch between the x-side and xi-side L^2 energies."""
        lhs = self.h**self.n * np.sum(np.abs(u.values) ** 2)
        uh = fourier(u).values
        rhs = (self.dxi / (2 * np.pi)) ** self.n * np.sum(np.abs(uh) ** 2)
        return abs(lhs - rhs) / max(lhs, np.finfo(float).tiny)


@dataclass(frozen=True)
class Field:
    """Samples of a (possibly C^l-valued) function on a grid.

    ``values`` has shape ``grid.shape`` for scalar fields and
    ``grid.shape + (l,)`` for vector fields.
    """

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values)
        g = self.grid
        if v.shape[: g.n] != g.shape or v.ndim not in (g.n, g.n + 1):
            raise ValueError(f"field shape {v.shape} does not match grid {g.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite entries")
        object.__setattr__(self, "values", v)

    @property
    def l(self) -> int:
        return 1 if self.values.ndim == self.grid.n else self.values.shape[-1]

    def __add__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        return Field(self.grid, self.values - other.values)

    def __mul__(self, c) -> "Field":
        return Field(self.grid, self.values * c)

    __rmul__ = __mul__

    def l2(self) -> float:
        """Discrete L^2 norm with the trapezoidal weight."""
        return float(np.sqrt(self.grid.h**self.grid.n * np.sum(np.abs(self.values) ** 2)))


def _axes(grid: Grid) -> tuple[int, ...]:
    return tuple(range(grid.n))


def fourier(u: Field) -> Field:
    """Discrete ``u_hat`` on the ascending frequency lattice."""
    g = u.grid
    ax = _axes(g)
    uh = np.fft.fftshift(np.fft.fftn(u.values, axes=ax), axes=ax)
    ph = g._phase if u.l == 1 and u.values.ndim == g.n else g._phase[..., None]
    return Field(g, g.h**g.n * ph * uh)


def inverse_fourier(uh: Field) -> Field:
    """Inverse of :func:`fourier`, with the ``(2 pi)^{-n}`` measure."""
    g = uh.grid
    ax = _axes(g)
    ph = g._phase if uh.values.ndim == g.n else g._phase[..., None]
    v = np.fft.ifftn(np.fft.ifftshift(ph * uh.values, axes=ax), axes=ax) / g.h**g.n
    return Field(g, v)


def fourier_multiplier(u: Field, m) -> Field:
    """Apply the multiplier ``m(xi)`` (array on the xi lattice, or callable)."""
    g = u.grid
    w = np.asarray(m(g.xi) if callable(m) else m)
    uh = fourier(u).values
    if uh.ndim > g.n:
        w = w[..., None]
    return inverse_fourier(Field(g, w * uh))


def bessel_multiplier(u: Field, s: float) -> Field:
    """``<D>^s u``."""
    if s == 0:
        return u
    return fourier_multiplier(u, bracket(u.grid.xi) ** s)


@dataclass(frozen=True)
class DyadicPartition:
    """Littlewood-Paley family ``phi_j`` built from :func:`plateau`.

    ``phi_0 = plateau`` and ``phi_j(xi) = phi_0(2^-j xi) - phi_0(2^(1-j) xi)``
    for ``j >= 1``, so partial sums telescope to ``phi_0(2^-J xi)``.
    """

    J_max: int

    @classmethod
    def for_grid(cls, grid: Grid) -> "DyadicPartition":
        """Highest block whose plateau ``|xi| <= 2^J`` fits on the lattice axis."""
        xi_max = grid.dxi * (grid.N // 2 - 1)
        return cls(int(np.floor(np.log2(xi_max))))

    @staticmethod
    def phi0(xi) -> np.ndarray:
        return plateau(np.sqrt(_norm2(xi)))

    def phi(self, j: int, xi) -> np.ndarray:
        return dyadic_eval(j, xi)

    def blocks(self, xi) -> list[np.ndarray]:
        return [dyadic_eval(j, xi) for j in range(self.J_max + 1)]

    def completeness_defect(self, xi) -> float:
        """max |sum_{j <= J_max} phi_j - 1| over ``|xi| <= 2^J_max``."""
        r = np.sqrt(_norm2(xi))
        total = sum(self.blocks(xi))
        inside = r <= 2.0**self.J_max
        return float(np.max(np.abs(total - 1.0)[inside])) if np.any(inside) else 0.0


def dyadic_eval(j: int, xi) -> np.ndarray:
    """Weight ``phi_j(xi)`` of the dyadic partition."""
    if j < 0:
        raise ValueError("block index must be non-negative")
    r = np.sqrt(_norm2(xi))
    if j == 0:
        return plateau(r)
    return plateau(r / 2.0**j) - plateau(r / 2.0 ** (j - 1))
