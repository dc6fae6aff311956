"""Seeded random fields for the inequality suites.

Every case draws from its own Philox stream keyed by ``(seed, scenario, index)``,
so a case's sample does not depend on which other cases run or in what order.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from ..lattice import Field, Grid

__all__ = ["case_rng", "CorpusCase", "field_of", "trig_polynomial", "rough_profile", "make_corpus"]


def case_rng(seed: int, scenario: str, index: int) -> np.random.Generator:
    key = (zlib.crc32(scenario.encode()), int(index))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=key)))


@dataclass(frozen=True)
class CorpusCase:
    case_id: str
    kind: str
    params: dict


def trig_polynomial(x, coeffs: np.ndarray) -> np.ndarray:
    """``sum_k a_k cos(kx) + b_k sin(kx)`` with ``coeffs`` shaped ``(deg + 1, 2)``."""
    k = np.arange(coeffs.shape[0])
    xx = np.asarray(x)[..., None]
    return np.sum(coeffs[:, 0] * np.cos(k * xx) + coeffs[:, 1] * np.sin(k * xx), axis=-1)


def rough_profile(x, center: float, power: float, amp: float, coeffs: np.ndarray) -> np.ndarray:
    """``amp |sin(x - center)|^power`` plus a low-degree trig polynomial."""
    return amp * np.abs(np.sin(np.asarray(x) - center)) ** power + trig_polynomial(x, coeffs)


def _draw(rng: np.random.Generator, kind: str, m_tilde: int, tau: float) -> dict:
    if kind == "trig":
        deg = int(rng.integers(1, 9))
        return {"coeffs": rng.standard_normal((deg + 1, 2)) / (1 + np.arange(deg + 1))[:, None]}
    power = m_tilde + tau + float(rng.uniform(0.02, 0.25))
    return {
        "center": float(rng.uniform(-np.pi, np.pi)),
        "power": power,
        "amp": float(rng.uniform(0.5, 2.0)),
        "coeffs": 0.3 * rng.standard_normal((3, 2)),
    }


def field_of(case: CorpusCase, grid: Grid, which: str = "f") -> Field:
    p = case.params[which]
    if "center" in p:
        vals = rough_profile(grid.x, p["center"], p["power"], p["amp"], p["coeffs"])
    else:
        vals = trig_polynomial(grid.x, p["coeffs"])
    return Field(grid, vals)


def make_corpus(seed: int, count: int = 100, m_tilde: int = 2, tau: float = 0.7,
                scenario: str = "interpolation-suite") -> list[CorpusCase]:
    """Half trig polynomials of degree at most 8, half rough ``C^{m_tilde, tau}`` profiles."""
    out = []
    for i in range(count):
        rng = case_rng(seed, scenario, i)
        kind = "trig" if i % 2 == 0 else "rough"
        params = {
            "f": _draw(rng, kind, m_tilde, tau),
            "g": _draw(rng, "rough" if kind == "trig" else "trig", m_tilde, tau),
            "shift": int(rng.integers(1, 128)),
        }
        out.append(CorpusCase(f"{kind}-{i:03d}", kind, params))
    return out
