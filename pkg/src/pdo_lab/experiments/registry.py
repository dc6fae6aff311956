"""Scenario registry: tolerances, calibration constants and case evaluators.

``TOLERANCES`` is the single source of truth for every asserted bound; the
acceptance tests import it rather than restating numbers.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .. import calculus as C
from .. import fredholm as F
from .. import oscint as O
from ..lattice import DyadicPartition, Field, Grid, bessel_multiplier, inverse_fourier
from ..spaces import (SpaceSpec, bessel_norm, interpolation_suite, product_ratio,
                      translate_diff_ratio)
from ..symbols import make_symbol, nonsmooth_seminorm, smooth_seminorm
from .corpus import case_rng, field_of, make_corpus

__all__ = ["TOLERANCES", "CALIBRATION", "Case", "Outcome", "Scenario", "REGISTRY", "get", "list_scenarios"]

TOLERANCES: dict[str, dict[str, float]] = {
    "partition-check": {"defect": 1e-10, "runtime": 1.0},
    "quantization-anchors": {"identity": 1e-12, "derivative": 1e-8, "bessel_roundtrip": 1e-10, "runtime": 5.0},
    "oscint-consistency": {"route_gap": 1e-5, "g_eta": 1e-6, "order_gap": 1e-6, "runtime": 30.0},
    "mollify-convergence": {"final_ratio": 0.05, "slope_min": 0.2, "runtime": 60.0},
    "smoothing-split": {"exactness": 1e-12, "decay_band": 0.15, "runtime": 60.0},
    "composition-order": {"leibniz": 1e-8, "floor": 1e-10, "runtime": 60.0},
    "parametrix-residual": {"residual": 0.1, "slack": 1e-14, "runtime": 30.0},
    "boundedness-calibration": {"constant": 2.5, "runtime": 60.0},
    "index-invariance": {"gap": 10.0, "winding_deviation": 0.1, "kernel_residual": 1e-6, "runtime": 120.0},
    "perturbation-openness": {"radius_factor": 4.0, "gap": 10.0, "runtime": 60.0},
    "interpolation-suite": {"runtime": 120.0},
}

# 1.5x the largest ratio over 400 calibration cases drawn with seed 1234, rounded up;
# scenario runs default to seed 0, so the asserted corpus is held out
CALIBRATION_SEED = 1234
CALIBRATION: dict[str, float] = {
    "global": 1.5,
    "ext_i": 2.0,
    "ext_ii": 2.6,
    "ext_iii": 1.7,
    "ext_R_deriv": 2.0,
    "ext_R_hoelder": 1.6,
    "product": 0.93,
    "translate": 3.0,
}

MOLLIFY_XI = np.linspace(-8.0, 8.0, 65)


@dataclass(frozen=True)
class Case:
    case_id: str
    params: dict = field(default_factory=dict)


@dataclass
class Outcome:
    """Measured quantities with the tolerance each one is held to (``None`` if only reported)."""

    measured: dict
    checks: dict  # quantity -> bool
    tolerances: dict
    flagged: bool = False
    note: str = ""

    @property
    def verdict(self) -> str:
        if not all(self.checks.values()):
            return "fail"
        return "flagged" if self.flagged else "pass"


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    anchors: tuple[str, ...]
    cases: Callable[[dict, int], list[Case]]
    evaluate: Callable[[Case, dict, int], Outcome]
    defaults: Mapping = field(default_factory=dict)

    @property
    def tolerances(self) -> dict[str, float]:
        return TOLERANCES[self.name]


def _grid(p: dict, default=(1, math.pi, 256)) -> Grid:
    n, L, N = p.get("grid", default)
    return Grid(int(n), float(L), int(N))


def _band(grid: Grid, lo: float, hi: float, rng: np.random.Generator) -> Field:
    k = np.abs(grid.xi_axis)
    sel = (k >= lo) & (k <= hi)
    uh = np.where(sel, rng.standard_normal(grid.N) + 1j * rng.standard_normal(grid.N), 0)
    return inverse_fourier(grid.field(uh))


def _single(case_id: str, **params) -> Callable[[dict, int], list[Case]]:
    return lambda cfg, seed: [Case(case_id, {**params, **cfg})]


# -- partition-check ----------------------------------------------------------------


def _partition(case: Case, tol: dict, seed: int) -> Outcome:
    g = _grid(case.params, (1, 64.0, 2048))
    part = DyadicPartition.for_grid(g)
    defect = part.completeness_defect(g.xi)
    return Outcome({"defect": defect, "J_max": part.J_max}, {"defect": defect <= tol["defect"]},
                   {"defect": tol["defect"]})


# -- quantization-anchors -------------------------------------------------------------


def _quant_anchors(case: Case, tol: dict, seed: int) -> Outcome:
    g = _grid(case.params, (1, math.pi, 256))
    rng = case_rng(seed, "quantization-anchors", 0)
    u = g.field(rng.standard_normal(g.shape))
    ident = (C.quantize(make_symbol("one"), u) - u).l2() / u.l2()
    s_ = g.field(np.sin(g.x))
    deriv = (C.quantize(make_symbol("derivative"), s_) - g.field(np.cos(g.x))).l2()
    rt = max(
        (bessel_multiplier(bessel_multiplier(u, s), -s) - u).l2() / u.l2() for s in (-2, -1, 0.5, 1, 3)
    )
    m = {"identity": ident, "derivative": deriv, "bessel_roundtrip": rt}
    return Outcome(m, {k: v <= tol[k] for k, v in m.items()}, {k: tol[k] for k in m})


# -- oscint-consistency -----------------------------------------------------------------

GAUSS_PAIR = O.Amplitude(lambda y, e: np.exp(-y**2 - e**2), m=-10, tau=-10, name="gauss-pair")
G_ETA = O.Amplitude(lambda y, e: np.exp(-e**2) / (1 + 0.5 * np.sin(e) ** 2), m=-10, tau=0, name="g(eta)")


def _osc_cases(cfg, seed):
    return [Case("gauss-pair-routes"), Case("g-eta"), Case("order-invariance")]


def _oscint(case: Case, tol: dict, seed: int) -> Outcome:
    if case.case_id == "gauss-pair-routes":
        cut = O.osc_cutoff(GAUSS_PAIR)
        parts = O.osc_parts(GAUSS_PAIR, O.RegularizerOrder(2, 2))
        gap = abs(cut.value - parts.value) / abs(parts.value)
        return Outcome({"route_gap": gap, "cutoff": cut.value.real, "parts": parts.value.real},
                       {"route_gap": gap <= tol["route_gap"]}, {"route_gap": tol["route_gap"]},
                       flagged=not (cut.converged and parts.converged))
    if case.case_id == "g-eta":
        cut = O.osc_cutoff(G_ETA)
        parts = O.osc_parts(G_ETA, O.RegularizerOrder(2, 2))
        err = max(abs(cut.value - 1), abs(parts.value - 1))
        return Outcome({"g_eta": err}, {"g_eta": err <= tol["g_eta"]}, {"g_eta": tol["g_eta"]},
                       flagged=not cut.converged)
    v2 = O.osc_parts(GAUSS_PAIR, O.RegularizerOrder(2, 2)).value
    v4 = O.osc_parts(GAUSS_PAIR, O.RegularizerOrder(4, 4)).value
    gap = abs(v2 - v4)
    return Outcome({"order_gap": gap}, {"order_gap": gap <= tol["order_gap"]}, {"order_gap": tol["order_gap"]})


# -- mollify-convergence -------------------------------------------------------------------


def _moll_cases(cfg, seed):
    return [
        Case("weierstrass", {"symbol": "weierstrass", "kw": {"m": 1.0, "tau": 0.7, "terms": 10}, **cfg}),
        Case("rough_sin", {"symbol": "rough_sin", "kw": {"m": 1.0, "tau": 0.7}, **cfg}),
    ]


def _mollify(case: Case, tol: dict, seed: int) -> Outcome:
    p = case.params
    g = _grid(p, (1, math.pi, 2048))
    a = make_symbol(p["symbol"], **p["kw"])
    r = C.mollify_convergence(a, g, C.MollifierFamily(), k=2, t=0.3, xi=MOLLIFY_XI)
    ratio = float(r.values[-1] / r.values[0])
    m = {"initial": float(r.values[0]), "final": float(r.values[-1]), "final_ratio": ratio,
         "slope": r.slope, "strictly_decreasing": int(r.monotone)}
    checks = {"strictly_decreasing": r.monotone, "final_ratio": ratio <= tol["final_ratio"],
              "slope": r.slope >= tol["slope_min"]}
    return Outcome(m, checks, {"final_ratio": tol["final_ratio"], "slope": tol["slope_min"]})


# -- smoothing-split ------------------------------------------------------------------------

SMOOTHING_CORPUS = {
    "bracket_power": {"m": 1.0}, "cos_bracket": {}, "gauss_bracket": {}, "sin_bracket": {},
    "rough_sin": {"m": 1.0}, "weierstrass": {"m": 1.0, "terms": 6}, "cos_family": {"m": 1.0},
    "multiplier": {}, "order0_elliptic": {}, "rough_direction": {}, "matrix_cos": {},
}


def _smooth_cases(cfg, seed):
    out = [Case(f"exact-{nm}", {"symbol": nm, "kw": kw}) for nm, kw in SMOOTHING_CORPUS.items()]
    out += [Case(f"decay-s{s:g}", {"s": s}) for s in (0.7, 1.5)]
    return out


def predicted_decay(a, gamma: float) -> float:
    mt = a.meta
    tau = mt.tau or 0.0
    eps_tilde = 0.05 * (gamma - mt.delta) * tau
    return mt.m - (gamma - mt.delta) * ((mt.m_tilde or 0) + tau) + eps_tilde


def _smoothing(case: Case, tol: dict, seed: int) -> Outcome:
    gamma = 0.5
    p = case.params
    if "symbol" in p:
        g = Grid(1, math.pi, 256)
        a = make_symbol(p["symbol"], **p["kw"])
        xi = np.linspace(-64, 64, 257)
        d = C.symbol_smoothing(a, gamma).exactness_defect(g, xi)
        return Outcome({"exactness": d}, {"exactness": d <= tol["exactness"]}, {"exactness": tol["exactness"]})
    g = Grid(1, math.pi, 2048)
    a = make_symbol("cos_family", m=1.0, s=p["s"])
    sp = C.symbol_smoothing(a, gamma)
    fit = C.decay_exponent(sp.flat, g, 8, 1024)
    pred = predicted_decay(a, gamma)
    return Outcome({"fit": fit, "predicted": pred, "deviation": abs(fit - pred)},
                   {"deviation": abs(fit - pred) <= tol["decay_band"]}, {"deviation": tol["decay_band"]})


# -- composition-order ---------------------------------------------------------------------

PAIRS = {"xi-v": ("derivative", {}, "multiplier", {}),
         "bracket-cos": ("bracket_power", {"m": 1.0}, "cos_bracket", {"m": 0.0})}


def _comp_cases(cfg, seed):
    return [Case(k, {"pair": k}) for k in PAIRS]


def composition_errors(pair: str, seed: int, ks=(1, 2, 3)) -> list[float]:
    n1, k1, n2, k2 = PAIRS[pair]
    a1, a2 = make_symbol(n1, **k1), make_symbol(n2, **k2)
    g = Grid(1, math.pi, 128)
    u = _band(g, 0, 20, case_rng(seed, "composition-order", 0))

    def exact(w):
        return C.quantize(a1, C.quantize(a2, w))

    return [C.operator_error(exact, C.compose_expansion(a1, a2, k), u) for k in ks]


def strictly_decreasing(vals, floor: float) -> bool:
    """Strict decrease, except that values at or below ``floor`` count as settled."""
    return all(b < a or (a <= floor and b <= floor) for a, b in zip(vals, vals[1:]))


def _composition(case: Case, tol: dict, seed: int) -> Outcome:
    errs = composition_errors(case.case_id, seed)
    m = {f"err_k{k}": e for k, e in zip((1, 2, 3), errs)}
    checks = {"decreasing": strictly_decreasing(errs, tol["floor"])}
    tols = {"floor": tol["floor"]}
    if case.case_id == "xi-v":
        checks["leibniz"] = errs[1] <= tol["leibniz"]
        tols["leibniz"] = tol["leibniz"]
    return Outcome(m, checks, tols)


# -- parametrix-residual -------------------------------------------------------------------


def parametrix_residuals(seed: int, floors=(8, 16, 32)) -> list[float]:
    g = Grid(1, math.pi, 256)
    a = make_symbol("cos_bracket", m=1.0)
    Q = C.build_parametrix(a, R=6.0)
    out = []
    for i, lo in enumerate(floors):
        u = _band(g, lo, 2 * lo, case_rng(seed, "parametrix-residual", i))
        out.append(Q.residual(a, u))
    return out


def _parametrix(case: Case, tol: dict, seed: int) -> Outcome:
    r = parametrix_residuals(seed)
    mono = all(b <= a + tol["slack"] for a, b in zip(r, r[1:]))
    return Outcome({"res_8": r[0], "res_16": r[1], "res_32": r[2]},
                   {"residual": r[0] <= tol["residual"], "monotone": mono},
                   {"residual": tol["residual"], "slack": tol["slack"]})


# -- boundedness-calibration ----------------------------------------------------------------

BOUNDED_CORPUS = {
    "bracket_power": {"m": 1.0}, "cos_bracket": {}, "gauss_bracket": {}, "sin_bracket": {},
    "order0_elliptic": {}, "multiplier": {}, "exp_ix": {}, "xi_over_bracket": {},
    "rough_sin": {"m": 1.0}, "weierstrass": {"m": 0.0, "terms": 6}, "rough_direction": {},
    "cos_family": {"m": 1.0, "s": 1.5, "terms": 5},
}


def _bound_cases(cfg, seed):
    return [Case(nm, {"symbol": nm, "kw": kw}) for nm, kw in BOUNDED_CORPUS.items()]


def _boundedness(case: Case, tol: dict, seed: int) -> Outcome:
    g = Grid(1, math.pi, 256)
    a = make_symbol(case.params["symbol"], **case.params["kw"])
    mt = a.meta
    if mt.smooth:
        semi, ss = smooth_seminorm(a, g, 2).value, (-2, -1, 0, 1, 2, 3)
    else:
        semi = nonsmooth_seminorm(a, g, 2, mt.m_tilde, mt.tau).value
        reg = mt.m_tilde + mt.tau
        ss = (-0.5 * reg, 0.0, 0.5 * reg)
    rng = case_rng(seed, "boundedness-calibration", sorted(BOUNDED_CORPUS).index(case.case_id))
    worst = 0.0
    for s in ss:
        for _ in range(3):
            u = _band(g, 0, 32, rng)
            worst = max(worst, bessel_norm(C.quantize(a, u), s) / (semi * bessel_norm(u, s + mt.m)))
    return Outcome({"ratio": worst, "seminorm": semi}, {"ratio": worst <= tol["constant"]},
                   {"ratio": tol["constant"]})


# -- index-invariance -------------------------------------------------------------------------

INDEX_SPECS = (SpaceSpec(-1), SpaceSpec(0), SpaceSpec(1), SpaceSpec(0, p=1), SpaceSpec(0, p=4))
EXPECTED_INDEX = {"ladder": 1, "antiladder": -1}


def _index_cases(cfg, seed):
    Ns = cfg.get("N_values", (256, 512))
    return [Case(f"{nm}-N{N}", {"symbol": nm, "N": N}) for nm in EXPECTED_INDEX for N in Ns]


def _index(case: Case, tol: dict, seed: int) -> Outcome:
    nm, N = case.params["symbol"], case.params["N"]
    g = Grid(1, 8.0, N)
    a = make_symbol(nm)
    sw = F.invariance_sweep(a, g, INDEX_SPECS, gap_min=tol["gap"])
    wind = F.winding_index(a, R=1.0, grid=g)
    rows = sw.rows
    m = {"index": rows[1].index, "kernel": rows[1].kernel_dim, "cokernel": rows[1].cokernel_dim,
         "min_gap": min(r.gap for r in rows), "winding": wind}
    for r, sp in zip(rows, INDEX_SPECS):
        m[f"index[s={sp.s:g},{sp.p_mode}]"] = r.index
    res = [x for r in rows for x in r.residuals]
    m["max_kernel_residual"] = max(res) if res else 0.0
    want = EXPECTED_INDEX[nm]
    checks = {
        "index": all(r.index == want for r in rows),
        "gap": m["min_gap"] >= tol["gap"],
        "winding": wind == want,
        "invariant": sw.invariant,
        "kernel_residual": m["max_kernel_residual"] < tol["kernel_residual"],
    }
    return Outcome(m, checks, {"gap": tol["gap"], "kernel_residual": tol["kernel_residual"]},
                   flagged=any(r.flagged for r in rows))


# -- perturbation-openness ---------------------------------------------------------------------


def _perturbation(case: Case, tol: dict, seed: int) -> Outcome:
    g = Grid(1, math.pi, 256)
    a = make_symbol("cos_bracket", m=1.0)
    h = make_symbol("rough_direction")
    specs = (SpaceSpec(0), SpaceSpec(1))
    rep = F.perturbation_probe(a, h, g, specs, np.linspace(0.1, 2.5, 25))
    idx = [F.numerical_index(F.assemble(a, g, sp), gap_min=tol["gap"]) for sp in specs]
    m = {f"radius[{k}]": v for k, v in rep.radius.items()}
    m["spread"] = rep.spread
    m["min_gap"] = min(r.gap for r in idx)
    trivial = all(r.kernel_dim == 0 and r.cokernel_dim == 0 and r.sigma_min > 0 for r in idx)
    return Outcome(m, {"spread": rep.spread <= tol["radius_factor"], "trivial_kernel": trivial,
                       "gap": m["min_gap"] >= tol["gap"]},
                   {"spread": tol["radius_factor"], "gap": tol["gap"]})


# -- interpolation-suite ---------------------------------------------------------------------------

TRANSLATE_SHIFTS = (1, 2, 4, 8, 16, 32, 64, 128)


def _interp_cases(cfg, seed):
    count = int(cfg.get("count", 100))
    return [Case(c.case_id, {"corpus": c}) for c in make_corpus(seed, count)]


def inequality_ratios(corpus_case, grid: Grid) -> dict[str, float]:
    f = field_of(corpus_case, grid)
    h = field_of(corpus_case, grid, "g")
    r = dict(interpolation_suite(f, 2, 0.7).ratios)
    r["product"] = product_ratio(f, h, 2, 0.7)
    shifts = TRANSLATE_SHIFTS + (corpus_case.params["shift"],)
    r["translate"] = max(translate_diff_ratio(f, s, 2, 0.3, 0.7) for s in shifts)
    return r


def _interpolation(case: Case, tol: dict, seed: int) -> Outcome:
    r = inequality_ratios(case.params["corpus"], Grid(1, math.pi, 256))
    return Outcome(r, {k: v <= CALIBRATION[k] for k, v in r.items()}, {k: CALIBRATION[k] for k in r})


REGISTRY: dict[str, Scenario] = {s.name: s for s in [
    Scenario("partition-check", "dyadic blocks sum to one on the lattice",
             ("dyadic partition of unity",), _single("default"), _partition),
    Scenario("quantization-anchors", "identity, derivative and Bessel round-trip anchors",
             ("quantization of a symbol",), _single("default"), _quant_anchors),
    Scenario("oscint-consistency", "cutoff and integration-by-parts routes agree",
             ("oscillatory integral definition", "regularizing operators A^l"), _osc_cases, _oscint),
    Scenario("mollify-convergence", "mollified rough symbols converge in weaker Hoelder seminorms",
             ("mollifier convergence lemma",), _moll_cases, _mollify),
    Scenario("smoothing-split", "symbol smoothing is exact and the remainder gains decay",
             ("symbol smoothing lemma",), _smooth_cases, _smoothing),
    Scenario("composition-order", "asymptotic composition errors decrease with expansion length",
             ("composition formula with remainder",), _comp_cases, _composition),
    Scenario("parametrix-residual", "parametrix residual shrinks on high-frequency data",
             ("parametrix construction for elliptic symbols",), _single("cos-bracket"), _parametrix),
    Scenario("boundedness-calibration", "operator norm bounded by a frozen multiple of the seminorm",
             ("boundedness theorem on Bessel potential spaces",), _bound_cases, _boundedness),
    Scenario("index-invariance", "Fredholm index constant across spaces, matched by winding",
             ("index invariance theorem", "Fredholm index definition"), _index_cases, _index),
    Scenario("perturbation-openness", "invertibility radius uniform across spaces",
             ("spectral invariance", "openness of invertibility"), _single("rough-direction"), _perturbation),
    Scenario("interpolation-suite", "Hoelder interpolation, translation and product inequalities",
             ("interpolation lemmas", "translate difference lemma", "Leibniz product estimate"),
             _interp_cases, _interpolation),
]}


def get(name: str) -> Scenario:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(sorted(REGISTRY))}") from None


def list_scenarios() -> list[Scenario]:
    return [REGISTRY[k] for k in sorted(REGISTRY)]
