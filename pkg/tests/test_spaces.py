import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdo_lab.lattice import Field, Grid, inverse_fourier
from pdo_lab.spaces import (HoelderSpec, SpaceSpec, besov_lp_norm, bessel_norm, hoelder_norm,
                            hoelder_seminorm, interpolation_suite, lp_route_norm, product_ratio,
                            translate_diff_ratio)

G = Grid(1, np.pi, 256)


def brute_quotient(f, g, tau):
    x = g.x_axis
    d = np.abs(x[:, None] - x[None, :])
    d = np.minimum(d, 2 * g.L - d)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.abs(f[:, None] - f[None, :]) / d**tau
    q[d == 0] = 0
    return q.max()


def test_spec_validation():
    with pytest.raises(ValueError):
        HoelderSpec(0, 1.2)
    with pytest.raises(ValueError):
        SpaceSpec(0, p=0.5)
    assert SpaceSpec(1, p=4).proxy and SpaceSpec(1, p=4).p_mode == "proxy-p4"
    assert not SpaceSpec(1).proxy


def test_full_window_matches_brute_force():
    f = np.sin(G.x)
    fast = hoelder_seminorm(Field(G, f), 0.5, window=math.inf)
    assert fast == pytest.approx(brute_quotient(f, G, 0.5), rel=1e-12)


def test_rough_profile_has_finite_quotient():
    f = np.abs(np.sin(G.x)) ** 0.8
    assert brute_quotient(f, G, 0.7) < 2.0
    assert hoelder_seminorm(Field(G, f), 0.7) <= brute_quotient(f, G, 0.7) + 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(-3, 3).filter(lambda v: v == 0 or abs(v) > 1e-6))
def test_norm_axioms(seed, c):
    rng = np.random.default_rng(seed)
    f = Field(G, rng.standard_normal(3) @ np.array([np.sin(G.x), np.cos(2 * G.x), np.sin(5 * G.x)]))
    g = Field(G, rng.standard_normal(2) @ np.array([np.cos(G.x), np.sin(3 * G.x)]))
    spec = HoelderSpec(1, 0.4)
    nf, ng, nfg = hoelder_norm(f, spec), hoelder_norm(g, spec), hoelder_norm(f + g, spec)
    assert nfg <= nf + ng + 1e-12
    assert hoelder_norm(c * f, spec) == pytest.approx(abs(c) * nf, rel=1e-12, abs=1e-300)
    for sp in (SpaceSpec(0.5), SpaceSpec(0.5, p=4)):
        assert besov_lp_norm(f + g, sp) <= besov_lp_norm(f, sp) + besov_lp_norm(g, sp) + 1e-12
        assert besov_lp_norm(c * f, sp) == pytest.approx(abs(c) * besov_lp_norm(f, sp), rel=1e-12, abs=1e-300)


def test_hoelder_scaling():
    f = Field(G, np.sin(G.x))
    assert hoelder_norm(2 * f, HoelderSpec(0, 0.5)) == pytest.approx(2 * hoelder_norm(f, HoelderSpec(0, 0.5)))


def test_zero_field_norms():
    z = Field(G, np.zeros(G.N))
    assert besov_lp_norm(z, SpaceSpec(1)) == 0
    assert hoelder_norm(z, HoelderSpec(1, 0.5)) == 0


@pytest.mark.parametrize("s", [-1.5, 0.0, 0.7, 2.0])
def test_single_mode_bessel_norm(s):
    k0 = 6
    f = Field(G, np.exp(1j * k0 * G.x))
    assert bessel_norm(f, s) == pytest.approx((1 + k0**2) ** (s / 2) * math.sqrt(2 * G.L), rel=1e-8)


def test_lp_route_within_band():
    rng = np.random.default_rng(3)
    k = np.abs(G.xi_axis)
    for s in (-2, -1, 0, 1, 2, 3):
        uh = np.where(k <= 60, rng.standard_normal(G.N) + 1j * rng.standard_normal(G.N), 0)
        f = inverse_fourier(G.field(uh))
        r = lp_route_norm(f, s, 2) / bessel_norm(f, s)
        assert 0.25 <= r <= 4


def test_interpolation_closed_form():
    r = interpolation_suite(Field(G, np.sin(3 * G.x)), 2, 0.7).ratios
    assert r["ext_iii"] == pytest.approx(1.0, abs=1e-6)


def test_interpolation_constant_and_zero():
    r = interpolation_suite(Field(G, np.full(G.N, 2.0)), 2, 0.7).ratios
    assert r["ext_iii"] == 0 and r["ext_R_deriv"] == 0 and r["ext_R_hoelder"] == 0
    assert interpolation_suite(Field(G, np.zeros(G.N)), 2, 0.7).skipped


def test_translate_difference():
    const = Field(G, np.ones(G.N))
    assert translate_diff_ratio(const, 5, 0, 0.3, 0.7) == 0
    rough = Field(G, np.abs(np.sin(G.x)) ** 0.8)
    vals = [translate_diff_ratio(rough, s, 0, 0.3, 0.7) for s in range(1, G.N // 2 + 1)]
    assert max(vals) < 3.1
    with pytest.raises(ValueError):
        translate_diff_ratio(rough, 1, 0, 0.8, 0.7)


def test_product_ratio_bounded():
    f = Field(G, np.sin(G.x))
    g = Field(G, np.abs(np.sin(G.x)) ** 1.8)
    assert 0 < product_ratio(f, g, 1, 0.7) < 1
