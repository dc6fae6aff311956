import math

import numpy as np
import pytest

from pdo_lab.lattice import Field, Grid, bracket
from pdo_lab.spaces import HoelderSpec, hoelder_norm
from pdo_lab.symbols import (CORPUS, Symbol, SymbolMeta, ck_estimate, is_cunif, is_elliptic,
                             limit_decay_profile, make_symbol, nonsmooth_seminorm,
                             slowly_varying_profile, smooth_seminorm, unif_modulus)

G = Grid(1, np.pi, 128)


def test_meta_validation():
    with pytest.raises(ValueError):
        SymbolMeta(1.0, rho=1.5)
    with pytest.raises(ValueError):
        SymbolMeta(1.0, tau=1.0)
    with pytest.raises(ValueError):
        SymbolMeta(1.0, M=1).check_budget(2)
    with pytest.raises(ValueError):
        Symbol(None, SymbolMeta(0.0))


def test_registry():
    with pytest.raises(KeyError):
        make_symbol("nope")
    for name in CORPUS:
        a = make_symbol(name)
        v = a.sample(G, np.linspace(-4, 4, 9))
        assert v.shape == (G.N, 9, a.l, a.l)
        assert np.all(np.isfinite(v))


def test_symbol_arithmetic():
    a = make_symbol("cos_bracket")
    b = make_symbol("bracket_power", m=1.0)
    s = (a + b) * 2
    assert np.allclose(s.sample(G), 2 * (a.sample(G) + b.sample(G)))


@pytest.mark.parametrize("m", [-1.0, 0.5, 2.0])
def test_smooth_seminorm_bracket_k0(m):
    assert smooth_seminorm(make_symbol("bracket_power", m=m), G, 0).value == pytest.approx(1.0, abs=1e-12)


def test_smooth_seminorm_exp_ix():
    a = make_symbol("exp_ix", m=1.0)
    assert smooth_seminorm(a, G, 0).value == pytest.approx(1.0, abs=1e-12)
    # d_x keeps modulus 1, d_xi <xi> = xi/<xi> stays below 1
    assert smooth_seminorm(a, G, 1).value == pytest.approx(1.0, abs=1e-3)


def test_nonsmooth_seminorm_x_independent():
    a = make_symbol("bracket_power", m=1.0)
    assert nonsmooth_seminorm(a, G, 0, 1, 0.5).value == pytest.approx(1.0, abs=1e-12)


def test_nonsmooth_seminorm_matches_hoelder_oracle():
    a = make_symbol("cos_bracket", m=1.0)
    got = nonsmooth_seminorm(a, G, 0, 1, 0.5).value
    want = hoelder_norm(Field(G, 2 + np.cos(G.x)), HoelderSpec(1, 0.5))
    assert got == pytest.approx(want, rel=1e-10)


def test_ck_estimate_weights_differ():
    a = make_symbol("rough_sin", m=1.0, m_tilde=1, tau=0.5)
    out = ck_estimate(a, G, (0,), 1)
    assert out["order_m"] < math.inf and out["as_printed"] >= out["order_m"] - 1e-12


def test_elliptic_matrix_identity():
    a = make_symbol("bracket_identity", m=1.0, l=2)
    rep = is_elliptic(a, G, R=0.0, C0=1.0 - 1e-12)
    assert rep.ok and rep.margin == pytest.approx(1.0)


def test_elliptic_failure_witness():
    rep = is_elliptic(make_symbol("xi_over_bracket"), G, R=1.0, C0=0.1)
    assert not rep.ok
    x, xi = rep.witness
    assert abs(xi) < 1 and abs(x) >= 1.0 - 1e-12


def test_ladder_ellipticity():
    g = Grid(1, 8.0, 256)
    a = make_symbol("ladder").with_meta(m=0.0)
    rep = is_elliptic(a, g, R=2.0, C0=0.1)
    assert rep.ok and rep.margin > 0.5


def test_profiles():
    g = Grid(1, 8.0, 256)
    gauss = make_symbol("gauss_bracket", m=1.0)
    p = slowly_varying_profile(gauss, g, (0,), (1,))
    want = np.abs(2 * p.radii) * np.exp(-p.radii**2)
    assert np.max(np.abs(p.values - want)) < 1e-3
    assert p.tail_ok
    assert not slowly_varying_profile(make_symbol("sin_bracket"), g, (0,), (1,)).tail_ok


def test_unif_modulus_closed_form():
    a = make_symbol("cos_bracket", m=1.0)
    assert unif_modulus(a, G, (0,), 0) == 0
    for k in (1, 4, 16):
        h = k * G.h
        assert unif_modulus(a, G, (0,), k) == pytest.approx(2 * math.sin(h / 2), rel=1e-3)
    assert is_cunif(a, G)[1][0] > is_cunif(a, G)[1][-1]


def test_limit_decay():
    g = Grid(1, 8.0, 256)
    assert np.all(limit_decay_profile(make_symbol("bracket_power"), g, (0,)).values == 0)
    p = limit_decay_profile(make_symbol("decaying", m=1.0, c=0.5), g, (0,))
    assert np.max(np.abs(p.values - 0.5 * np.exp(-p.radii))) < 1e-12
