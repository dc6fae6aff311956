import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdo_lab.calculus import (MollifierFamily, build_parametrix, compose_exact_periodic, compose_expansion,
                              compose_remainder, localize_at_infinity, mollify, operator_error, quantize,
                              quantize_reference, symbol_matrix, symbol_smoothing)
from pdo_lab.lattice import Grid, bessel_multiplier, inverse_fourier
from pdo_lab.symbols import Symbol, SymbolMeta, make_symbol

G = Grid(1, np.pi, 64)


def _random(g, seed, band=None):
    rng = np.random.default_rng(seed)
    if band is None:
        return g.field(rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape))
    k = np.abs(g.xi_axis)
    uh = np.where((k >= band[0]) & (k <= band[1]), rng.standard_normal(g.N) + 1j * rng.standard_normal(g.N), 0)
    return inverse_fourier(g.field(uh))


@pytest.mark.parametrize("name", ["cos_bracket", "exp_ix", "order0_elliptic", "rough_sin", "matrix_cos"])
def test_fast_quantization_matches_reference(name):
    a = make_symbol(name)
    u = _random(G, 1)
    if a.l > 1:
        u = G.field(np.stack([u.values, 2 * u.values], -1))
    fast, ref = quantize(a, u), quantize_reference(a, u)
    assert (fast - ref).l2() <= 1e-10 * ref.l2()


def test_quantization_anchors():
    u = _random(G, 2)
    assert (quantize(make_symbol("one"), u) - u).l2() <= 1e-12 * u.l2()
    s = G.field(np.sin(G.x))
    assert (quantize(make_symbol("derivative"), s) - G.field(np.cos(G.x))).l2() <= 1e-8
    b = make_symbol("bracket_power", m=1.5)
    assert (quantize(b, u) - bessel_multiplier(u, 1.5)).l2() <= 1e-10 * u.l2()


def test_symbol_matrix_agrees_with_quantize():
    a = make_symbol("cos_bracket")
    u = _random(G, 3)
    K = symbol_matrix(a, G)
    assert np.allclose(K @ u.values, quantize(a, u).values, atol=1e-10)
    with pytest.raises(ValueError):
        symbol_matrix(a, Grid(2, 1.0, 128))


def test_mollifier_mass():
    fam = MollifierFamily()
    g = Grid(1, np.pi, 2048)
    for e in fam.eps:
        assert fam.mass_defect(g, e) < 1e-10
    assert MollifierFamily("bump").mass_defect(g, 0.25) < 1e-6
    with pytest.raises(ValueError):
        MollifierFamily("box")


def test_mollify_x_independent_is_identity():
    a = make_symbol("bracket_power", m=1.0)
    g = Grid(1, np.pi, 1024)
    b = mollify(a, MollifierFamily(), 0.1)
    assert np.max(np.abs(b.sample(g) - a.sample(g)) / np.abs(a.sample(g))) < 1e-12


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["cos_bracket", "rough_sin", "weierstrass", "matrix_cos", "sin_bracket"]),
       st.floats(0.1, 0.9))
def test_smoothing_exact(name, gamma):
    a = make_symbol(name)
    assert symbol_smoothing(a, gamma).exactness_defect(G, np.linspace(-40, 40, 81)) <= 1e-12


def test_smoothing_gamma_window():
    with pytest.raises(ValueError):
        symbol_smoothing(make_symbol("cos_bracket"), 1.0)


def test_leibniz_exact_for_first_order():
    a1, a2 = make_symbol("derivative"), make_symbol("multiplier")
    u = _random(G, 4, (0, 20))
    err = operator_error(lambda w: quantize(a1, quantize(a2, w)), compose_expansion(a1, a2, 2), u)
    assert err < 1e-8


def test_expansion_plus_remainder_is_exact():
    a1, a2 = make_symbol("bracket_power", m=1.0), make_symbol("cos_bracket", m=0.0)
    X = compose_exact_periodic(a1, a2).sample(G)
    for k in (1, 2):
        S = compose_expansion(a1, a2, k).sample(G) + compose_remainder(a1, a2, k).sample(G)
        assert np.max(np.abs(S - X)) < 1e-8


def test_exact_periodic_composition_operator():
    a1, a2 = make_symbol("bracket_power", m=1.0), make_symbol("cos_bracket", m=0.0)
    u = _random(G, 5, (0, 15))
    assert operator_error(lambda w: quantize(a1, quantize(a2, w)), compose_exact_periodic(a1, a2), u) < 1e-10


def test_composition_validation():
    with pytest.raises(ValueError):
        compose_expansion(make_symbol("one"), make_symbol("one"), 0)
    with pytest.raises(ValueError):
        compose_expansion(make_symbol("one"), make_symbol("rough_sin"), 3)


def test_parametrix_inverts_multiplier():
    g = Grid(1, np.pi, 128)
    a = make_symbol("bracket_power", m=1.0)
    Q = build_parametrix(a, R=2.0)
    u = _random(g, 6, (10, 40))
    assert Q.residual(a, u) < 1e-12


def test_parametrix_rejects_singular():
    bad = Symbol(lambda x, xi: np.cos(x) + 0 * xi, SymbolMeta(0.0), "cos")
    with pytest.raises(ValueError):
        build_parametrix(bad, R=1.0).b.sample(G)


def test_localization():
    g = Grid(1, 16.0, 256)
    a = make_symbol("bracket_power", m=1.0)
    assert np.max(np.abs(localize_at_infinity(a, 2.0).sample(g) - a.sample(g))) < 1e-12
    d = make_symbol("decaying", m=1.0)
    far = g.abs_x >= 4.0
    loc = localize_at_infinity(d, 2.0).sample(g)
    assert np.array_equal(loc[far], d.sample(g)[far])
    dist = [np.max(np.abs(localize_at_infinity(d, r).sample(g) - d.limit(g.xi)[None])) for r in (2, 4, 8)]
    assert dist[0] > dist[1] > dist[2]
    with pytest.raises(ValueError):
        localize_at_infinity(make_symbol("cos_bracket"), 2.0)
