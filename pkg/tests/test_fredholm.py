import numpy as np
import pytest

from pdo_lab._fd import derivative
from pdo_lab.calculus import symbol_matrix
from pdo_lab.fredholm import (assemble, assemble_matrix, invariance_sweep, numerical_index,
                              perturbation_probe, regularity_probe, transfer_residual, winding_index)
from pdo_lab.lattice import Grid, bessel_multiplier
from pdo_lab.spaces import SpaceSpec
from pdo_lab.symbols import make_symbol

G8 = Grid(1, 8.0, 256)


def test_identity_has_trivial_index():
    g = Grid(1, np.pi, 64)
    M = assemble_matrix(np.eye(g.size), g, SpaceSpec(0), 0.0, "id")
    r = numerical_index(M)
    assert (r.kernel_dim, r.cokernel_dim, r.index) == (0, 0, 0)
    assert not r.flagged


def test_ladder_matches_finite_differences():
    K = symbol_matrix(make_symbol("ladder"), G8)
    x = G8.x_axis
    for c, w in ((0.0, 1.0), (1.0, 1.0), (-1.0, 0.9)):
        u = np.exp(-((x - c) ** 2) / (2 * w**2))
        fd = derivative(u, 0, 1, G8.h, periodic=True, accuracy=12) + x * u
        assert np.max(np.abs(K @ u - fd)) < 1e-6


@pytest.mark.parametrize("name,expected", [("ladder", 1), ("antiladder", -1)])
def test_ladder_index(name, expected):
    a = make_symbol(name)
    r = numerical_index(assemble(a, G8, SpaceSpec(0)))
    assert r.index == expected and not r.flagged and r.gap >= 10
    assert all(res < 1e-6 for res in r.residuals)
    assert winding_index(a, R=1.0, grid=G8) == expected


def test_kernel_vector_is_gaussian():
    M = assemble(make_symbol("ladder"), G8, SpaceSpec(0))
    r = numerical_index(M)
    u = M.to_physical(r.kernel_vectors[0])
    g = np.exp(-G8.x_axis**2 / 2)
    overlap = abs(np.vdot(g, u)) / (np.linalg.norm(g) * np.linalg.norm(u))
    assert overlap > 1 - 1e-8


def test_kernel_transfer_between_specs():
    a = make_symbol("ladder")
    M0 = assemble(a, G8, SpaceSpec(0))
    u = M0.to_physical(numerical_index(M0).kernel_vectors[0])
    for s in (-1, 1):
        assert transfer_residual(u, assemble(a, G8, SpaceSpec(s))) < 1e-6


def test_winding_examples():
    assert winding_index(make_symbol("bracket_power", m=2.0), R=1.0, R_bar=5.0) == 0
    from pdo_lab.symbols import Symbol, SymbolMeta

    z = Symbol(lambda x, xi: x + 1j * xi, SymbolMeta(1.0))
    zb = Symbol(lambda x, xi: x - 1j * xi, SymbolMeta(1.0))
    assert winding_index(z, R=1.0, R_bar=3.0) == 1
    assert winding_index(zb, R=1.0, R_bar=3.0) == -1
    with pytest.raises(ValueError):
        winding_index(make_symbol("xi_over_bracket"), R=1.0, grid=G8)


def test_sweep_identity_and_order_zero():
    g = Grid(1, np.pi, 128)
    specs = [SpaceSpec(s) for s in (-1, 0, 1)]
    assert invariance_sweep(make_symbol("one"), g, specs).indices == [0, 0, 0]
    sw = invariance_sweep(make_symbol("order0_elliptic"), g, specs)
    assert sw.invariant and sw.indices == [0, 0, 0]
    assert min(r.sigma_min for r in sw.rows) > 0.1


def test_sweep_rejects_inadmissible_spec():
    with pytest.raises(ValueError):
        invariance_sweep(make_symbol("rough_direction"), Grid(1, np.pi, 64), [SpaceSpec(2)])


def test_regularity_multiplier_inverse():
    g = Grid(1, np.pi, 128)
    a = make_symbol("bracket_power", m=2.0)
    phi = g.field(np.exp(-4 * g.x**2))
    r = regularity_probe(a, g, SpaceSpec(0), SpaceSpec(2), phi)
    want = bessel_multiplier(phi, -2.0).values
    assert np.max(np.abs(r.solution - want)) < 1e-10
    assert np.isfinite(r.ratio)


def test_regularity_zero_datum_and_refinement():
    a = make_symbol("cos_bracket")
    ratios = []
    for N in (128, 256):
        g = Grid(1, np.pi, N)
        assert np.all(regularity_probe(a, g, SpaceSpec(0), SpaceSpec(2), g.field(np.zeros(N))).solution == 0)
        ratios.append(regularity_probe(a, g, SpaceSpec(0), SpaceSpec(2), g.field(np.exp(-4 * g.x**2))).ratio)
    assert ratios[1] == pytest.approx(ratios[0], rel=1e-6)


def test_perturbation_collinear_and_flat():
    g = Grid(1, np.pi, 64)
    a = make_symbol("bracket_power", m=1.0)
    rep = perturbation_probe(a, a.scaled(-1), g, [SpaceSpec(0)], [0.1, 0.5, 0.9])
    assert np.allclose(rep.sigma["s=0,exact"], [0.9, 0.5, 0.1], atol=1e-10)
    flat = perturbation_probe(a, a.scaled(0), g, [SpaceSpec(0)], [0.1, 0.5, 0.9])
    assert np.allclose(flat.sigma["s=0,exact"], 1.0, atol=1e-10)
    assert flat.radius["s=0,exact"] == np.inf


def test_proxy_specs_change_conditioning_only():
    a = make_symbol("ladder")
    rows = invariance_sweep(a, G8, [SpaceSpec(0, p=1), SpaceSpec(0, p=4)]).rows
    assert [r.index for r in rows] == [1, 1]
    assert rows[0].p_mode == "proxy-p1"
    assert set(rows[0].record()) == {"symbol_id", "s", "p_mode", "kernel_dim", "cokernel_dim", "index", "gap",
                                    "flagged"}
