"""Spin magnetization sampling and the reduced (normalized) density."""

import numpy as np
import pytest

from conftest import make_system

from spincur.errors import ClosedShellInput
from spincur.field import (FieldEvaluator, GaussianModelDensity,
                           ReducedSpinDensity, build_reduced)
from spincur.grid import build_grid
from spincur.ingest import SpinResolvedDensity


def test_h_doublet_reduced_density(h_doublet):
    sys_, dens = h_doublet
    grid = build_grid(sys_, quality="default")
    red = build_reduced(sys_, dens, grid)
    assert red.s_eff == pytest.approx(0.5, abs=1e-8)
    assert red.collinear
    # the reduced density is the normalized Gaussian with exponent 2
    pts = np.array([[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 1.0, -0.3]])
    samp = red.sample(pts)
    r2 = np.sum(pts * pts, axis=1)
    expect = (2.0 / np.pi) ** 1.5 * np.exp(-2.0 * r2)
    np.testing.assert_allclose(samp.qs[2], expect, rtol=1e-7)
    # collinear input: all three directional rows identical
    np.testing.assert_array_equal(samp.qs[0], samp.qs[2])
    np.testing.assert_array_equal(samp.qs[1], samp.qs[2])


def test_field_gradients_match_fd(two_center_hetero):
    sys_, dens = two_center_hetero
    ev = FieldEvaluator(sys_, dens)
    rng = np.random.default_rng(8)
    pts = rng.standard_normal((25, 3)) * 1.5
    fs = ev.sample(pts)
    h = 1e-6
    for d in range(3):
        shift = np.zeros(3)
        shift[d] = h
        up = ev.sample(pts + shift)
        dn = ev.sample(pts - shift)
        fd = (up.q - dn.q) / (2 * h)
        np.testing.assert_allclose(fs.grad_q[:, :, d], fd, atol=5e-9)


def test_total_density_positive(two_center_homo):
    sys_, dens = two_center_homo
    ev = FieldEvaluator(sys_, dens)
    rng = np.random.default_rng(3)
    fs = ev.sample(rng.standard_normal((100, 3)) * 2.0)
    assert (fs.density >= 0.0).all()


def test_closed_shell_rejected():
    sys_ = make_system([2], [4], [[0.0, 0.0, 0.0]], n_alpha=1, n_beta=1)
    nb = sys_.nbasis
    dens = SpinResolvedDensity(p=2.0 * np.eye(nb), p_sx=np.zeros((nb, nb)),
                               p_sy=np.zeros((nb, nb)),
                               p_sz=np.zeros((nb, nb)))
    grid = build_grid(sys_, quality="coarse")
    with pytest.raises(ClosedShellInput):
        build_reduced(sys_, dens, grid)


def test_noncollinear_delta(two_center_hetero):
    sys_, dens = two_center_hetero
    # graft small transverse blocks onto the collinear fixture
    rng = np.random.default_rng(12)
    m = rng.standard_normal((2, 2))
    full = SpinResolvedDensity(p=dens.p, p_sx=0.05 * (m + m.T),
                               p_sy=np.zeros((2, 2)), p_sz=dens.p_sz)
    assert not full.collinear
    grid = build_grid(sys_, quality="coarse")
    red = build_reduced(sys_, full, grid)
    pts = rng.standard_normal((10, 3))
    plain = red.sample(pts, with_delta=False)
    corr = red.sample(pts, with_delta=True)
    # z row is never touched by the transverse corrections
    np.testing.assert_array_equal(plain.qs[2], corr.qs[2])
    # x row differs, y row matches (p_sy is zero)
    assert np.abs(corr.qs[0] - plain.qs[0]).max() > 0.0
    np.testing.assert_array_equal(corr.qs[1], plain.qs[1])


def test_curl_of_gradient_field_vanishes(h_doublet):
    # the magnetization here is rho_s(r) * z_hat with rho_s spherically
    # symmetric, so q = (0, 0, f(r)) and curl q = (df/dy, -df/dx, 0)
    sys_, dens = h_doublet
    ev = FieldEvaluator(sys_, dens)
    pts = np.array([[0.3, -0.4, 0.7], [1.0, 0.2, -0.5]])
    fs = ev.sample(pts)
    curl = fs.curl_q()
    np.testing.assert_allclose(curl[:, 0], fs.grad_q[:, 2, 1], atol=1e-15)
    np.testing.assert_allclose(curl[:, 1], -fs.grad_q[:, 2, 0], atol=1e-15)
    np.testing.assert_allclose(curl[:, 2], 0.0, atol=1e-15)


def test_gaussian_model_density():
    g = GaussianModelDensity(center=(0.0, 0.0, 1.0), exponent=0.7)
    assert g.s_eff == 1.0
    pts = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 1.0]])
    samp = g.sample(pts)
    assert samp.qs[2][0] == pytest.approx((0.7 / np.pi) ** 1.5)
    assert samp.qs[2][1] == pytest.approx((0.7 / np.pi) ** 1.5 *
                                          np.exp(-0.7))
    # gradient points back toward the center
    assert samp.grad_qs[2][1, 0] < 0.0
    np.testing.assert_allclose(samp.grad_qs[2][0], 0.0, atol=1e-18)


def test_gaussian_model_normalized():
    sys_ = make_system([8], [16], [[0.0, 0.0, 0.0]])
    grid = build_grid(sys_, quality="default")
    g = GaussianModelDensity(exponent=0.7)
    from spincur.grid import integrate
    assert integrate(grid, g.value(grid.points)) == pytest.approx(
        1.0, abs=1e-9)


def test_dimension_mismatch_rejected(h_doublet):
    sys_, _ = h_doublet
    bad = SpinResolvedDensity(p=np.eye(2), p_sx=np.zeros((2, 2)),
                              p_sy=np.zeros((2, 2)), p_sz=np.eye(2))
    with pytest.raises(ValueError):
        FieldEvaluator(sys_, bad)
