"""Regularized kinematic factor, model potential and their gradients."""

import numpy as np
import pytest

from conftest import make_system

from spincur.errors import DomainError, UnsupportedElement
from spincur.zora import (RadialExtents, ZoraModel, k_gradient, potential,
                          potential_gradient, scaling_factor, zeta_for)
from spincur.constants import C_LIGHT


@pytest.fixture(scope="module")
def n2_model():
    sys_ = make_system([7, 7], [14, 14],
                       [[0.0, 0.0, -1.05], [0.0, 0.0, 1.05]],
                       n_alpha=2, n_beta=1)
    return ZoraModel.for_system(sys_), sys_


def test_zeta_values():
    # finite-nucleus widths from the standard A^(1/3) radius formula
    assert zeta_for(1) == pytest.approx(2.1248e9, rel=5e-4)
    assert zeta_for(16) == pytest.approx(5.8631e8, rel=5e-4)
    # heavier nuclei are wider, so zeta decreases
    assert zeta_for(40) < zeta_for(4)


def test_k_is_exactly_half_at_zero_potential(n2_model):
    model, _ = n2_model
    k = scaling_factor(model, np.array([0.0]))
    assert k[0] == 0.5  # bitwise, not approx


def test_k_range(n2_model):
    model, sys_ = n2_model
    rng = np.random.default_rng(11)
    pts = rng.standard_normal((200, 3)) * 2.0
    v = potential(model, sys_, pts)
    # far from the nuclei the fitted terms cancel to within roundoff, so
    # allow a sub-1e-12 positive residue
    assert (v <= 1e-12).all()
    k = scaling_factor(model, v)
    assert (k > 0.0).all() and (k <= 0.5).all()
    # deep potential drives K well below the nonrelativistic limit
    v_deep = potential(model, sys_, sys_.positions[0][None, :] +
                       np.array([[1e-6, 0.0, 0.0]]))
    assert scaling_factor(model, v_deep)[0] < 0.5


def test_k_domain_error(n2_model):
    model, _ = n2_model
    with pytest.raises(DomainError):
        scaling_factor(model, np.array([2.0 * C_LIGHT ** 2]))


def test_potential_at_center_closed_form(n2_model):
    model, _ = n2_model
    sys1 = make_system([7], [14], [[0.0, 0.0, 0.0]])
    model1 = ZoraModel.for_system(sys1)
    coeffs = model1.erf_table[7]
    zeta = model1.zeta[0]
    # erf(sqrt(a) r)/r -> 2 sqrt(a/pi) as r -> 0
    expected = -sum(c * 2.0 * np.sqrt(a / np.pi) for c, a in coeffs)
    expected -= 7.0 * 2.0 * np.sqrt(zeta / np.pi)
    v0 = potential(model1, sys1, np.zeros(3))
    assert v0 == pytest.approx(expected, rel=1e-12)


def test_potential_gradient_matches_fd(n2_model):
    model, sys_ = n2_model
    rng = np.random.default_rng(5)
    pts = rng.standard_normal((30, 3)) * 1.8
    grad = potential_gradient(model, sys_, pts)
    h = 1e-6
    for d in range(3):
        shift = np.zeros(3)
        shift[d] = h
        up = potential(model, sys_, pts + shift)
        dn = potential(model, sys_, pts - shift)
        fd = (up - dn) / (2 * h)
        np.testing.assert_allclose(grad[:, d], fd, rtol=2e-7, atol=1e-9)


def test_gradient_series_switch_continuity(n2_model):
    # probe straddling t = 0.1 for the smallest fit exponent: the series
    # and direct branches must agree through the crossover
    model, sys_ = n2_model
    alphas = model.erf_table[7][:, 1]
    a_min = alphas.min()
    r_cut = 0.1 / np.sqrt(a_min)
    radii = np.linspace(0.5 * r_cut, 2.0 * r_cut, 41)
    pts = sys_.positions[0] + np.outer(radii, [1.0, 1.0, 1.0] / np.sqrt(3))
    grad = potential_gradient(model, sys_, pts)
    proj = grad @ (np.array([1.0, 1.0, 1.0]) / np.sqrt(3))
    h = 1e-7
    fd = (potential(model, sys_, pts + h * np.array([1, 1, 1]) / np.sqrt(3))
          - potential(model, sys_, pts - h * np.array([1, 1, 1]) / np.sqrt(3))
          ) / (2 * h)
    np.testing.assert_allclose(proj, fd, rtol=1e-6, atol=1e-8)


def test_gradient_zero_at_parent_nucleus(n2_model):
    model, sys_ = n2_model
    grad = potential_gradient(model, sys_, sys_.positions[0])
    # the parent nucleus contributes an exact analytic zero; the partner
    # 2.1 bohr away contributes, so subtract it out via per-nucleus parts
    per = potential_gradient(model, sys_, sys_.positions[0],
                             per_nucleus=True)
    np.testing.assert_allclose(per[0], 0.0, atol=0.0)  # exact zero
    np.testing.assert_allclose(per.sum(axis=0), grad, atol=1e-15)


def test_per_nucleus_sums_to_total(n2_model):
    model, sys_ = n2_model
    rng = np.random.default_rng(2)
    pts = rng.standard_normal((12, 3)) * 2.0
    total = potential_gradient(model, sys_, pts)
    per = potential_gradient(model, sys_, pts, per_nucleus=True)
    assert per.shape == (2, 12, 3)
    np.testing.assert_allclose(per.sum(axis=0), total, atol=1e-14)


def test_k_gradient_matches_fd(n2_model):
    model, sys_ = n2_model
    rng = np.random.default_rng(9)
    # keep the probes within ~1 bohr of a nucleus so grad K stays well
    # above the cancellation noise of the finite-difference quotient
    pts = sys_.positions[0] + rng.standard_normal((20, 3)) * 0.4
    k = scaling_factor(model, potential(model, sys_, pts))
    gv = potential_gradient(model, sys_, pts)
    gk = k_gradient(model, k, gv)
    h = 1e-6
    for d in range(3):
        shift = np.zeros(3)
        shift[d] = h
        ku = scaling_factor(model, potential(model, sys_, pts + shift))
        kd = scaling_factor(model, potential(model, sys_, pts - shift))
        fd = (ku - kd) / (2 * h)
        np.testing.assert_allclose(gk[:, d], fd, rtol=1e-4, atol=2e-11)


def test_nr_mode(n2_model):
    _, sys_ = n2_model
    model_nr = ZoraModel.for_system(sys_, nr_mode=True)
    v = np.array([-50.0, -1.0, 0.0])
    k = scaling_factor(model_nr, v)
    np.testing.assert_array_equal(k, 0.5)
    gk = k_gradient(model_nr, k, np.ones((3, 3)))
    np.testing.assert_array_equal(gk, 0.0)


def test_unsupported_element():
    # the bundled fit covers Z = 1..54; cesium is one past the end
    sys_ = make_system([55], [133], [[0.0, 0.0, 0.0]])
    with pytest.raises(UnsupportedElement):
        ZoraModel.for_system(sys_)


def test_radial_extents_lookup_and_fallback():
    ext = RadialExtents.load()
    assert ext.for_element(8) > 0.0
    # restricted table: hydrogen falls back with a warning, others raise
    bare = RadialExtents(table={8: 1.4})
    with pytest.warns(UserWarning):
        assert bare.for_element(1) == 1.0
    with pytest.raises(UnsupportedElement):
        bare.for_element(40)
