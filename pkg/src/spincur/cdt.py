"""Magnetically induced spin current density terms.

Two contributions per field direction beta: the Zeeman-response curl term
and the spin-orbit term built from the potential gradient. Expressions in
atomic units (hbar = m_e = e = 1, mu_B = 1/2):

    J_zee^beta = -g_e mu_B (2 m_e/hbar) K * (grad Q_S^beta x e_beta)
    J_soc^beta = -(2 e^2/c^2) K^2 Q_S^beta * (e_beta x grad V)

The spin-orbit term uses the gradient of the total potential; per-nucleus
pieces are only split out for diagnostics.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, G_E, MU_B
from .errors import DomainError
from . import zora

_UNIT = np.eye(3)

MODES = ("NR", "SR", "SR+SOC")


def zeeman_current(k, grad_qs_beta, beta):
    """Curl-term current for field direction beta; arrays over points."""
    e_b = _UNIT[beta]
    pref = -G_E * MU_B * 2.0  # 2 m_e / hbar = 2
    return pref * np.asarray(k)[:, None] * np.cross(grad_qs_beta, e_b)


def soc_current(k, qs_beta, grad_v, beta):
    """Spin-orbit current for field direction beta; arrays over points."""
    e_b = _UNIT[beta]
    k = np.asarray(k)
    pref = -2.0 / (C_LIGHT * C_LIGHT)
    return pref * (k * k * np.asarray(qs_beta))[:, None] \
        * np.cross(e_b, np.asarray(grad_v))


@dataclass
class CDTSample:
    """Both current terms for all three field directions on a point batch.

    j_zee and j_soc have shape (3, n, 3): field direction, point, current
    component. j_soc_nuc, filled only on request, resolves the spin-orbit
    term into single-nucleus contributions (natoms, 3, n, 3) whose sum
    over the first axis is j_soc up to roundoff.
    """

    j_zee: np.ndarray
    j_soc: np.ndarray
    j_soc_nuc: np.ndarray = None

    def total(self, include_soc=True):
        return self.j_zee + self.j_soc if include_soc else self.j_zee


class CurrentField:
    """Evaluates both current terms from a reduced spin density and a
    potential model.

    mode selects the physics: "NR" freezes the scaling factor at its
    nonrelativistic value, "SR" uses the full scalar-relativistic factor,
    and "SR+SOC" additionally folds the transverse spin corrections into
    the directional densities (possible only for two-component inputs).
    """

    def __init__(self, reduced, model, system, mode="SR"):
        if mode not in MODES:
            raise DomainError(f"unknown mode {mode!r}; choose from {MODES}")
        self.reduced = reduced
        self.model = model
        self.system = system
        self.mode = mode
        self.use_delta = mode == "SR+SOC" and not reduced.collinear
        if mode == "SR+SOC" and reduced.collinear:
            warnings.warn(
                "SR+SOC requested for a collinear input; transverse spin "
                "corrections are identically zero and only the spin-orbit "
                "current term distinguishes this from SR")

    def sample(self, points, per_nucleus_soc=False):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        rs = self.reduced.sample(pts, with_delta=self.use_delta)
        if self.mode == "NR":
            k = np.full(pts.shape[0], 0.5 / self.model.m_e)
        else:
            v = zora.potential(self.model, self.system, pts)
            k = zora.scaling_factor(self.model, v)
        grad_v = zora.potential_gradient(self.model, self.system, pts)
        j_zee = np.empty((3, pts.shape[0], 3))
        j_soc = np.empty((3, pts.shape[0], 3))
        for b in range(3):
            j_zee[b] = zeeman_current(k, rs.grad_qs[b], b)
            j_soc[b] = soc_current(k, rs.qs[b], grad_v, b)
        j_soc_nuc = None
        if per_nucleus_soc:
            grad_v_nuc = zora.potential_gradient(self.model, self.system,
                                                 pts, per_nucleus=True)
            j_soc_nuc = np.empty((self.system.natoms, 3, pts.shape[0], 3))
            for i in range(self.system.natoms):
                for b in range(3):
                    j_soc_nuc[i, b] = soc_current(k, rs.qs[b],
                                                  grad_v_nuc[i], b)
        return CDTSample(j_zee=j_zee, j_soc=j_soc, j_soc_nuc=j_soc_nuc)


def divergence_diagnostic(current_field, points, h=1e-4):
    """Central-difference div J, normalized by the local current scale.

    Returns a dict with 'zee' and 'soc' arrays of shape (3, npts): for
    each field direction and sample point, |div J| h-stencil estimate
    divided by the largest |J| over the stencil (zero where the current
    itself vanishes). Near-zero local currents (a field direction along
    the local potential gradient) make the normalization ill-conditioned;
    pick sample points where the current is alive.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    npts = pts.shape[0]
    # stencil layout: for each point, 6 displaced copies (+x -x +y -y +z -z)
    stencil = np.empty((npts, 6, 3))
    for d in range(3):
        off = np.zeros(3)
        off[d] = h
        stencil[:, 2 * d] = pts + off
        stencil[:, 2 * d + 1] = pts - off
    sample = current_field.sample(stencil.reshape(-1, 3))

    out = {}
    for name, j in (("zee", sample.j_zee), ("soc", sample.j_soc)):
        j = j.reshape(3, npts, 6, 3)
        div = np.zeros((3, npts))
        for d in range(3):
            div += (j[:, :, 2 * d, d] - j[:, :, 2 * d + 1, d]) / (2.0 * h)
        scale = np.abs(j).max(axis=(2, 3))
        norm = np.zeros_like(div)
        nz = scale > 0.0
        norm[nz] = np.abs(div[nz]) / scale[nz]
        out[name] = norm
    return out
