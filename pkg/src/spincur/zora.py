"""Regularized model potential and the relativistic scaling factor.

The potential is a sum of atom-centered erf-screened Coulomb terms: a
tabulated electronic fit per element plus a Gaussian-smeared nuclear charge
whose width follows the nuclear mass number. Both the potential and its
gradient switch to series expansions near the centers, where the closed
forms lose all their digits to cancellation.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .constants import BOHR_ANGSTROM, C_LIGHT
from .errors import DomainError, UnsupportedElement
from .tables import load_erf_table, load_radial_extents

_TWO_OVER_SQRT_PI = 2.0 / np.sqrt(np.pi)
_SERIES_CUT = 0.1

M_ELECTRON = 1.0


def zeta_for(mass_number):
    """Gaussian nuclear-charge exponent (bohr^-2) for a mass number."""
    if mass_number <= 0:
        raise DomainError(f"mass number must be positive, got {mass_number}")
    radius = 0.836 * mass_number ** (1.0 / 3.0) + 0.570  # fm
    return 1.5e10 * (BOHR_ANGSTROM / radius) ** 2


def _erf_over_t(t):
    """erf(t)/t, finite and accurate through t = 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = t < _SERIES_CUT
    ts = t[small]
    t2 = ts * ts
    out[small] = _TWO_OVER_SQRT_PI * (
        1.0 + t2 * (-1.0 / 3.0 + t2 * (0.1 + t2 * (-1.0 / 42.0
                                                   + t2 / 216.0))))
    tb = t[~small]
    out[~small] = erf(tb) / tb
    return out


def _grad_kernel(t):
    """(erf(t)/t^2 - (2/sqrt(pi)) exp(-t^2)/t) / t, stable through t = 0.

    The closed form subtracts two nearly equal terms for small t; the
    series keeps full precision there.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = t < _SERIES_CUT
    t2 = t[small] ** 2
    out[small] = _TWO_OVER_SQRT_PI * (
        2.0 / 3.0 + t2 * (-0.4 + t2 * (1.0 / 7.0 + t2 * (-1.0 / 27.0
                                                         + t2 / 132.0))))
    tb = t[~small]
    out[~small] = (erf(tb) / tb ** 2
                   - _TWO_OVER_SQRT_PI * np.exp(-tb ** 2) / tb) / tb
    return out


@dataclass
class ZoraModel:
    """Per-system potential model.

    erf_table maps Z to (k, 2) arrays of (c_i, alpha_i); zeta holds the
    per-atom nuclear exponents. With nr_mode set the scaling factor is the
    constant 1/(2 m_e) and its gradient vanishes, while the potential
    itself stays available for other terms.
    """

    erf_table: dict
    zeta: np.ndarray
    nr_mode: bool = False
    c: float = C_LIGHT
    m_e: float = M_ELECTRON
    table_version: str = field(default="unversioned")

    @classmethod
    def for_system(cls, system, erf_table=None, nr_mode=False):
        if erf_table is None:
            table, version = load_erf_table()
        elif isinstance(erf_table, dict):
            table, version = erf_table, "user"
        else:
            table, version = load_erf_table(erf_table)
        for z in np.unique(system.atomic_numbers):
            if int(z) not in table:
                raise UnsupportedElement(
                    f"no erf-fit potential tabulated for Z={int(z)}")
        zeta = np.array([zeta_for(int(a)) for a in system.mass_numbers])
        return cls(erf_table=table, zeta=zeta, nr_mode=nr_mode,
                   table_version=version)


def potential(model, system, points):
    """Total model potential V(r); scalar for one point, (n,) for a batch."""
    points = np.asarray(points, dtype=float)
    single = points.ndim == 1
    pts = np.atleast_2d(points)
    v = np.zeros(pts.shape[0])
    for i in range(system.natoms):
        d = np.linalg.norm(pts - system.positions[i], axis=1)
        fit = model.erf_table[int(system.atomic_numbers[i])]
        for c_i, a_i in fit:
            sa = np.sqrt(a_i)
            v -= c_i * sa * _erf_over_t(sa * d)
        sz = np.sqrt(model.zeta[i])
        v -= system.atomic_numbers[i] * sz * _erf_over_t(sz * d)
    return v[0] if single else v


def potential_gradient(model, system, points, per_nucleus=False):
    """Gradient of the model potential.

    Returns the total (n, 3) gradient, or with per_nucleus set a
    (natoms, n, 3) array of single-center contributions (their sum is the
    total). A single (3,) point drops the batch axis. Exact zeros at the
    parent nucleus fall out of the series.
    """
    points = np.asarray(points, dtype=float)
    single = points.ndim == 1
    pts = np.atleast_2d(points)
    npts = pts.shape[0]
    grads = np.zeros((system.natoms, npts, 3))
    for i in range(system.natoms):
        disp = pts - system.positions[i]
        d = np.linalg.norm(disp, axis=1)
        radial = np.zeros(npts)
        fit = model.erf_table[int(system.atomic_numbers[i])]
        for c_i, a_i in fit:
            sa = np.sqrt(a_i)
            radial += c_i * a_i * sa * _grad_kernel(sa * d)
        sz = np.sqrt(model.zeta[i])
        radial += system.atomic_numbers[i] * model.zeta[i] * sz \
            * _grad_kernel(sz * d)
        grads[i] = radial[:, None] * disp
    if per_nucleus:
        return grads[:, 0, :] if single else grads
    total = grads.sum(axis=0)
    return total[0] if single else total


def scaling_factor(model, v):
    """K = c^2 / (2 m_e c^2 - e V) with e = 1 in atomic units.

    In nr_mode this is the constant 1/(2 m_e) regardless of V.
    """
    v = np.asarray(v, dtype=float)
    if model.nr_mode:
        return np.full_like(v, 0.5 / model.m_e)
    c2 = model.c * model.c
    denom = 2.0 * model.m_e * c2 - v
    if np.any(denom <= 0.0):
        raise DomainError(
            "scaling-factor denominator 2 m_e c^2 - V is nonpositive; "
            "the potential is outside the regularized regime")
    return c2 / denom


def k_gradient(model, k, grad_v):
    """grad K = (e/c^2) K^2 grad V; zero in nr_mode."""
    k = np.asarray(k, dtype=float)
    if model.nr_mode:
        return np.zeros(k.shape + (3,))
    return (k * k / (model.c * model.c))[..., None] \
        * np.asarray(grad_v, dtype=float)


@dataclass
class RadialExtents:
    """Per-element r_m lookup with the hydrogen fallback."""

    table: dict
    version: str = "unversioned"

    @classmethod
    def load(cls, path=None):
        table, version = load_radial_extents(path)
        return cls(table=table, version=version)

    def for_element(self, z):
        z = int(z)
        if z in self.table:
            return self.table[z]
        if z == 1:
            warnings.warn("radial-extent table lacks hydrogen; "
                          "falling back to r_m = 1.0 bohr")
            return 1.0
        raise UnsupportedElement(f"no radial extent tabulated for Z={z}")
