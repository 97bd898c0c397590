"""Property tensors from moment integrals of the spin current density.

The shielding and hyperfine tensors share one Biot-Savart moment

    W[alpha, beta] = int (d x J^beta)_alpha / |d|^3 dV,   d = r - R_I,

so their component-wise ratio is the closed-form prefactor ratio exactly.
The magnetizability uses the first moment M[mu, lam] = int (r x J^mu)_lam.
Temperature enters through the thermal spin polarization, either in its
zero-field (Curie) limit or with the exact Brillouin-type expectation at
finite field.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import (G_E, HYPERFINE_AU_TO_MHZ, K_B, MU_B, MU_N,
                        MU0_OVER_4PI, SHIELDING_AU_TO_PPM, TESLA_PER_AU,
                        CHI_AU_TO_PPM_CM3_MOL)
from .errors import DomainError, MissingNuclearData
from .grid import integrate_chunks
from .tables import load_isotopes

_STATS_SERIES_CUT = 0.05


@dataclass(frozen=True)
class SpinStatistics:
    """Thermal occupation of the 2S+1 spin sublevels.

    spin is S (half-integer), temperature in kelvin. k = (2S+1)/2 is the
    half-multiplicity that parametrizes the exact expectation value.
    """

    spin: float
    temperature: float

    def __post_init__(self):
        if self.temperature <= 0.0:
            raise DomainError(
                f"temperature must be positive, got {self.temperature}")
        two_s = 2.0 * self.spin
        if self.spin <= 0.0 or abs(two_s - round(two_s)) > 1e-9:
            raise DomainError(
                f"spin must be a positive half-integer, got {self.spin}")

    @property
    def k(self):
        return (2.0 * self.spin + 1.0) / 2.0

    def x(self, field_tesla):
        """Dimensionless field-to-thermal ratio g_e mu_B B / (k_B T)."""
        b_au = field_tesla / TESLA_PER_AU
        return G_E * MU_B * b_au / (K_B * self.temperature)


def _csch2(y):
    """csch^2 computed through decaying exponentials; underflows cleanly."""
    ey = math.exp(-abs(y))
    return 4.0 * ey * ey / (1.0 - ey * ey) ** 2


def spin_expectation(stats, field_tesla):
    """Exact thermal <S_z> along the field; negative for positive field."""
    x = stats.x(field_tesla)
    k = stats.k
    if abs(x) < _STATS_SERIES_CUT:
        c1 = k * k / 3.0 - 1.0 / 12.0
        c3 = k ** 4 / 45.0 - 1.0 / 720.0
        return -(c1 * x - c3 * x ** 3)
    return -(k / math.tanh(k * x) - 0.5 / math.tanh(0.5 * x))


def spin_expectation_linear(stats, field_tesla):
    """Curie-limit <S_z>: -S(S+1) x / 3."""
    s = stats.spin
    return -s * (s + 1.0) * stats.x(field_tesla) / 3.0


def spin_expectation_derivative(stats, field_tesla):
    """d<S_z>/dB in 1/tesla; approaches -S(S+1)/3 * dx/dB at zero field
    and zero at saturation."""
    x = stats.x(field_tesla)
    k = stats.k
    if abs(x) < _STATS_SERIES_CUT:
        dsdx = -(k * k / 3.0 - 1.0 / 12.0) \
            + 3.0 * (k ** 4 / 45.0 - 1.0 / 720.0) * x * x
    else:
        # d/dx of -(k coth(kx) - coth(x/2)/2); the csch^2 difference is
        # itself negative, no extra sign
        dsdx = k * k * _csch2(k * x) - 0.25 * _csch2(0.5 * x)
    dxdb = G_E * MU_B / (K_B * stats.temperature * TESLA_PER_AU)
    return dsdx * dxdb


def _response_factor(stats, field_tesla=None):
    """S(S+1)/(3 k_B T) in the zero-field limit, else -<S_z>/(g_e mu_B B).

    This is the factor that converts the per-unit-spin current into the
    thermally averaged response; the two branches agree as B -> 0.
    """
    if field_tesla is None or field_tesla == 0.0:
        s = stats.spin
        return s * (s + 1.0) / (3.0 * K_B * stats.temperature)
    b_au = field_tesla / TESLA_PER_AU
    return -spin_expectation(stats, field_tesla) / (G_E * MU_B * b_au)


@dataclass
class PropertyTensor:
    """A 3x3 property with its term breakdown and provenance metadata.

    components = zee + soc (+ orbital when present), summed in that order,
    bit exactly.
    """

    kind: str
    components: np.ndarray
    units: str
    zee: np.ndarray
    soc: np.ndarray
    orbital: np.ndarray = None
    nucleus: int = None
    spin: float = None
    temperature: float = None
    mode: str = None
    include_soc: bool = True
    delta: float = None

    @property
    def iso(self):
        return float(np.trace(self.components) / 3.0)

    @property
    def anisotropy(self):
        ev = np.sort(np.linalg.eigvalsh(0.5 * (self.components
                                               + self.components.T)))
        return float(ev[2] - 0.5 * (ev[0] + ev[1]))


def biot_savart_moment(grid, current_field, center, threads=1):
    """(W_zee, W_soc) moment matrices about a center.

    W[alpha, beta] = int (d x J^beta)_alpha / |d|^3 dV with d = r - center.
    A grid point exactly on the center contributes nothing (the moment
    kernel has measure zero there).
    """
    center = np.asarray(center, dtype=float)

    def chunk(points, weights):
        sample = current_field.sample(points)
        d = points - center
        d3 = np.linalg.norm(d, axis=1) ** 3
        good = d3 > 0.0
        inv = np.zeros_like(d3)
        inv[good] = weights[good] / d3[good]
        w = np.empty((2, 3, 3))
        for t, j in enumerate((sample.j_zee, sample.j_soc)):
            for b in range(3):
                w[t, :, b] = inv @ np.cross(d, j[b])
        return w

    w = integrate_chunks(grid, chunk, threads=threads)
    return w[0], w[1]


def first_moment(grid, current_field, threads=1):
    """(M_zee, M_soc) with M[mu, lam] = int (r x J^mu)_lam dV."""

    def chunk(points, weights):
        sample = current_field.sample(points)
        m = np.empty((2, 3, 3))
        for t, j in enumerate((sample.j_zee, sample.j_soc)):
            for b in range(3):
                m[t, b, :] = weights @ np.cross(points, j[b])
        return m

    m = integrate_chunks(grid, chunk, threads=threads)
    return m[0], m[1]


def shielding_from_moments(w_zee, w_soc, stats, nucleus=None, mode=None,
                           include_soc=False, field_tesla=None):
    """Spin contribution to the shielding tensor, ppm."""
    pref = MU0_OVER_4PI * G_E * MU_B * _response_factor(stats, field_tesla) \
        * SHIELDING_AU_TO_PPM
    zee = pref * np.asarray(w_zee)
    soc = pref * np.asarray(w_soc)
    total = zee + soc if include_soc else zee.copy()
    return PropertyTensor(kind="shielding", components=total, units="ppm",
                          zee=zee, soc=soc, nucleus=nucleus, spin=stats.spin,
                          temperature=stats.temperature, mode=mode,
                          include_soc=include_soc)


def hyperfine_from_moments(w_zee, w_soc, g_i, nucleus=None, mode=None,
                           include_soc=False):
    """Hyperfine coupling tensor, MHz. g_i is the nuclear g-factor."""
    pref = -g_i * MU_N * MU0_OVER_4PI * HYPERFINE_AU_TO_MHZ
    zee = pref * np.asarray(w_zee)
    soc = pref * np.asarray(w_soc)
    total = zee + soc if include_soc else zee.copy()
    return PropertyTensor(kind="hyperfine", components=total, units="MHz",
                          zee=zee, soc=soc, nucleus=nucleus, mode=mode,
                          include_soc=include_soc)


def magnetizability_from_moments(m_zee, m_soc, stats, mode=None,
                                 include_soc=True, field_tesla=None):
    """Spin contribution to the molar magnetizability, ppm cm^3/mol."""
    pref = -G_E * MU_B * _response_factor(stats, field_tesla) / 4.0 \
        * CHI_AU_TO_PPM_CM3_MOL

    def sym(m):
        m = np.asarray(m)
        return pref * (m + m.T)

    zee, soc = sym(m_zee), sym(m_soc)
    total = zee + soc if include_soc else zee.copy()
    return PropertyTensor(kind="magnetizability", components=total,
                          units="ppm cm^3/mol", zee=zee, soc=soc,
                          spin=stats.spin, temperature=stats.temperature,
                          mode=mode, include_soc=include_soc)


def resolve_g_factor(system, nucleus, overrides=None, table=None):
    """Nuclear g-factor for one atom: explicit override, else the table."""
    z = int(system.atomic_numbers[nucleus])
    a = int(system.mass_numbers[nucleus])
    if overrides:
        if (z, a) in overrides:
            return overrides[(z, a)]
        if z in overrides:
            return overrides[z]
    if table is None:
        table, _ = load_isotopes()
    key = (z, a)
    if key not in table:
        raise MissingNuclearData(
            f"no g-factor for isotope {a}{system.symbol(nucleus)} "
            f"(Z={z}); supply one explicitly")
    return table[key]


def spin_shielding(grid, current_field, system, nucleus, stats,
                   include_soc=False, field_tesla=None, threads=1):
    """Shielding tensor at one nucleus straight from a current field."""
    w_zee, w_soc = biot_savart_moment(
        grid, current_field, system.positions[nucleus], threads=threads)
    return shielding_from_moments(w_zee, w_soc, stats, nucleus=nucleus,
                                  mode=current_field.mode,
                                  include_soc=include_soc,
                                  field_tesla=field_tesla)


def hyperfine(grid, current_field, system, nucleus, g_i=None,
              g_overrides=None, include_soc=False, threads=1):
    """Hyperfine tensor at one nucleus straight from a current field."""
    if g_i is None:
        g_i = resolve_g_factor(system, nucleus, overrides=g_overrides)
    w_zee, w_soc = biot_savart_moment(
        grid, current_field, system.positions[nucleus], threads=threads)
    return hyperfine_from_moments(w_zee, w_soc, g_i, nucleus=nucleus,
                                  mode=current_field.mode,
                                  include_soc=include_soc)


def spin_magnetizability(grid, current_field, stats, include_soc=True,
                         field_tesla=None, threads=1):
    """Magnetizability tensor straight from a current field."""
    m_zee, m_soc = first_moment(grid, current_field, threads=threads)
    return magnetizability_from_moments(m_zee, m_soc, stats,
                                        mode=current_field.mode,
                                        include_soc=include_soc,
                                        field_tesla=field_tesla)


def combine_with_orbital(spin_tensor, orbital, reference_iso=None):
    """Add an externally computed orbital part to a spin-only tensor.

    orbital may be a 3x3 array, a scalar (treated as isotropic), or
    another PropertyTensor (units must match). With reference_iso given,
    delta = reference_iso - iso(total) is stored on the result, which is
    the chemical-shift convention for shieldings.
    """
    if isinstance(orbital, PropertyTensor):
        if orbital.units != spin_tensor.units:
            raise DomainError(
                f"unit mismatch: spin tensor in {spin_tensor.units}, "
                f"orbital in {orbital.units}")
        orb = np.asarray(orbital.components, dtype=float)
    else:
        orb = np.asarray(orbital, dtype=float)
        if orb.ndim == 0:
            orb = float(orb) * np.eye(3)
    if orb.shape != (3, 3):
        raise DomainError("orbital part must be a scalar or a 3x3 tensor")
    total = spin_tensor.components + orb
    out = PropertyTensor(kind=spin_tensor.kind, components=total,
                         units=spin_tensor.units, zee=spin_tensor.zee,
                         soc=spin_tensor.soc, orbital=orb,
                         nucleus=spin_tensor.nucleus, spin=spin_tensor.spin,
                         temperature=spin_tensor.temperature,
                         mode=spin_tensor.mode,
                         include_soc=spin_tensor.include_soc)
    if reference_iso is not None:
        out.delta = float(reference_iso) - out.iso
    return out


def _write_matrix(fh, name, m):
    fh.write(f"  {name}:\n")
    for row in m:
        fh.write("    % .12e % .12e % .12e\n" % tuple(row))


def write_results(path, tensors, meta=None):
    """Structured text results file.

    meta is a dict of provenance lines (config hash, data versions, run
    settings); each tensor gets a block with the total, the term
    breakdown, and the isotropic average.
    """
    with open(path, "w") as fh:
        fh.write("# spin current property results, format version 1\n")
        for key, val in (meta or {}).items():
            fh.write(f"# {key}: {val}\n")
        for t in tensors:
            head = f"result {t.kind} units {t.units}"
            if t.nucleus is not None:
                head += f" nucleus {t.nucleus}"
            if t.temperature is not None:
                head += f" temperature {t.temperature}"
            if t.spin is not None:
                head += f" spin {t.spin}"
            if t.mode:
                head += f" mode {t.mode}"
            fh.write(head + "\n")
            _write_matrix(fh, "total", t.components)
            _write_matrix(fh, "zee", t.zee)
            _write_matrix(fh, "soc", t.soc)
            if t.orbital is not None:
                _write_matrix(fh, "orbital", t.orbital)
            fh.write(f"  iso: {t.iso:.10e}\n")
            if t.delta is not None:
                fh.write(f"  delta: {t.delta:.10e}\n")
        fh.write("end\n")
