"""Monomer-dimer equilibrium averaging of magnetizabilities.

For a gas where the paramagnetic monomer M dimerizes to a diamagnetic or
weakly magnetic dimer M2, the measured molar susceptibility (per mole of
monomer units) is the degree-of-dissociation weighted average

    chi_mix = alpha * chi_monomer + (1 - alpha) * chi_dimer / 2.

The dissociation constant uses the standard-state convention K_p in bar
with Delta G in kJ/mol.
"""

import math
from dataclasses import dataclass

from .constants import R_GAS
from .errors import DomainError


def equilibrium_constant(delta_g_kj, temperature):
    """K_p = exp(-Delta G / RT), Delta G in kJ/mol, T in kelvin."""
    if temperature <= 0.0:
        raise DomainError(f"temperature must be positive, got {temperature}")
    return math.exp(-delta_g_kj * 1000.0 / (R_GAS * temperature))


def degree_of_dissociation(k_p, pressure):
    """Fraction of monomer units free as monomer, for 2M <-> M2.

    pressure is the total pressure in units of the standard-state
    pressure (so an atmospheric run passes 1.0). With mole fractions from
    the dissociation stoichiometry, alpha = sqrt(K_p / (4 P + K_p)).
    """
    if pressure <= 0.0:
        raise DomainError(f"pressure must be positive, got {pressure}")
    if k_p < 0.0:
        raise DomainError(f"equilibrium constant must be >= 0, got {k_p}")
    return (k_p / (4.0 * pressure + k_p)) ** 0.5


@dataclass(frozen=True)
class EquilibriumModel:
    """Inputs for the mixture average.

    chi values are molar susceptibilities in consistent units; chi_dimer
    is per mole of dimer (it is halved internally to count per monomer
    unit). delta_g_kj is the free energy of dissociation M2 -> 2M in
    kJ/mol; pressure is in standard-state units. Supply k_p directly to
    bypass the free energy.
    """

    chi_monomer: float
    chi_dimer: float
    temperature: float
    pressure: float = 1.0
    delta_g_kj: float = None
    k_p: float = None

    def equilibrium_constant(self):
        if self.k_p is not None:
            return self.k_p
        if self.delta_g_kj is None:
            raise DomainError("supply either delta_g_kj or k_p")
        return equilibrium_constant(self.delta_g_kj, self.temperature)

    def alpha(self):
        return degree_of_dissociation(self.equilibrium_constant(),
                                      self.pressure)


def mixture_chi(model):
    """Equilibrium-averaged susceptibility per mole of monomer units."""
    a = model.alpha()
    return a * model.chi_monomer + (1.0 - a) * model.chi_dimer / 2.0
