"""Spin contributions to NMR shielding, hyperfine coupling and
magnetizability from ZORA-regularized spin current densities."""

__version__ = "0.1.0"

from .errors import (SpincurError, MalformedFile, UnsupportedShell,
                     UnsupportedElement, ClosedShellInput, DomainError,
                     MissingNuclearData)
from .ingest import (BasisShell, MolecularSystem, SpinResolvedDensity,
                     parse_fchk, parse_generalized_density,
                     write_generalized_density)
from .grid import Grid, build_grid, becke_weights, integrate
from .field import (FieldEvaluator, ReducedSpinDensity, GaussianModelDensity,
                    build_reduced)
from .zora import ZoraModel, potential, potential_gradient, scaling_factor
from .cdt import CurrentField, divergence_diagnostic
from .observables import (PropertyTensor, SpinStatistics, spin_shielding,
                          hyperfine, spin_magnetizability,
                          combine_with_orbital, spin_expectation)
from .thermo import EquilibriumModel, mixture_chi

__all__ = [
    "SpincurError", "MalformedFile", "UnsupportedShell",
    "UnsupportedElement", "ClosedShellInput", "DomainError",
    "MissingNuclearData",
    "BasisShell", "MolecularSystem", "SpinResolvedDensity",
    "parse_fchk", "parse_generalized_density", "write_generalized_density",
    "Grid", "build_grid", "becke_weights", "integrate",
    "FieldEvaluator", "ReducedSpinDensity", "GaussianModelDensity",
    "build_reduced",
    "ZoraModel", "potential", "potential_gradient", "scaling_factor",
    "CurrentField", "divergence_diagnostic",
    "PropertyTensor", "SpinStatistics", "spin_shielding", "hyperfine",
    "spin_magnetizability", "combine_with_orbital", "spin_expectation",
    "EquilibriumModel", "mixture_chi",
]
