"""Loaders for the shipped data tables (erf-fit potentials, radial extents,
nuclear g-factors) plus element bookkeeping.

Every table is a plain-text file with '#' comment headers; the first header
line carries a version number that is echoed into results files for
provenance. User-supplied replacement tables use the same format.
"""

import re
from pathlib import Path

import numpy as np

from .errors import MalformedFile

_DATA_DIR = Path(__file__).parent / "data"

ELEMENT_SYMBOLS = [
    "X", "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr",
    "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I", "Xe",
]

SYMBOL_TO_Z = {s: z for z, s in enumerate(ELEMENT_SYMBOLS) if z > 0}

# Most abundant isotope per element, used when the checkpoint does not
# carry atomic weights.
DEFAULT_MASS_NUMBER = {
    1: 1, 2: 4, 3: 7, 4: 9, 5: 11, 6: 12, 7: 14, 8: 16, 9: 19, 10: 20,
    11: 23, 12: 24, 13: 27, 14: 28, 15: 31, 16: 32, 17: 35, 18: 40,
    19: 39, 20: 40, 21: 45, 22: 48, 23: 51, 24: 52, 25: 55, 26: 56,
    27: 59, 28: 58, 29: 63, 30: 64, 31: 69, 32: 74, 33: 75, 34: 80,
    35: 79, 36: 84, 37: 85, 38: 88, 39: 89, 40: 90, 41: 93, 42: 98,
    43: 98, 44: 102, 45: 103, 46: 106, 47: 107, 48: 114, 49: 115,
    50: 120, 51: 121, 52: 130, 53: 127, 54: 132,
}


def _read_table_lines(path):
    """Yield (version, data_lines) for a '#'-commented table file."""
    text = Path(path).read_text()
    version = "unversioned"
    m = re.search(r"version\s+(\S+)", text.splitlines()[0]) if text else None
    if m:
        version = m.group(1)
    lines = [ln for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    return version, lines


def load_erf_table(path=None):
    """Read the per-element erf-fit table.

    Returns (table, version) where table maps Z -> ndarray of shape (k, 2)
    with columns (c_i, alpha_i).
    """
    path = path or _DATA_DIR / "erf_potentials.txt"
    version, lines = _read_table_lines(path)
    table = {}
    for ln in lines:
        tok = ln.split()
        try:
            z, k = int(tok[0]), int(tok[1])
            vals = [float(t) for t in tok[2:]]
        except (ValueError, IndexError) as exc:
            raise MalformedFile(f"bad erf-table record: {ln!r}") from exc
        if len(vals) != 2 * k:
            raise MalformedFile(
                f"erf-table record for Z={z} declares k={k} but has "
                f"{len(vals)} values")
        table[z] = np.array(vals, dtype=float).reshape(k, 2)
    return table, version


def load_radial_extents(path=None):
    """Read per-element r_m values (bohr). Returns (dict Z->r_m, version)."""
    path = path or _DATA_DIR / "radial_extents.txt"
    version, lines = _read_table_lines(path)
    table = {}
    for ln in lines:
        tok = ln.split()
        try:
            table[int(tok[0])] = float(tok[1])
        except (ValueError, IndexError) as exc:
            raise MalformedFile(f"bad radial-extent record: {ln!r}") from exc
    return table, version


def load_isotopes(path=None):
    """Read the nuclear g-factor table.

    Returns (dict (Z, A) -> g_I, version).
    """
    path = path or _DATA_DIR / "isotopes.txt"
    version, lines = _read_table_lines(path)
    table = {}
    for ln in lines:
        tok = ln.split()
        try:
            a, z, g = int(tok[1]), int(tok[2]), float(tok[3])
        except (ValueError, IndexError) as exc:
            raise MalformedFile(f"bad isotope record: {ln!r}") from exc
        table[(z, a)] = g
    return table, version


def data_versions():
    """Version stamp of every shipped table, for results-file provenance."""
    out = {}
    for name in ("erf_potentials", "radial_extents", "isotopes"):
        version, _ = _read_table_lines(_DATA_DIR / f"{name}.txt")
        out[name] = version
    return out
