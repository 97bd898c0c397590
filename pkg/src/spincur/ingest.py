"""Input handling: formatted checkpoint files and generalized spin densities.

The checkpoint reader pulls exactly the sections needed to rebuild the
Cartesian Gaussian basis and the spin-resolved one-particle densities.
Everything else in the file is ignored. Densities arrive lower-triangle
packed and are expanded to full symmetric matrices here, once.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ClosedShellInput, MalformedFile, UnsupportedShell
from .tables import DEFAULT_MASS_NUMBER, ELEMENT_SYMBOLS

MAX_ANGULAR_MOMENTUM = 4

_SHELL_DIM = {l: (l + 1) * (l + 2) // 2 for l in range(MAX_ANGULAR_MOMENTUM + 1)}


@dataclass(frozen=True)
class BasisShell:
    """One contracted Cartesian Gaussian shell."""

    atom: int            # index into the parent system's atom list
    l: int               # angular momentum, 0..4
    exponents: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        if not 0 <= self.l <= MAX_ANGULAR_MOMENTUM:
            raise UnsupportedShell(f"angular momentum {self.l} out of range")
        if np.any(self.exponents <= 0.0):
            raise MalformedFile("nonpositive primitive exponent")
        self.exponents.setflags(write=False)
        self.coefficients.setflags(write=False)

    @property
    def dim(self):
        return _SHELL_DIM[self.l]


@dataclass(frozen=True)
class MolecularSystem:
    """Geometry (bohr), atomic composition and the basis layout."""

    atomic_numbers: np.ndarray       # (natoms,) int
    mass_numbers: np.ndarray         # (natoms,) int
    positions: np.ndarray            # (natoms, 3) float, bohr
    shells: tuple                    # of BasisShell
    n_alpha: int
    n_beta: int

    def __post_init__(self):
        for arr in (self.atomic_numbers, self.mass_numbers, self.positions):
            arr.setflags(write=False)

    @property
    def natoms(self):
        return len(self.atomic_numbers)

    @property
    def nbasis(self):
        return sum(sh.dim for sh in self.shells)

    @property
    def n_unpaired(self):
        return self.n_alpha - self.n_beta

    def symbol(self, i):
        return ELEMENT_SYMBOLS[self.atomic_numbers[i]]


@dataclass(frozen=True)
class SpinResolvedDensity:
    """Total density matrix P and spin density matrices P^{S_x,y,z}.

    A collinear calculation has P^{S_x} = P^{S_y} = 0 identically; the x/y
    blocks only carry information for two-component inputs supplied through
    the generalized density format.
    """

    p: np.ndarray
    p_sx: np.ndarray
    p_sy: np.ndarray
    p_sz: np.ndarray

    def __post_init__(self):
        n = self.p.shape[0]
        for arr in (self.p, self.p_sx, self.p_sy, self.p_sz):
            if arr.shape != (n, n):
                raise MalformedFile("density matrix blocks differ in shape")
            arr.setflags(write=False)

    @property
    def nbasis(self):
        return self.p.shape[0]

    @property
    def collinear(self):
        return not (np.any(self.p_sx) or np.any(self.p_sy))


def _expand_packed(vals, nbf):
    """Expand a row-major packed lower triangle into a symmetric matrix."""
    if len(vals) != nbf * (nbf + 1) // 2:
        raise MalformedFile(
            f"packed matrix has {len(vals)} elements, expected "
            f"{nbf * (nbf + 1) // 2} for {nbf} basis functions")
    m = np.zeros((nbf, nbf))
    il = np.tril_indices(nbf)
    m[il] = vals
    m[(il[1], il[0])] = vals
    return m


def _scan_fchk(text):
    """Split a formatted checkpoint into {label: scalar or ndarray}."""
    sections = {}
    lines = text.splitlines()
    i = 0
    n = len(lines)
    # first two lines are the title and the job line; tolerate their absence
    while i < n:
        line = lines[i]
        if len(line) < 43:
            i += 1
            continue
        label = line[:40].strip()
        rest = line[40:].split()
        if not rest or rest[0] not in ("I", "R", "C"):
            i += 1
            continue
        kind = rest[0]
        if len(rest) >= 3 and rest[1] == "N=":
            try:
                count = int(rest[2])
            except ValueError:
                raise MalformedFile(f"bad array count in section {label!r}")
            per_line = 6 if kind == "I" else 5
            nlines = (count + per_line - 1) // per_line
            toks = []
            for j in range(i + 1, i + 1 + nlines):
                if j >= n:
                    raise MalformedFile(f"section {label!r} truncated")
                toks.extend(lines[j].split())
            if len(toks) < count:
                raise MalformedFile(f"section {label!r} truncated")
            toks = toks[:count]
            try:
                if kind == "I":
                    sections[label] = np.array([int(t) for t in toks])
                elif kind == "R":
                    sections[label] = np.array([float(t) for t in toks])
            except ValueError:
                raise MalformedFile(f"unparseable value in section {label!r}")
            i += 1 + nlines
        else:
            if len(rest) >= 2:
                try:
                    sections[label] = (int(rest[1]) if kind == "I"
                                       else float(rest[1]))
                except ValueError:
                    pass
            i += 1
    return sections


def _require(sections, label):
    if label not in sections:
        raise MalformedFile(f"required section {label!r} missing")
    return sections[label]


def parse_fchk(source):
    """Read a formatted checkpoint file.

    source is a path or an open text file. Returns (MolecularSystem,
    SpinResolvedDensity). Only Cartesian shells up to g are accepted;
    combined sp shells and spherical-harmonic shells are rejected.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    sec = _scan_fchk(text)

    n_alpha = _require(sec, "Number of alpha electrons")
    n_beta = _require(sec, "Number of beta electrons")
    if n_beta > n_alpha:
        raise MalformedFile(
            f"N_beta={n_beta} exceeds N_alpha={n_alpha}; spin densities are "
            "referenced to the alpha direction. Swap the spin labels "
            "(flip the spin) and rerun.")

    znums = np.asarray(_require(sec, "Atomic numbers"), dtype=int)
    natoms = len(znums)
    coords = np.asarray(_require(sec, "Current cartesian coordinates"),
                        dtype=float)
    if coords.size != 3 * natoms:
        raise MalformedFile("coordinate count does not match atom count")
    positions = coords.reshape(natoms, 3)

    if np.any(znums < 1) or np.any(znums >= len(ELEMENT_SYMBOLS)):
        bad = int(znums[(znums < 1) | (znums >= len(ELEMENT_SYMBOLS))][0])
        raise MalformedFile(f"atomic number {bad} out of supported range")

    # isotopes: real atomic weights when present, else most abundant
    if "Real atomic weights" in sec:
        weights = np.asarray(sec["Real atomic weights"], dtype=float)
        if weights.size != natoms:
            raise MalformedFile("atomic weight count does not match atoms")
        mass_numbers = np.array([int(round(w)) for w in weights])
    else:
        mass_numbers = np.array([DEFAULT_MASS_NUMBER[int(z)] for z in znums])

    stypes = np.asarray(_require(sec, "Shell types"), dtype=int)
    nprims = np.asarray(_require(sec, "Number of primitives per shell"),
                        dtype=int)
    smap = np.asarray(_require(sec, "Shell to atom map"), dtype=int)
    exps = np.asarray(_require(sec, "Primitive exponents"), dtype=float)
    coefs = np.asarray(_require(sec, "Contraction coefficients"), dtype=float)
    if not (len(stypes) == len(nprims) == len(smap)):
        raise MalformedFile("shell description sections disagree in length")
    if exps.size != nprims.sum() or coefs.size != nprims.sum():
        raise MalformedFile("primitive count does not match shell table")

    shells = []
    off = 0
    for ish, st in enumerate(stypes):
        k = nprims[ish]
        if st == -1:
            raise UnsupportedShell(
                f"shell {ish} is a combined sp shell; split it into separate "
                "s and p shells")
        if st < -1:
            raise UnsupportedShell(
                f"shell {ish} uses spherical-harmonic components "
                f"(type {st}); only Cartesian shells are supported")
        if st > MAX_ANGULAR_MOMENTUM:
            raise UnsupportedShell(
                f"shell {ish} has angular momentum {st}, beyond g")
        atom = int(smap[ish]) - 1
        if not 0 <= atom < natoms:
            raise MalformedFile(f"shell {ish} maps to bad atom {smap[ish]}")
        shells.append(BasisShell(atom=atom, l=int(st),
                                 exponents=exps[off:off + k].copy(),
                                 coefficients=coefs[off:off + k].copy()))
        off += k

    system = MolecularSystem(atomic_numbers=znums, mass_numbers=mass_numbers,
                             positions=positions, shells=tuple(shells),
                             n_alpha=int(n_alpha), n_beta=int(n_beta))

    nbf = system.nbasis
    p_tot = _expand_packed(np.asarray(_require(sec, "Total SCF Density"),
                                      dtype=float), nbf)
    p_spin = _expand_packed(np.asarray(_require(sec, "Spin SCF Density"),
                                       dtype=float), nbf)
    zero = np.zeros((nbf, nbf))
    density = SpinResolvedDensity(p=p_tot, p_sx=zero.copy(), p_sy=zero.copy(),
                                  p_sz=p_spin)
    return system, density


_GD_BLOCKS = ("P", "PSX", "PSY", "PSZ")


def write_generalized_density(density, path):
    """Write all four density blocks in the generalized text format.

    Values are printed with enough digits to round-trip bit exactly.
    """
    nbf = density.nbasis
    blocks = {"P": density.p, "PSX": density.p_sx, "PSY": density.p_sy,
              "PSZ": density.p_sz}
    with open(path, "w") as fh:
        fh.write("# generalized spin-resolved density, format version 1\n")
        fh.write(f"nbasis {nbf}\n")
        for name in _GD_BLOCKS:
            fh.write(f"matrix {name}\n")
            for row in blocks[name]:
                fh.write(" ".join("%.17g" % v for v in row) + "\n")


def parse_generalized_density(source, nbasis=None):
    """Read a generalized density file; see write_generalized_density.

    If nbasis is given (from an already-parsed system) a mismatch raises
    MalformedFile before any matrix data is touched.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    lines = [ln for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0].split()[0] != "nbasis":
        raise MalformedFile("generalized density must start with 'nbasis N'")
    try:
        nbf = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise MalformedFile("unparseable nbasis line")
    if nbasis is not None and nbf != nbasis:
        raise MalformedFile(
            f"generalized density has {nbf} basis functions, but the "
            f"system has {nbasis}")
    blocks = {}
    i = 1
    for name in _GD_BLOCKS:
        if i >= len(lines) or lines[i].split() != ["matrix", name]:
            raise MalformedFile(f"expected 'matrix {name}' block")
        rows = lines[i + 1:i + 1 + nbf]
        if len(rows) < nbf:
            raise MalformedFile(f"matrix {name} truncated")
        try:
            m = np.array([[float(t) for t in r.split()] for r in rows])
        except ValueError:
            raise MalformedFile(f"unparseable value in matrix {name}")
        if m.shape != (nbf, nbf):
            raise MalformedFile(
                f"matrix {name} is {m.shape[0]}x{m.shape[1]}, "
                f"expected {nbf}x{nbf}")
        blocks[name] = m
        i += 1 + nbf
    return SpinResolvedDensity(p=blocks["P"], p_sx=blocks["PSX"],
                               p_sy=blocks["PSY"], p_sz=blocks["PSZ"])


def require_open_shell(system):
    """Reject inputs with no unpaired electrons."""
    if system.n_unpaired == 0:
        raise ClosedShellInput(
            "input has N_alpha = N_beta; spin contributions vanish for a "
            "closed-shell reference")
