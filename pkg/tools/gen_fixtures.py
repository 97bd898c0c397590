"""Generate the shipped formatted-checkpoint fixtures.

Each fixture is a minimal open-shell system with single-primitive s
shells, chosen so the spin density is an exact normalized Gaussian (or a
sum of two). Run from the repository root:

    python3 tools/gen_fixtures.py
"""

import os


def _int_section(label, value):
    return "%-40s   I     %12d\n" % (label, value)


def _int_array(label, values):
    out = "%-40s   I   N=%12d\n" % (label, len(values))
    for start in range(0, len(values), 6):
        row = values[start:start + 6]
        out += "".join("%12d" % v for v in row) + "\n"
    return out


def _real_array(label, values):
    out = "%-40s   R   N=%12d\n" % (label, len(values))
    for start in range(0, len(values), 5):
        row = values[start:start + 5]
        out += "".join("%16.8E" % v for v in row) + "\n"
    return out


def _packed_lower(mat):
    vals = []
    for i in range(len(mat)):
        for j in range(i + 1):
            vals.append(mat[i][j])
    return vals


def write_fchk(path, title, atoms, coords, shells, n_alpha, n_beta,
               p_total, p_spin, weights=None):
    """atoms: list of Z; coords: flat bohr list; shells: list of
    (l, atom_1based, [exponents], [coefficients])."""
    stypes = [sh[0] for sh in shells]
    smap = [sh[1] for sh in shells]
    nprim = [len(sh[2]) for sh in shells]
    exps = [e for sh in shells for e in sh[2]]
    coefs = [c for sh in shells for c in sh[3]]
    with open(path, "w") as fh:
        fh.write(title + "\n")
        fh.write("SP        UMODEL                 MODEL\n")
        fh.write(_int_section("Number of atoms", len(atoms)))
        fh.write(_int_section("Charge", 0))
        fh.write(_int_section("Multiplicity", n_alpha - n_beta + 1))
        fh.write(_int_section("Number of electrons", n_alpha + n_beta))
        fh.write(_int_section("Number of alpha electrons", n_alpha))
        fh.write(_int_section("Number of beta electrons", n_beta))
        fh.write(_int_section("Number of basis functions",
                              sum((l + 1) * (l + 2) // 2 for l in stypes)))
        fh.write(_int_array("Atomic numbers", atoms))
        if weights is not None:
            fh.write(_real_array("Real atomic weights", weights))
        fh.write(_real_array("Current cartesian coordinates", coords))
        fh.write(_int_array("Shell types", stypes))
        fh.write(_int_array("Number of primitives per shell", nprim))
        fh.write(_int_array("Shell to atom map", smap))
        fh.write(_real_array("Primitive exponents", exps))
        fh.write(_real_array("Contraction coefficients", coefs))
        fh.write(_real_array("Total SCF Density", _packed_lower(p_total)))
        fh.write(_real_array("Spin SCF Density", _packed_lower(p_spin)))


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    fixdir = os.path.join(here, os.pardir, "fixtures")
    os.makedirs(fixdir, exist_ok=True)

    # doublet: one H, one s primitive (alpha = 1); the reduced spin
    # density is the normalized Gaussian with exponent 2
    write_fchk(os.path.join(fixdir, "h_doublet.fchk"),
               "hydrogen-like doublet, single Gaussian model",
               atoms=[1], coords=[0.0, 0.0, 0.0],
               shells=[(0, 1, [1.0], [1.0])],
               n_alpha=1, n_beta=0,
               p_total=[[1.0]], p_spin=[[1.0]])

    # triplet: one O center, both unpaired electrons in the same broad
    # s function; reduced spin density = normalized Gaussian, exponent 0.7
    write_fchk(os.path.join(fixdir, "model_triplet.fchk"),
               "model triplet on an oxygen center",
               atoms=[8], coords=[0.0, 0.0, 0.0],
               shells=[(0, 1, [0.35], [1.0])],
               n_alpha=2, n_beta=0,
               p_total=[[2.0]], p_spin=[[2.0]])

    # homonuclear pair: one s shell per center, diagonal densities;
    # Tr(P S) = 3 = n_alpha + n_beta since the off-diagonal blocks vanish
    write_fchk(os.path.join(fixdir, "two_center_homo.fchk"),
               "homonuclear two-center doublet model",
               atoms=[7, 7],
               coords=[0.0, 0.0, -1.05, 0.0, 0.0, 1.05],
               shells=[(0, 1, [0.9], [1.0]), (0, 2, [0.9], [1.0])],
               n_alpha=2, n_beta=1,
               p_total=[[1.5, 0.0], [0.0, 1.5]],
               p_spin=[[0.5, 0.0], [0.0, 0.5]])

    # heteronuclear pair with explicit isotope weights (13C labeled)
    write_fchk(os.path.join(fixdir, "two_center_hetero.fchk"),
               "heteronuclear two-center doublet model",
               atoms=[6, 8],
               coords=[0.0, 0.0, -1.1, 0.0, 0.0, 1.1],
               shells=[(0, 1, [0.8], [1.0]), (0, 2, [1.1], [1.0])],
               n_alpha=2, n_beta=1,
               p_total=[[2.0, 0.0], [0.0, 1.0]],
               p_spin=[[0.7, 0.0], [0.0, 0.3]],
               weights=[13.003355, 15.994915])

    print("fixtures written to", os.path.normpath(fixdir))


if __name__ == "__main__":
    main()
