#!/usr/bin/env python3
"""Generate the shipped erf-fit atomic potential table (H..Xe).

Each element's electronic screening is modeled as one spherical Gaussian
charge distribution per occupied Slater shell group: the group's STO
exponent xi comes from Slater's screening rules, and the Gaussian exponent
alpha is fixed by matching <r^2> of the STO shell,

    <r^2>_STO = (n* + 1)(2 n* + 1) / (2 xi^2),   <r^2>_Gauss = 3/(2 alpha)
    =>  alpha = 3 xi^2 / ((n* + 1)(2 n* + 1))

with n* the effective principal quantum number (1, 2, 3, 3.7, 4.0 for
n = 1..5). Coefficients are c_i = -(group occupancy), so sum(c_i) = -Z for
a neutral atom: the potential is strictly negative, finite at the nucleus,
and decays to zero Gaussian-fast at long range.

Run from the repository root:

    python3 tools/gen_potential_table.py > src/spincur/data/erf_potentials.txt
"""

import sys

# Aufbau order with the usual d-block exceptions through Xe.
_EXCEPTIONS = {
    24: "1s2 2s2 2p6 3s2 3p6 3d5 4s1",    # Cr
    29: "1s2 2s2 2p6 3s2 3p6 3d10 4s1",   # Cu
    41: "1s2 2s2 2p6 3s2 3p6 3d10 4s2 4p6 4d4 5s1",   # Nb
    42: "1s2 2s2 2p6 3s2 3p6 3d10 4s2 4p6 4d5 5s1",   # Mo
    44: "1s2 2s2 2p6 3s2 3p6 3d10 4s2 4p6 4d7 5s1",   # Ru
    45: "1s2 2s2 2p6 3s2 3p6 3d10 4s2 4p6 4d8 5s1",   # Rh
    46: "1s2 2s2 2p6 3s2 3p6 3d10 4s2 4p6 4d10",      # Pd
    47: "1s2 2s2 2p6 3s2 3p6 3d10 4s2 4p6 4d10 5s1",  # Ag
}

_AUFBAU = ["1s", "2s", "2p", "3s", "3p", "4s", "3d", "4p", "5s", "4d", "5p"]
_CAPACITY = {"s": 2, "p": 6, "d": 10, "f": 14}
_N_STAR = {1: 1.0, 2: 2.0, 3: 3.0, 4: 3.7, 5: 4.0}


def configuration(z):
    if z in _EXCEPTIONS:
        out = []
        for tok in _EXCEPTIONS[z].split():
            out.append((int(tok[0]), tok[1], int(tok[2:])))
        return out
    left = z
    out = []
    for sub in _AUFBAU:
        if left == 0:
            break
        n, l = int(sub[0]), sub[1]
        occ = min(left, _CAPACITY[l])
        out.append((n, l, occ))
        left -= occ
    return out


def slater_groups(config):
    """Collapse a configuration into Slater groups [(n, kind, occ), ...].

    kind is 'sp' for the merged ns,np group, or 'd'/'f'. 1s is its own
    group. Order follows increasing n, with d/f of shell n placed after
    the (n)sp group, matching the inner/outer bookkeeping below.
    """
    groups = {}
    for n, l, occ in config:
        key = (n, "sp") if l in "sp" else (n, l)
        groups[key] = groups.get(key, 0) + occ
    order = sorted(groups, key=lambda k: (k[0], 0 if k[1] == "sp" else 1))
    return [(n, kind, groups[(n, kind)]) for n, kind in order]


def screening(groups, idx):
    """Slater screening constant for group idx."""
    n, kind, occ = groups[idx]
    if kind == "sp":
        s = (0.30 if n == 1 else 0.35) * (occ - 1)
        for j, (nj, kindj, occj) in enumerate(groups):
            if j == idx:
                continue
            if nj == n and kindj != "sp":
                # d/f of the same n sit *outside* the sp group
                continue
            if nj == n - 1:
                s += 0.85 * occj
            elif nj < n - 1:
                s += 1.00 * occj
        return s
    # d or f group: 0.35 within, 1.00 for everything further in
    # (including s,p of the same n)
    s = 0.35 * (occ - 1)
    for j, (nj, kindj, occj) in enumerate(groups):
        if j == idx:
            continue
        inner = nj < n or (nj == n and kindj == "sp")
        if inner:
            s += 1.00 * occj
    return s


def shell_gaussians(z):
    """Return [(c_i, alpha_i), ...] for element z."""
    groups = slater_groups(configuration(z))
    pairs = []
    for idx, (n, kind, occ) in enumerate(groups):
        xi = (z - screening(groups, idx)) / _N_STAR[n]
        if xi <= 0:
            raise ValueError(f"non-positive Slater exponent for Z={z}")
        ns = _N_STAR[n]
        alpha = 3.0 * xi * xi / ((ns + 1.0) * (2.0 * ns + 1.0))
        pairs.append((-float(occ), alpha))
    return pairs


def main():
    out = sys.stdout
    out.write("# erf-fit atomic potential table, version 1\n")
    out.write("# V_el(r) = -sum_i c_i erf(sqrt(alpha_i) d)/d per atom, d = |r - R_I|\n")
    out.write("# One Gaussian per Slater shell group: exponents from Slater's rules\n")
    out.write("# matched to the STO <r^2>; c_i = -(shell occupancy) so sum c_i = -Z.\n")
    out.write("# Generated by tools/gen_potential_table.py. Units: bohr^-2.\n")
    out.write("# record: Z k c_1 alpha_1 ... c_k alpha_k\n")
    for z in range(1, 55):
        pairs = shell_gaussians(z)
        fields = [str(z), str(len(pairs))]
        for c, a in pairs:
            fields.append(f"{c:.1f}")
            fields.append(f"{a:.10g}")
        out.write(" ".join(fields) + "\n")


if __name__ == "__main__":
    main()
