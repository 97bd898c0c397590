"""Cartesian Gaussian basis evaluation and analytic overlap.

Component ordering within a shell is lexicographic with x ranked first:
p -> x, y, z; d -> xx, xy, xz, yy, yz, zz; and so on through g. This is
the ordering the checkpoint densities are stored in.
"""

from dataclasses import dataclass

import numpy as np

from .ingest import MAX_ANGULAR_MOMENTUM

_DOUBLE_FACT = [1.0, 1.0, 3.0, 15.0, 105.0]  # (2l-1)!! for l = 0..4


def cartesian_components(l):
    """(lx, ly, lz) triples for angular momentum l, in storage order."""
    out = []
    for lx in range(l, -1, -1):
        for ly in range(l - lx, -1, -1):
            out.append((lx, ly, l - lx - ly))
    return out


_COMPONENTS = {l: cartesian_components(l)
               for l in range(MAX_ANGULAR_MOMENTUM + 1)}


def primitive_norm(alpha, l):
    """Common part of the primitive normalization, component factor aside."""
    return (2.0 * alpha / np.pi) ** 0.75 * (4.0 * alpha) ** (0.5 * l)


def component_norm_factors(l):
    """Per-component 1/sqrt((2lx-1)!!(2ly-1)!!(2lz-1)!!)."""
    return np.array([1.0 / np.sqrt(_DOUBLE_FACT[lx] * _DOUBLE_FACT[ly]
                                   * _DOUBLE_FACT[lz])
                     for lx, ly, lz in _COMPONENTS[l]])


@dataclass
class BasisEvaluation:
    """Basis values and gradients on a batch of points.

    values has shape (npts, nbf); gradients has shape (npts, 3, nbf) with
    the middle axis being the derivative direction.
    """

    values: np.ndarray
    gradients: np.ndarray


def eval_basis(system, points):
    """Evaluate every basis function and its gradient.

    points may be a single (3,) point or an (n, 3) batch; the result is
    batched either way (a single point becomes a batch of one).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    npts = pts.shape[0]
    nbf = system.nbasis
    values = np.empty((npts, nbf))
    gradients = np.empty((npts, 3, nbf))

    off = 0
    for sh in system.shells:
        l = sh.l
        center = system.positions[sh.atom]
        d = pts - center
        r2 = np.einsum("ij,ij->i", d, d)
        # radial part and its exponent-weighted companion
        norms = primitive_norm(sh.exponents, l) * sh.coefficients
        e = np.exp(-np.outer(r2, sh.exponents))
        s1 = e @ norms
        s2 = e @ (norms * sh.exponents)

        # powers of the displacement up to l+1 for the derivative terms
        lp = l + 2
        powx = np.ones((lp, npts))
        powy = np.ones((lp, npts))
        powz = np.ones((lp, npts))
        for k in range(1, lp):
            powx[k] = powx[k - 1] * d[:, 0]
            powy[k] = powy[k - 1] * d[:, 1]
            powz[k] = powz[k - 1] * d[:, 2]

        invdf = component_norm_factors(l)
        for ic, (lx, ly, lz) in enumerate(_COMPONENTS[l]):
            f = invdf[ic]
            mono = powx[lx] * powy[ly] * powz[lz]
            values[:, off + ic] = f * mono * s1
            gx = -2.0 * powx[lx + 1] * powy[ly] * powz[lz] * s2
            gy = -2.0 * powx[lx] * powy[ly + 1] * powz[lz] * s2
            gz = -2.0 * powx[lx] * powy[ly] * powz[lz + 1] * s2
            if lx:
                gx = gx + lx * powx[lx - 1] * powy[ly] * powz[lz] * s1
            if ly:
                gy = gy + ly * powx[lx] * powy[ly - 1] * powz[lz] * s1
            if lz:
                gz = gz + lz * powx[lx] * powy[ly] * powz[lz - 1] * s1
            gradients[:, 0, off + ic] = f * gx
            gradients[:, 1, off + ic] = f * gy
            gradients[:, 2, off + ic] = f * gz
        off += sh.dim
    return BasisEvaluation(values=values, gradients=gradients)


def _overlap_1d(la, lb, pa, pb, inv2p):
    """1D overlap table S[i, j] over x^i exp(..) x^j via upward recursion.

    pa, pb are (P-A) and (P-B) along the dimension; inv2p = 1/(2(a+b)).
    The Gaussian prefactor sqrt(pi/p) exp(-q AB^2) is applied by the caller.
    """
    s = np.zeros((la + 1, lb + 1))
    s[0, 0] = 1.0
    for i in range(1, la + 1):
        term = pa * s[i - 1, 0]
        if i > 1:
            term += (i - 1) * inv2p * s[i - 2, 0]
        s[i, 0] = term
    for j in range(1, lb + 1):
        for i in range(la + 1):
            term = pb * s[i, j - 1]
            if j > 1:
                term += (j - 1) * inv2p * s[i, j - 2]
            if i > 0:
                term += i * inv2p * s[i - 1, j - 1]
            s[i, j] = term
    return s


def overlap_matrix(system):
    """Analytic overlap of all (normalized) basis functions."""
    nbf = system.nbasis
    smat = np.zeros((nbf, nbf))
    offs = []
    off = 0
    for sh in system.shells:
        offs.append(off)
        off += sh.dim

    for ia, sha in enumerate(system.shells):
        la = sha.l
        ca = system.positions[sha.atom]
        compa = _COMPONENTS[la]
        fa = component_norm_factors(la)
        for ib, shb in enumerate(system.shells):
            if ib < ia:
                continue
            lb = shb.l
            cb = system.positions[shb.atom]
            compb = _COMPONENTS[lb]
            fb = component_norm_factors(lb)
            ab2 = float(np.dot(ca - cb, ca - cb))

            block = np.zeros((sha.dim, shb.dim))
            for ka, aa in enumerate(sha.exponents):
                na = primitive_norm(aa, la) * sha.coefficients[ka]
                for kb, bb in enumerate(shb.exponents):
                    nb = primitive_norm(bb, lb) * shb.coefficients[kb]
                    p = aa + bb
                    pref = na * nb * (np.pi / p) ** 1.5 \
                        * np.exp(-aa * bb / p * ab2)
                    pt = (aa * ca + bb * cb) / p
                    inv2p = 0.5 / p
                    tabs = [_overlap_1d(la, lb, pt[d] - ca[d], pt[d] - cb[d],
                                        inv2p) for d in range(3)]
                    for i, (lxa, lya, lza) in enumerate(compa):
                        for j, (lxb, lyb, lzb) in enumerate(compb):
                            block[i, j] += pref * tabs[0][lxa, lxb] \
                                * tabs[1][lya, lyb] * tabs[2][lza, lzb]
            block *= fa[:, None] * fb[None, :]
            smat[offs[ia]:offs[ia] + sha.dim,
                 offs[ib]:offs[ib] + shb.dim] = block
            if ib != ia:
                smat[offs[ib]:offs[ib] + shb.dim,
                     offs[ia]:offs[ia] + sha.dim] = block.T
    return smat


def electron_counts(system, density):
    """(N_total, N_spin) from Tr(P S) and Tr(P^Sz S) with analytic S."""
    s = overlap_matrix(system)
    return float(np.sum(density.p * s)), float(np.sum(density.p_sz * s))
