"""Real-space spin magnetization fields.

The density matrices from ingest are contracted with the basis on point
batches to give the spin magnetization components Q_a(r) = (hbar/2)
sum_pq P^{S_a}_pq chi_p(r) chi_q(r), their gradients, and the reduced
spin density Q_S used by the current-density expressions.

Everything downstream only needs the duck type SpinDensityModel.sample:
any object with sample(points, with_delta) returning a ReducedSample can
drive the currents, which is how the analytic model densities plug in.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .basis import eval_basis
from .errors import ClosedShellInput
from .grid import integrate_chunks

HBAR = 1.0

S_EFF_FLOOR = 1e-6


@dataclass
class SpinFieldSample:
    """Q_a and derivatives on a batch of points.

    q has shape (n, 3) (components x, y, z of the magnetization vector);
    grad_q has shape (n, 3, 3) with grad_q[:, a, d] = d Q_a / d r_d.
    """

    density: np.ndarray    # (n,) total electron density
    q: np.ndarray
    grad_q: np.ndarray

    def curl_q(self):
        """curl of the magnetization vector field, (n, 3)."""
        g = self.grad_q
        return np.stack([g[:, 2, 1] - g[:, 1, 2],
                         g[:, 0, 2] - g[:, 2, 0],
                         g[:, 1, 0] - g[:, 0, 1]], axis=1)


class FieldEvaluator:
    """Contracts density matrices with the basis on demand."""

    def __init__(self, system, density):
        if density.nbasis != system.nbasis:
            raise ValueError(
                f"density has {density.nbasis} basis functions, "
                f"system has {system.nbasis}")
        self.system = system
        self.density = density

    def sample(self, points):
        ev = eval_basis(self.system, points)
        vals, grads = ev.values, ev.gradients
        npts = vals.shape[0]
        q = np.zeros((npts, 3))
        grad_q = np.zeros((npts, 3, 3))

        t_tot = vals @ self.density.p
        dens = np.einsum("np,np->n", t_tot, vals)

        mats = (self.density.p_sx, self.density.p_sy, self.density.p_sz)
        for a, mat in enumerate(mats):
            if a < 2 and self.density.collinear:
                continue
            t = vals @ mat
            q[:, a] = 0.5 * HBAR * np.einsum("np,np->n", t, vals)
            # gradient: both orbital factors differentiate, matrix symmetric
            grad_q[:, a, :] = HBAR * np.einsum("ndp,np->nd", grads, t)
        return SpinFieldSample(density=dens, q=q, grad_q=grad_q)


@dataclass
class ReducedSample:
    """Directional reduced spin densities on a batch of points.

    qs[b] is Q_S^beta for the field direction beta = x, y, z and grad_qs[b]
    its gradient; with the transverse corrections off all three rows are
    the same collinear Q_S.
    """

    qs: np.ndarray        # (3, n)
    grad_qs: np.ndarray   # (3, n, 3)


class ReducedSpinDensity:
    """Q_S = Q_z / S_eff plus the transverse corrections Delta Q_{x,y}.

    S_eff is the normalization sqrt(sum_a (int Q_a dV)^2) fixed by the
    parent grid at construction; sample() then serves pointwise values.
    """

    def __init__(self, evaluator, s_eff, collinear):
        self.evaluator = evaluator
        self.s_eff = s_eff
        self.collinear = collinear

    def sample(self, points, with_delta=False):
        fs = self.evaluator.sample(points)
        inv = 1.0 / self.s_eff
        qs_z = fs.q[:, 2] * inv
        gqs_z = fs.grad_q[:, 2, :] * inv
        npts = qs_z.shape[0]
        qs = np.empty((3, npts))
        grad_qs = np.empty((3, npts, 3))
        if with_delta and not self.collinear:
            for b in range(2):
                qs[b] = qs_z + fs.q[:, b] * inv
                grad_qs[b] = gqs_z + fs.grad_q[:, b, :] * inv
        else:
            qs[0] = qs[1] = qs_z
            grad_qs[0] = grad_qs[1] = gqs_z
        qs[2] = qs_z
        grad_qs[2] = gqs_z
        return ReducedSample(qs=qs, grad_qs=grad_qs)


def build_reduced(system, density, grid, threads=1):
    """Normalize the spin magnetization on a grid.

    Integrates each Q_a, forms S_eff, and rejects effectively closed-shell
    inputs (S_eff below 1e-6).
    """
    evaluator = FieldEvaluator(system, density)

    def chunk_moments(points, weights):
        fs = evaluator.sample(points)
        return weights @ fs.q

    moments = integrate_chunks(grid, chunk_moments, threads=threads)
    s_eff = float(np.sqrt(np.dot(moments, moments)))
    if s_eff < S_EFF_FLOOR:
        raise ClosedShellInput(
            f"integrated spin magnitude {s_eff:.3e} is below {S_EFF_FLOOR}; "
            "the input is effectively closed shell")
    return ReducedSpinDensity(evaluator, s_eff, density.collinear)


class GaussianModelDensity:
    """Normalized analytic stand-in: Q_S(r) = (a/pi)^(3/2) exp(-a |r-c|^2).

    Integrates to one, so it behaves like a fully reduced spin density for
    one unpaired electron. Useful for closed-form checks; satisfies the
    same sample() contract as ReducedSpinDensity.
    """

    def __init__(self, center=(0.0, 0.0, 0.0), exponent=1.0):
        self.center = np.asarray(center, dtype=float)
        self.exponent = float(exponent)
        self.s_eff = 1.0
        self.collinear = True

    def value(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        d = pts - self.center
        r2 = np.einsum("ij,ij->i", d, d)
        return (self.exponent / np.pi) ** 1.5 * np.exp(-self.exponent * r2)

    def sample(self, points, with_delta=False):
        if with_delta:
            warnings.warn("model density is collinear; transverse "
                          "corrections are zero")
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        q = self.value(pts)
        grad = -2.0 * self.exponent * (pts - self.center) * q[:, None]
        qs = np.broadcast_to(q, (3,) + q.shape).copy()
        grad_qs = np.broadcast_to(grad, (3,) + grad.shape).copy()
        return ReducedSample(qs=qs, grad_qs=grad_qs)
