"""Gaussian cube file output for scalar fields on rectangular boxes.

Orthogonal axes only; values are written in the conventional z-fastest
order, six per line. The reader exists mainly so tests can round-trip.
"""

import numpy as np

from .errors import DomainError, MalformedFile


def box_axes(box, spacing):
    """Voxel layout for an axis-aligned box.

    box is ((xmin, xmax), (ymin, ymax), (zmin, zmax)) in bohr; spacing is
    the target step. Returns (origin, counts, steps) with counts chosen so
    the step never exceeds the requested spacing.
    """
    if spacing <= 0.0:
        raise DomainError(f"spacing must be positive, got {spacing}")
    origin = np.empty(3)
    counts = np.empty(3, dtype=int)
    steps = np.empty(3)
    for d, (lo, hi) in enumerate(box):
        if hi <= lo:
            raise DomainError(f"box is empty along axis {d}: [{lo}, {hi}]")
        n = max(2, int(np.ceil((hi - lo) / spacing)) + 1)
        origin[d] = lo
        counts[d] = n
        steps[d] = (hi - lo) / (n - 1)
    return origin, counts, steps


def box_points(origin, counts, steps):
    """All voxel centers in z-fastest order, shape (nx*ny*nz, 3)."""
    ax = [origin[d] + steps[d] * np.arange(counts[d]) for d in range(3)]
    gx, gy, gz = np.meshgrid(*ax, indexing="ij")
    return np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)


def write_cube(path, data, origin, counts, steps, system=None, comment=""):
    """Write one scalar field; data is flat in z-fastest order."""
    data = np.asarray(data, dtype=float).ravel()
    if data.size != int(np.prod(counts)):
        raise DomainError(
            f"data has {data.size} values for a "
            f"{counts[0]}x{counts[1]}x{counts[2]} box")
    natoms = system.natoms if system is not None else 0
    with open(path, "w") as fh:
        fh.write((comment or "scalar field") + "\n")
        fh.write("generated by spincur\n")
        fh.write("%5d %11.6f %11.6f %11.6f\n"
                 % (natoms, origin[0], origin[1], origin[2]))
        for d in range(3):
            vec = [0.0, 0.0, 0.0]
            vec[d] = steps[d]
            fh.write("%5d %11.6f %11.6f %11.6f\n"
                     % (counts[d], vec[0], vec[1], vec[2]))
        if system is not None:
            for i in range(natoms):
                z = int(system.atomic_numbers[i])
                p = system.positions[i]
                fh.write("%5d %11.6f %11.6f %11.6f %11.6f\n"
                         % (z, float(z), p[0], p[1], p[2]))
        for start in range(0, data.size, 6):
            chunk = data[start:start + 6]
            fh.write(" ".join("%12.5e" % v for v in chunk) + "\n")


def read_cube(path):
    """Read a cube written by write_cube.

    Returns (data, origin, counts, steps) with data flat in z-fastest
    order. Only orthogonal voxel axes are accepted.
    """
    with open(path) as fh:
        lines = fh.read().splitlines()
    if len(lines) < 6:
        raise MalformedFile("cube file too short")
    try:
        natoms = int(lines[2].split()[0])
        origin = np.array([float(t) for t in lines[2].split()[1:4]])
        counts = np.empty(3, dtype=int)
        steps = np.empty(3)
        for d in range(3):
            tok = lines[3 + d].split()
            counts[d] = int(tok[0])
            vec = np.array([float(t) for t in tok[1:4]])
            if np.count_nonzero(vec) != 1 or vec[d] == 0.0:
                raise MalformedFile("cube axes must be orthogonal")
            steps[d] = vec[d]
        vals = []
        for ln in lines[6 + natoms:]:
            vals.extend(float(t) for t in ln.split())
    except (ValueError, IndexError) as exc:
        raise MalformedFile(f"unparseable cube file: {exc}") from exc
    data = np.array(vals)
    if data.size != int(np.prod(counts)):
        raise MalformedFile("cube data does not fill the declared box")
    return data, origin, counts, steps
