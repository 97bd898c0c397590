"""Checkpoint parsing, the generalized density sidecar format, and the
input validation paths."""

import numpy as np
import pytest

from conftest import FIXTURES
from gen_fixtures import write_fchk

from spincur.ingest import (MalformedFile, SpinResolvedDensity,
                            UnsupportedShell, parse_fchk,
                            parse_generalized_density, require_open_shell,
                            write_generalized_density)
from spincur.errors import ClosedShellInput


def test_h_doublet_contents(h_doublet):
    sys_, dens = h_doublet
    assert sys_.natoms == 1
    assert sys_.atomic_numbers[0] == 1
    assert sys_.n_alpha == 1 and sys_.n_beta == 0
    assert sys_.nbasis == 1
    assert len(sys_.shells) == 1
    sh = sys_.shells[0]
    assert sh.l == 0 and sh.atom == 0
    assert sh.exponents[0] == pytest.approx(1.0)
    np.testing.assert_allclose(dens.p, [[1.0]])
    np.testing.assert_allclose(dens.p_sz, [[1.0]])
    assert dens.collinear


def test_mass_numbers_default_and_override(h_doublet, two_center_hetero):
    sys_h, _ = h_doublet
    assert sys_h.mass_numbers[0] == 1  # most abundant isotope default
    sys_co, _ = two_center_hetero
    # explicit weights 13.003355 / 15.994915 round to 13C and 16O
    assert list(sys_co.mass_numbers) == [13, 16]


def test_symbols(two_center_hetero):
    sys_, _ = two_center_hetero
    assert sys_.symbol(0) == "C"
    assert sys_.symbol(1) == "O"


def test_n_unpaired(two_center_homo):
    sys_, _ = two_center_homo
    assert sys_.n_unpaired == 1


def test_sp_shell_rejected(tmp_path):
    path = tmp_path / "sp.fchk"
    write_fchk(path, "sp shell", atoms=[6], coords=[0.0, 0.0, 0.0],
               shells=[(-1, 1, [0.5], [1.0])], n_alpha=1, n_beta=0,
               p_total=[[1.0]], p_spin=[[1.0]])
    with pytest.raises(UnsupportedShell) as err:
        parse_fchk(path)
    assert "shell 0" in str(err.value)


def test_spherical_shell_rejected(tmp_path):
    path = tmp_path / "sph.fchk"
    write_fchk(path, "spherical d", atoms=[6], coords=[0.0, 0.0, 0.0],
               shells=[(-2, 1, [0.5], [1.0])], n_alpha=1, n_beta=0,
               p_total=[[1.0]], p_spin=[[1.0]])
    with pytest.raises(UnsupportedShell):
        parse_fchk(path)


def test_high_angular_momentum_rejected(tmp_path):
    path = tmp_path / "h5.fchk"
    nb = 6 * 7 // 2
    p = np.zeros((nb, nb))
    p[0, 0] = 1.0
    write_fchk(path, "h shell", atoms=[6], coords=[0.0, 0.0, 0.0],
               shells=[(5, 1, [0.5], [1.0])], n_alpha=1, n_beta=0,
               p_total=p, p_spin=p)
    with pytest.raises(UnsupportedShell):
        parse_fchk(path)


def test_beta_excess_message(tmp_path):
    path = tmp_path / "flip.fchk"
    write_fchk(path, "beta-heavy", atoms=[1], coords=[0.0, 0.0, 0.0],
               shells=[(0, 1, [1.0], [1.0])], n_alpha=0, n_beta=1,
               p_total=[[1.0]], p_spin=[[-1.0]])
    with pytest.raises(MalformedFile) as err:
        parse_fchk(path)
    assert "flip the spin" in str(err.value)


def test_missing_section(tmp_path):
    lines = (FIXTURES / "h_doublet.fchk").read_text().splitlines(keepends=True)
    idx = next(i for i, ln in enumerate(lines)
               if ln.startswith("Spin SCF Density"))
    del lines[idx:idx + 2]  # header and its single data line
    path = tmp_path / "nospin.fchk"
    path.write_text("".join(lines))
    with pytest.raises(MalformedFile) as err:
        parse_fchk(path)
    assert "Spin SCF Density" in str(err.value)


def test_truncated_array(tmp_path):
    src = (FIXTURES / "two_center_homo.fchk").read_text()
    lines = src.splitlines(keepends=True)
    idx = next(i for i, ln in enumerate(lines)
               if ln.startswith("Primitive exponents"))
    # claim two values but deliver one
    lines[idx + 1] = "  9.00000000E-01\n"
    path = tmp_path / "short.fchk"
    path.write_text("".join(lines))
    with pytest.raises(MalformedFile):
        parse_fchk(path)


def test_density_dimension_mismatch(tmp_path):
    path = tmp_path / "dim.fchk"
    write_fchk(path, "bad dims", atoms=[1], coords=[0.0, 0.0, 0.0],
               shells=[(0, 1, [1.0], [1.0])], n_alpha=1, n_beta=0,
               p_total=[[1.0, 0.0], [0.0, 1.0]], p_spin=[[1.0]])
    with pytest.raises(MalformedFile):
        parse_fchk(path)


def test_generalized_density_roundtrip(tmp_path, two_center_hetero):
    _, dens = two_center_hetero
    rng = np.random.default_rng(7)
    noise = rng.standard_normal((2, 2))
    full = SpinResolvedDensity(
        p=dens.p, p_sx=0.01 * (noise + noise.T),
        p_sy=0.02 * (noise - noise.T), p_sz=dens.p_sz)
    path = tmp_path / "dens.txt"
    write_generalized_density(full, path)
    back = parse_generalized_density(path)
    # %.17g round-trips IEEE doubles exactly
    assert np.array_equal(back.p, full.p)
    assert np.array_equal(back.p_sx, full.p_sx)
    assert np.array_equal(back.p_sy, full.p_sy)
    assert np.array_equal(back.p_sz, full.p_sz)
    assert not back.collinear


def test_generalized_density_nbasis_check(tmp_path, two_center_hetero):
    _, dens = two_center_hetero
    path = tmp_path / "dens.txt"
    write_generalized_density(dens, path)
    with pytest.raises(MalformedFile):
        parse_generalized_density(path, nbasis=3)


def test_generalized_density_collinear_roundtrip(tmp_path, h_doublet):
    _, dens = h_doublet
    path = tmp_path / "dens.txt"
    write_generalized_density(dens, path)
    back = parse_generalized_density(path, nbasis=1)
    assert back.collinear
    assert np.array_equal(back.p_sz, dens.p_sz)


def test_require_open_shell(tmp_path):
    path = tmp_path / "closed.fchk"
    write_fchk(path, "closed shell", atoms=[2], coords=[0.0, 0.0, 0.0],
               shells=[(0, 1, [1.0], [1.0])], n_alpha=1, n_beta=1,
               p_total=[[2.0]], p_spin=[[0.0]])
    sys_, _ = parse_fchk(path)
    with pytest.raises(ClosedShellInput):
        require_open_shell(sys_)
