"""Command-line entry point.

Subcommands: shielding, hyperfine, magnetizability, map, diagnose,
thermo. Settings come from an optional plain-text config file (lines of
"key = value", '#' comments) overridden by flags; flags always win.
Results files embed a hash of the resolved configuration and the versions
of the shipped data tables.
"""

import argparse
import hashlib
import re
import sys
import warnings
from pathlib import Path

import numpy as np

from . import cube, thermo
from .cdt import MODES, CurrentField, divergence_diagnostic
from .constants import G_E, K_B, MU0_OVER_4PI, MU_B, SHIELDING_AU_TO_PPM
from .errors import DomainError, SpincurError
from .field import FieldEvaluator, build_reduced
from .grid import GRID_QUALITY, build_grid
from .ingest import (parse_fchk, parse_generalized_density,
                     require_open_shell)
from .observables import (SpinStatistics, biot_savart_moment,
                          hyperfine_from_moments, resolve_g_factor,
                          shielding_from_moments, spin_magnetizability,
                          write_results)
from .tables import SYMBOL_TO_Z, data_versions
from .zora import ZoraModel

MAP_FIELDS = ("spin_current", "shielding_density", "spin_density")

_CONFIG_KEYS = ("input", "density", "mode", "temp", "grid", "spin",
                "nuclei", "box", "spacing", "threads", "out",
                "with_soc_shielding", "gi", "chi_monomer", "chi_dimer",
                "delta_g", "kp", "pressure")


def read_config(path):
    """Parse the plain-text config file into a {key: string} dict."""
    cfg = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, val = line.split("=", 1)
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise DomainError(f"unparseable config line: {raw!r}")
            key, val = parts
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise DomainError(f"unknown config key {key!r}")
        cfg[key] = val.strip()
    return cfg


def _resolve(args, cfg, key, default=None, cast=str):
    """Flag value if given, else config file value, else default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in cfg:
        raw = cfg[key]
        if cast is bool:
            return raw.lower() in ("1", "true", "yes", "on")
        return cast(raw)
    return default


def parse_gi_overrides(entries):
    """'17O=-0.7575' style isotope g-factor overrides -> {(Z, A): g}."""
    out = {}
    for entry in entries or []:
        m = re.fullmatch(r"(\d+)([A-Za-z]{1,2})=([-+0-9.eE]+)", entry.strip())
        if not m:
            raise DomainError(
                f"bad --gi entry {entry!r}; expected e.g. 17O=-0.7575")
        sym = m.group(2).capitalize()
        if sym not in SYMBOL_TO_Z:
            raise DomainError(f"unknown element symbol in --gi: {sym!r}")
        out[(SYMBOL_TO_Z[sym], int(m.group(1)))] = float(m.group(3))
    return out


def _parse_nuclei(spec_str, natoms):
    if spec_str in (None, "", "all"):
        return list(range(natoms))
    try:
        idx = [int(t) for t in spec_str.replace(",", " ").split()]
    except ValueError:
        raise DomainError(f"bad nucleus selection {spec_str!r}")
    for i in idx:
        if not 0 <= i < natoms:
            raise DomainError(f"nucleus index {i} out of range 0..{natoms-1}")
    return idx


def _parse_box(spec_str):
    vals = [float(t) for t in spec_str.replace(",", " ").split()]
    if len(vals) != 6:
        raise DomainError("box needs six numbers: xmin,xmax,ymin,ymax,"
                          "zmin,zmax (bohr)")
    return ((vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5]))


class Run:
    """Everything assembled from one resolved configuration."""

    def __init__(self, args, cfg):
        self.input = _resolve(args, cfg, "input")
        if not self.input:
            raise DomainError("no input file given (flag --input or "
                              "config key input)")
        self.density_path = _resolve(args, cfg, "density")
        self.mode = _resolve(args, cfg, "mode", "SR")
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}; "
                              f"choose from {MODES}")
        self.temp = _resolve(args, cfg, "temp", 298.15, float)
        self.grid_quality = _resolve(args, cfg, "grid", "default")
        self.spin_override = _resolve(args, cfg, "spin", None, float)
        self.nuclei_spec = _resolve(args, cfg, "nuclei", "all")
        self.threads = _resolve(args, cfg, "threads", 1, int)
        self.out = Path(_resolve(args, cfg, "out", "."))
        self.with_soc_shielding = bool(_resolve(
            args, cfg, "with_soc_shielding", False, bool))
        gi_entries = getattr(args, "gi", None)
        if gi_entries is None and "gi" in cfg:
            gi_entries = cfg["gi"].split()
        self.gi_overrides = parse_gi_overrides(gi_entries)
        box_spec = _resolve(args, cfg, "box", None)
        self.box = _parse_box(box_spec) if box_spec else None
        self.spacing = _resolve(args, cfg, "spacing", 0.25, float)

        self.system, self.density = parse_fchk(self.input)
        if self.density_path:
            self.density = parse_generalized_density(
                self.density_path, nbasis=self.system.nbasis)
        else:
            require_open_shell(self.system)
        self.model = ZoraModel.for_system(self.system,
                                          nr_mode=(self.mode == "NR"))
        self.grid = build_grid(self.system, self.grid_quality)
        self.reduced = build_reduced(self.system, self.density, self.grid,
                                     threads=self.threads)
        self.current = CurrentField(self.reduced, self.model, self.system,
                                    mode=self.mode)
        spin = self.spin_override
        if spin is None:
            spin = round(2.0 * self.reduced.s_eff) / 2.0
        self.stats = SpinStatistics(spin=spin, temperature=self.temp)
        self.out.mkdir(parents=True, exist_ok=True)

    def nuclei(self):
        return _parse_nuclei(self.nuclei_spec, self.system.natoms)

    def config_dict(self):
        return {
            "input": str(self.input),
            "density": str(self.density_path or ""),
            "mode": self.mode,
            "temp": repr(self.temp),
            "grid": self.grid_quality,
            "spin": repr(self.stats.spin),
            "nuclei": str(self.nuclei_spec),
            "threads": str(self.threads),
            "with_soc_shielding": str(self.with_soc_shielding),
            "gi": ",".join(f"{z}:{a}={g}" for (z, a), g
                           in sorted(self.gi_overrides.items())),
            "box": str(self.box or "auto"),
            "spacing": repr(self.spacing),
        }

    def meta(self):
        blob = "\n".join(f"{k}={v}" for k, v in
                         sorted(self.config_dict().items()))
        digest = hashlib.sha256(blob.encode()).hexdigest()
        versions = data_versions()
        return {
            "config sha256": digest,
            "data versions": " ".join(f"{k}={v}" for k, v
                                      in sorted(versions.items())),
            "mode": self.mode,
            "temperature": self.temp,
            "spin": self.stats.spin,
            "grid": f"{self.grid_quality} ({self.grid.size} points)",
            "s_eff": f"{self.reduced.s_eff:.12g}",
        }

    def auto_box(self, margin=6.0):
        lo = self.system.positions.min(axis=0) - margin
        hi = self.system.positions.max(axis=0) + margin
        return tuple((lo[d], hi[d]) for d in range(3))


def _print_tensor(t, label):
    print(f"{label}: iso = {t.iso:.6f} {t.units}  "
          f"(zee {np.trace(t.zee) / 3.0:.6f}, "
          f"soc {np.trace(t.soc) / 3.0:.6f})")
    for row in t.components:
        print("    % .8e % .8e % .8e" % tuple(row))


def cmd_shielding(args, cfg):
    run = Run(args, cfg)
    if run.with_soc_shielding:
        warnings.warn(
            "including the spin-orbit term in shielding integrals; it "
            "diverges upon integration near the nucleus and converges "
            "poorly with grid quality")
    tensors = []
    print(f"spin shielding, mode {run.mode}, T = {run.temp} K, "
          f"S = {run.stats.spin}")
    for i in run.nuclei():
        w_zee, w_soc = biot_savart_moment(
            run.grid, run.current, run.system.positions[i],
            threads=run.threads)
        t = shielding_from_moments(w_zee, w_soc, run.stats, nucleus=i,
                                   mode=run.mode,
                                   include_soc=run.with_soc_shielding)
        tensors.append(t)
        _print_tensor(t, f"nucleus {i} ({run.system.symbol(i)})")
    out = run.out / "shielding_results.txt"
    write_results(out, tensors, run.meta())
    print(f"results written to {out}")
    return 0


def cmd_hyperfine(args, cfg):
    run = Run(args, cfg)
    tensors = []
    print(f"hyperfine coupling, mode {run.mode}")
    for i in run.nuclei():
        g_i = resolve_g_factor(run.system, i, overrides=run.gi_overrides)
        w_zee, w_soc = biot_savart_moment(
            run.grid, run.current, run.system.positions[i],
            threads=run.threads)
        t = hyperfine_from_moments(w_zee, w_soc, g_i, nucleus=i,
                                   mode=run.mode,
                                   include_soc=run.with_soc_shielding)
        tensors.append(t)
        _print_tensor(
            t, f"nucleus {i} ({run.system.mass_numbers[i]}"
               f"{run.system.symbol(i)}, g_I = {g_i})")
    out = run.out / "hyperfine_results.txt"
    write_results(out, tensors, run.meta())
    print(f"results written to {out}")
    return 0


def cmd_magnetizability(args, cfg):
    run = Run(args, cfg)
    t = spin_magnetizability(run.grid, run.current, run.stats,
                             include_soc=(run.mode != "NR"),
                             threads=run.threads)
    print(f"spin magnetizability, mode {run.mode}, T = {run.temp} K, "
          f"S = {run.stats.spin}")
    _print_tensor(t, "molecule")
    out = run.out / "magnetizability_results.txt"
    write_results(out, [t], run.meta())
    print(f"results written to {out}")
    return 0


def _map_chunks(npts):
    step = 8192
    for s in range(0, npts, step):
        yield s, min(s + step, npts)


def cmd_map(args, cfg):
    run = Run(args, cfg)
    field_name = args.field
    if field_name not in MAP_FIELDS:
        raise DomainError(f"unknown map field {field_name!r}; "
                          f"choose from {MAP_FIELDS}")
    box = run.box or run.auto_box()
    origin, counts, steps = cube.box_axes(box, run.spacing)
    inside = np.all((run.system.positions >= origin)
                    & (run.system.positions <= origin
                       + (counts - 1) * steps), axis=1)
    if not inside.any():
        warnings.warn("map box excludes every nucleus")
    pts = cube.box_points(origin, counts, steps)
    npts = pts.shape[0]

    header = f"units: atomic; mode {run.mode}; box in bohr"
    written = []
    if field_name == "spin_density":
        vals = np.empty(npts)
        fe = FieldEvaluator(run.system, run.density)
        for s, e in _map_chunks(npts):
            vals[s:e] = fe.sample(pts[s:e]).q[:, 2]
        path = run.out / "spin_density.cube"
        cube.write_cube(path, vals, origin, counts, steps, run.system,
                        comment=f"spin density Q_z; {header}")
        written.append(path)
    elif field_name == "spin_current":
        vals = np.empty((npts, 3))
        for s, e in _map_chunks(npts):
            sample = run.current.sample(pts[s:e])
            vals[s:e] = sample.total(include_soc=(run.mode != "NR"))[2]
        for d, name in enumerate("xyz"):
            path = run.out / f"spin_current_{name}.cube"
            cube.write_cube(path, vals[:, d], origin, counts, steps,
                            run.system,
                            comment=f"spin current J_{name} for field "
                                    f"along z; {header}")
            written.append(path)
    else:  # shielding_density
        nucleus = run.nuclei()[0]
        center = run.system.positions[nucleus]
        pref = MU0_OVER_4PI * G_E * MU_B * run.stats.spin \
            * (run.stats.spin + 1.0) / (3.0 * K_B * run.temp) \
            * SHIELDING_AU_TO_PPM
        vals = np.empty(npts)
        for s, e in _map_chunks(npts):
            sample = run.current.sample(pts[s:e])
            j = sample.j_zee
            if run.with_soc_shielding:
                j = j + sample.j_soc
            d = pts[s:e] - center
            d3 = np.linalg.norm(d, axis=1) ** 3
            acc = np.zeros(e - s)
            for b in range(3):
                acc += np.cross(d, j[b])[:, b]
            good = d3 > 0.0
            out = np.zeros(e - s)
            out[good] = acc[good] / d3[good]
            vals[s:e] = pref * out / 3.0
        path = run.out / "shielding_density.cube"
        cube.write_cube(path, vals, origin, counts, steps, run.system,
                        comment=f"isotropic shielding density, nucleus "
                                f"{nucleus}, ppm/bohr^3; {header}")
        written.append(path)
    for p in written:
        print(f"wrote {p}")
    return 0


def cmd_diagnose(args, cfg):
    run = Run(args, cfg)
    pos = run.system.positions
    # oblique directions keep every field component of the current alive,
    # so the normalized divergence stays well conditioned
    corners = np.array([[sx, sy, sz] for sx in (1, -1) for sy in (1, -1)
                        for sz in (1, -1)]) / np.sqrt(3.0)
    samples = []
    for i in range(run.system.natoms):
        for radius in (0.7, 1.2, 2.0):
            samples.append(pos[i] + radius * corners)
    mids = [0.5 * (pos[i] + pos[j]) + np.array([0.11, 0.07, 0.05])
            for i in range(run.system.natoms)
            for j in range(i + 1, run.system.natoms)]
    if mids:
        samples.append(np.array(mids))
    samples = np.concatenate(samples)

    report = divergence_diagnostic(run.current, samples)
    print(f"continuity diagnostic, mode {run.mode}, "
          f"{samples.shape[0]} sample points")
    for term in ("zee", "soc"):
        worst = report[term].max(axis=1)
        print(f"  {term} term: max normalized divergence per field "
              f"direction = %.3e %.3e %.3e" % tuple(worst))

    # informational: how different the relativistic current actually is
    sr = CurrentField(run.reduced, ZoraModel.for_system(run.system),
                      run.system, mode="SR").sample(samples)
    nr = CurrentField(run.reduced,
                      ZoraModel.for_system(run.system, nr_mode=True),
                      run.system, mode="NR").sample(samples)
    diff = sr.total() - nr.total()
    denom = np.sqrt(np.mean(sr.total() ** 2))
    rms = np.sqrt(np.mean(diff ** 2)) / denom if denom > 0 else 0.0
    print(f"  NR vs SR current RMS relative difference: {rms:.3e}")
    return 0


def cmd_thermo(args, cfg):
    temp = _resolve(args, cfg, "temp", None, float)
    chi_m = _resolve(args, cfg, "chi_monomer", None, float)
    chi_d = _resolve(args, cfg, "chi_dimer", None, float)
    delta_g = _resolve(args, cfg, "delta_g", None, float)
    k_p = _resolve(args, cfg, "kp", None, float)
    pressure = _resolve(args, cfg, "pressure", 1.0, float)
    out_dir = Path(_resolve(args, cfg, "out", "."))
    if temp is None or chi_m is None or chi_d is None:
        raise DomainError("thermo needs --temp, --chi-monomer and "
                          "--chi-dimer (or config equivalents)")
    model = thermo.EquilibriumModel(chi_monomer=chi_m, chi_dimer=chi_d,
                                    temperature=temp, pressure=pressure,
                                    delta_g_kj=delta_g, k_p=k_p)
    kp_val = model.equilibrium_constant()
    alpha = model.alpha()
    chi_mix = thermo.mixture_chi(model)
    print(f"K_p = {kp_val:.6f}")
    print(f"alpha = {alpha:.6f}")
    print(f"chi_mix = {chi_mix:.4f}")
    out_dir.mkdir(parents=True, exist_ok=True)
    out = out_dir / "thermo_results.txt"
    with open(out, "w") as fh:
        fh.write("# monomer-dimer equilibrium averaging\n")
        fh.write(f"# inputs: T={temp} P={pressure} chi_monomer={chi_m} "
                 f"chi_dimer={chi_d} delta_g={delta_g} kp={k_p}\n")
        fh.write(f"K_p {kp_val:.10g}\n")
        fh.write(f"alpha {alpha:.10g}\n")
        fh.write(f"chi_mix {chi_mix:.10g}\n")
    print(f"results written to {out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spincur",
        description="Spin contributions to NMR shielding, hyperfine "
                    "coupling and magnetizability from ZORA spin current "
                    "densities.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="plain-text config file "
                                         "(key = value); flags win")
    common.add_argument("--input", help="formatted checkpoint file")
    common.add_argument("--density",
                        help="generalized spin-resolved density file "
                             "overriding the checkpoint densities")
    common.add_argument("--mode", choices=MODES,
                        help="physics mode (default SR)")
    common.add_argument("--temp", type=float, help="temperature in K")
    common.add_argument("--grid", choices=sorted(GRID_QUALITY),
                        help="grid quality (default 'default')")
    common.add_argument("--spin", type=float,
                        help="override the spin quantum number S")
    common.add_argument("--nuclei",
                        help="comma-separated nucleus indices, or 'all'")
    common.add_argument("--box",
                        help="map box xmin,xmax,ymin,ymax,zmin,zmax (bohr)")
    common.add_argument("--spacing", type=float,
                        help="map voxel spacing in bohr (default 0.25)")
    common.add_argument("--threads", type=int,
                        help="worker threads for grid integration")
    common.add_argument("--out", help="output directory (default '.')")
    common.add_argument("--with-soc-shielding", action="store_true",
                        default=None, dest="with_soc_shielding",
                        help="include the spin-orbit term in shielding/"
                             "hyperfine integrals (diverges; warns)")
    common.add_argument("--gi", action="append",
                        help="nuclear g-factor override, e.g. 17O=-0.7575 "
                             "(repeatable)")

    sub.add_parser("shielding", parents=[common],
                   help="spin shielding tensors").set_defaults(
        func=cmd_shielding)
    sub.add_parser("hyperfine", parents=[common],
                   help="hyperfine coupling tensors").set_defaults(
        func=cmd_hyperfine)
    sub.add_parser("magnetizability", parents=[common],
                   help="spin magnetizability tensor").set_defaults(
        func=cmd_magnetizability)
    p_map = sub.add_parser("map", parents=[common],
                           help="volumetric field maps (cube files)")
    p_map.add_argument("field", choices=MAP_FIELDS)
    p_map.set_defaults(func=cmd_map)
    sub.add_parser("diagnose", parents=[common],
                   help="continuity diagnostics").set_defaults(
        func=cmd_diagnose)
    p_th = sub.add_parser("thermo", parents=[common],
                          help="monomer-dimer equilibrium averaging")
    p_th.add_argument("--chi-monomer", type=float, dest="chi_monomer")
    p_th.add_argument("--chi-dimer", type=float, dest="chi_dimer")
    p_th.add_argument("--delta-g", type=float, dest="delta_g",
                      help="dissociation free energy, kJ/mol")
    p_th.add_argument("--kp", type=float, help="equilibrium constant")
    p_th.add_argument("--pressure", type=float,
                      help="total pressure in standard-state units")
    p_th.set_defaults(func=cmd_thermo)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = read_config(args.config) if args.config else {}
    try:
        return args.func(args, cfg)
    except SpincurError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
