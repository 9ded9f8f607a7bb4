"""Command-line interface.

    rhps-sim spectrum    --config cfg.json --out out.csv
    rhps-sim coincidence --config cfg.json --out out.csv
    rhps-sim sweep       --config cfg.json --out outdir
    rhps-sim modes       --config cfg.json --out out.csv --window -30 10
    rhps-sim greens-probe --config cfg.json --out out.csv --omega 3190
                          --kpar 0.0 --zp 100 [--pol V]

CSV columns are documented per subcommand in the README; each file starts
with a `# fingerprint:` line identifying the configuration.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .greens import GreensKernel
from .linear_response import find_coupled_modes
from .basis import truncate_basis
from .materials import HBAR_C
from .sweeps import (SweepResult, SweepSpec, angle_to_kpar,
                     coincidence_sweep, one_photon_sweep, thickness_sweep)


def _load(args):
    cfg = cfgmod.load_config(args.config)
    return cfg, cfgmod.fingerprint(cfg)


def cmd_spectrum(args) -> int:
    cfg, fp = _load(args)
    scn = cfgmod.build_scenario(cfg)
    sp = cfg["spectrum"]
    grid = SweepSpec.linspace("omega", sp["omega_min_rel"],
                              sp["omega_max_rel"], sp["count"])
    out = Path(args.out)
    results = []
    for th in sp["theta_deg"]:
        r = one_photon_sweep(scn, grid, tuple(sp["detectors"]), th,
                             fingerprint=fp)
        results.append((th, r))
    _write_multi(out, results, "theta_deg")
    return 0


def cmd_coincidence(args) -> int:
    cfg, fp = _load(args)
    scn = cfgmod.build_scenario(cfg)
    sp = cfg["spectrum"]
    grid = SweepSpec.linspace("omega", sp["omega_min_rel"],
                              sp["omega_max_rel"], sp["count"])
    pairs = tuple((p[0], p[1]) for p in sp["pairs"])
    out = Path(args.out)
    results = []
    for th in sp["theta_deg"]:
        r = coincidence_sweep(scn, grid, pairs, th, fingerprint=fp)
        results.append((th, r))
    _write_multi(out, results, "theta_deg")
    return 0


def _write_multi(out: Path, results, label: str) -> None:
    if len(results) == 1:
        results[0][1].to_csv(out)
        results[0][1].write_manifest(out.with_suffix(".manifest.json"))
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    for key, r in results:
        stem = out.with_suffix("")
        path = Path(f"{stem}_{label}{key:g}{out.suffix or '.csv'}")
        r.to_csv(path)
        r.write_manifest(path.with_suffix(".manifest.json"))


def cmd_sweep(args) -> int:
    cfg, fp = _load(args)
    scn = cfgmod.build_scenario(cfg)
    spec = cfgmod.build_sweep_spec(cfg)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    if spec.variable == "thickness":
        res = thickness_sweep(scn, spec,
                              normalize_ideal=cfg["sweep"].get(
                                  "normalize_ideal", True),
                              fingerprint=fp)
    else:
        res = one_photon_sweep(scn, spec, tuple(cfg["spectrum"]["detectors"]),
                               cfg["spectrum"]["theta_deg"][0],
                               fingerprint=fp)
    res.to_csv(outdir / "sweep.csv")
    res.write_manifest(outdir / "run.manifest.jsonl")
    return 0


def cmd_modes(args) -> int:
    cfg, fp = _load(args)
    scn = cfgmod.build_scenario(cfg)
    stack = scn.build_stack()
    lo, hi = args.window
    window = (scn.exc.hw_t + lo, scn.exc.hw_t + hi)
    kpar = angle_to_kpar(scn.exc, math.radians(args.theta))
    basis = truncate_basis(scn.exc, stack.d, kpar, scn.e_cut, scn.max_m)
    rows = []
    for sector in args.sectors:
        for md in find_coupled_modes(stack, basis, scn.exc, kpar, window,
                                     sector):
            rows.append((kpar, sector, md.resonance - scn.exc.hw_t,
                         md.width, md.dominant_m))
    res = SweepResult("mode", ("kpar", "sector", "resonance_rel_wT",
                               "width", "dominant_m"), fingerprint=fp)
    for r in rows:
        res.add(*r)
    res.to_csv(args.out)
    return 0


def cmd_greens_probe(args) -> int:
    cfg, fp = _load(args)
    scn = cfgmod.build_scenario(cfg)
    stack = scn.build_stack()
    kern = GreensKernel(stack, args.omega, args.kpar)
    zs = np.linspace(args.zmin if args.zmin is not None else -stack.d,
                     args.zmax if args.zmax is not None else 2 * stack.d,
                     args.count)
    res = SweepResult("z", ("z", "re_g", "im_g"), fingerprint=fp,
                      meta={"omega": args.omega, "kpar": args.kpar,
                            "pol": args.pol, "zp": args.zp})
    for z in zs:
        try:
            g = kern.scalar(args.pol, float(z), args.zp)
        except ValueError:
            continue
        res.add(float(z), g.real, g.imag)
    res.to_csv(args.out)
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="rhps-sim",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", required=True, help="output path")

    p = sub.add_parser("spectrum", help="one-photon scattering spectra")
    add_common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("coincidence", help="two-photon coincidence signal")
    add_common(p)
    p.set_defaults(func=cmd_coincidence)

    p = sub.add_parser("sweep", help="run the sweep block of the config")
    add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("modes", help="exciton-photon coupled modes")
    add_common(p)
    p.add_argument("--window", nargs=2, type=float, default=(-30.0, 10.0),
                   metavar=("LO", "HI"), help="window relative to w_T (meV)")
    p.add_argument("--theta", type=float, default=0.0,
                   help="scattering angle in degrees")
    p.add_argument("--sectors", nargs="+", default=["V", "H"],
                   choices=["V", "H"])
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("greens-probe",
                       help="dump scalar Green's function profiles")
    add_common(p)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--kpar", type=float, default=0.0)
    p.add_argument("--zp", type=float, required=True)
    p.add_argument("--pol", default="V", choices=["V", "H"])
    p.add_argument("--zmin", type=float, default=None)
    p.add_argument("--zmax", type=float, default=None)
    p.add_argument("--count", type=int, default=201)
    p.set_defaults(func=cmd_greens_probe)

    args = ap.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
