"""JSON configuration schema and builders.

Top-level keys (all optional, defaults shown by `default_config`):

exciton     hw_t, delta_lt, eps_bg, mass, gamma           (materials)
biexciton   binding, mass, gamma, f_sq
stack       type: 'film' | 'dbr_cavity'; thickness; film: n_left, n_right;
            dbr_cavity: periods_left, periods_right, design_energy,
            n_low, n_high, n_outside
basis       e_cut, max_m
pump        tune: 'bulk' | {'n': int} | {'omega_in': meV};
            polarization 'x'|'y'; amplitude
detection   delta_omega, side 'right'|'left', alpha
spectrum    theta_deg (list), omega_min_rel, omega_max_rel, count,
            detectors (list of 'total'/'H'/'V'/'L'/'R'),
            pairs (list of two-letter polarization pairs for coincidence)
sweep       variable; start, stop, count or values; normalize_ideal

Energies in meV, lengths in nm, angles in degrees in the file; files are
UTF-8.  Loading and re-dumping a configuration reproduces it exactly.
"""

from __future__ import annotations

import copy
import json
from pathlib import Path

from .materials import (BiexcitonParams, ExcitonParams, cucl_defaults,
                        exciton_params_from_dict, biexciton_params_from_dict,
                        exciton_params_to_dict, biexciton_params_to_dict)
from .sweeps import Scenario, SweepSpec, config_fingerprint


def default_config() -> dict:
    exc, bx = cucl_defaults()
    return {
        "exciton": exciton_params_to_dict(exc),
        "biexciton": biexciton_params_to_dict(bx),
        "stack": {"type": "film", "thickness": 200.0,
                  "n_left": 1.0, "n_right": 1.0},
        "basis": {"e_cut": 150.0, "max_m": None},
        "pump": {"tune": "bulk", "polarization": "x", "amplitude": 1.0},
        "detection": {"delta_omega": 0.01, "side": "right", "alpha": 1.0},
        "spectrum": {"theta_deg": [0.0], "omega_min_rel": -40.0,
                     "omega_max_rel": 2.0, "count": 241,
                     "detectors": ["total"], "pairs": ["HH", "VV"]},
        "sweep": {"variable": "thickness", "start": 50.0, "stop": 1000.0,
                  "count": 96, "normalize_ideal": True},
    }


def load_config(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        user = json.load(fh)
    cfg = default_config()
    for key, val in user.items():
        if key not in cfg:
            raise KeyError(f"unknown config section {key!r}")
        if isinstance(val, dict):
            merged = copy.deepcopy(cfg[key])
            merged.update(val)
            cfg[key] = merged
        else:
            cfg[key] = val
    return cfg


def dump_config(cfg: dict, path) -> None:
    Path(path).write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def build_params(cfg: dict) -> tuple[ExcitonParams, BiexcitonParams]:
    return (exciton_params_from_dict(cfg["exciton"]),
            biexciton_params_from_dict(cfg["biexciton"]))


def build_scenario(cfg: dict) -> Scenario:
    exc, bx = build_params(cfg)
    st = cfg["stack"]
    det = cfg["detection"]
    pump = cfg["pump"]
    tune = pump["tune"]
    pump_omega = None
    if isinstance(tune, dict):
        if "n" in tune:
            tune = int(tune["n"])
        elif "omega_in" in tune:
            pump_omega = float(tune["omega_in"])
            tune = "bulk"
    kw = dict(exc=exc, bx=bx, thickness=float(st["thickness"]),
              pump_omega=pump_omega,
              pump_pol=pump["polarization"],
              pump_amplitude=float(pump["amplitude"]),
              delta_omega=float(det["delta_omega"]), side=det["side"],
              alpha=float(det["alpha"]), e_cut=float(cfg["basis"]["e_cut"]),
              max_m=cfg["basis"]["max_m"],
              pump_tune=tune)
    if st["type"] == "film":
        kw.update(stack_kind="film", eps_left=float(st["n_left"]) ** 2,
                  eps_right=float(st["n_right"]) ** 2)
    elif st["type"] == "dbr_cavity":
        kw.update(stack_kind="dbr",
                  periods_left=int(st.get("periods_left", 4)),
                  periods_right=int(st.get("periods_right", 16)),
                  design_energy=st.get("design_energy"),
                  n_low=float(st.get("n_low", 1.86)),
                  n_high=float(st.get("n_high", 2.95)),
                  eps_left=float(st.get("n_outside", 1.0)) ** 2,
                  eps_right=float(st.get("n_outside", 1.0)) ** 2)
    else:
        raise ValueError(f"unknown stack type {st['type']!r}")
    return Scenario(**kw)


def build_sweep_spec(cfg: dict) -> SweepSpec:
    sw = cfg["sweep"]
    if "values" in sw and sw["values"]:
        return SweepSpec(sw["variable"], tuple(float(v) for v in sw["values"]))
    return SweepSpec.linspace(sw["variable"], float(sw["start"]),
                              float(sw["stop"]), int(sw["count"]))


def fingerprint(cfg: dict) -> str:
    return config_fingerprint(cfg)
