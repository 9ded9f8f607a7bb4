"""Frequency, angle, and thickness sweeps with reproducible CSV output.

A sweep is defined by a scenario (stack template, pump rule, detection
setup, basis cutoff) plus a grid over one variable.  Results carry a
config fingerprint and the basis cutoff each row was computed with, and
serialize deterministically: identical fingerprints produce byte-identical
CSV files.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .basis import biexciton_count
from .linear_response import PumpSpec
from .materials import (HBAR_C, BiexcitonParams, ExcitonParams)
from .rhps import (RhpsCalculator, performance, tune_pump)
from .stack import LayerStack, build_dbr_cavity, film_stack


def angle_to_kpar(exc: ExcitonParams, theta_rad: float) -> float:
    """Scattering angle convention kpar = (w_T/c) sin(theta)."""
    return (exc.hw_t / HBAR_C) * math.sin(theta_rad)


@dataclass(frozen=True)
class SweepSpec:
    """Grid over one variable: 'omega' (meV, relative to w_T), 'theta'
    (degrees), or 'thickness' (nm)."""

    variable: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.variable not in ("omega", "theta", "thickness"):
            raise ValueError("variable must be omega, theta or thickness")
        v = np.asarray(self.values)
        if len(v) < 2 or not np.all(np.diff(v) > 0):
            raise ValueError("grid must be strictly increasing, count >= 2")

    @classmethod
    def linspace(cls, variable: str, start: float, stop: float, count: int
                 ) -> "SweepSpec":
        return cls(variable, tuple(np.linspace(start, stop, count).tolist()))


@dataclass
class SweepResult:
    """Tabulated observables with provenance metadata."""

    variable: str
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    fingerprint: str = ""
    meta: dict = field(default_factory=dict)

    def add(self, *row) -> None:
        self.rows.append(tuple(row))

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("# fingerprint: %s\n" % self.fingerprint)
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")

    def write_manifest(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps({"fingerprint": self.fingerprint,
                                 "variable": self.variable,
                                 "columns": list(self.columns),
                                 "n_rows": len(self.rows), **self.meta},
                                sort_keys=True) + "\n")


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12e")


def config_fingerprint(cfg: dict) -> str:
    return hashlib.sha256(
        json.dumps(cfg, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()


# ---------------------------------------------------------------------------
# scenario plumbing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """Everything but the swept variable."""

    exc: ExcitonParams
    bx: BiexcitonParams
    stack_kind: str = "film"            # 'film' | 'dbr'
    thickness: float = 200.0
    eps_left: float = 1.0
    eps_right: float = 1.0
    periods_left: int = 4
    periods_right: int = 16
    design_energy: float | None = None  # default: hw_t
    n_low: float = 1.86
    n_high: float = 2.95
    pump_tune: str | int = "bulk"       # 'bulk' | confinement index
    pump_omega: float | None = None     # explicit pump frequency override
    pump_pol: str = "x"
    pump_amplitude: float = 1.0
    delta_omega: float = 0.01
    side: str = "right"
    alpha: float = 1.0
    e_cut: float = 150.0
    max_m: int | None = None

    def build_stack(self, thickness: float | None = None) -> LayerStack:
        d = self.thickness if thickness is None else thickness
        if self.stack_kind == "film":
            return film_stack(d, self.exc.eps_bg, self.eps_left,
                              self.eps_right)
        de = self.design_energy or self.exc.hw_t
        return build_dbr_cavity(d, self.periods_left, self.periods_right,
                                de, self.exc.eps_bg, self.n_low, self.n_high,
                                self.eps_left)

    def calculator(self, thickness: float | None = None) -> RhpsCalculator:
        return RhpsCalculator(self.build_stack(thickness), self.exc, self.bx,
                              e_cut=self.e_cut, delta_omega=self.delta_omega,
                              max_m=self.max_m)

    def pump(self, calc: RhpsCalculator) -> float:
        if self.pump_omega is not None:
            w_in = self.pump_omega
        else:
            w_in = tune_pump(calc, self.pump_tune)
        calc.set_pump(PumpSpec(omega_in=w_in, polarization=self.pump_pol,
                               amplitude=self.pump_amplitude))
        return w_in


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def one_photon_sweep(scn: Scenario, spec: SweepSpec,
                     detectors: Sequence[str] = ("total",),
                     theta_deg: float = 0.0, omega_rel: float = 0.0,
                     fingerprint: str = "") -> SweepResult:
    """I1 spectra over an omega grid (values relative to w_T, at fixed
    theta_deg) or over theta in degrees (at fixed omega_rel)."""
    calc = scn.calculator()
    w_in = scn.pump(calc)
    res = SweepResult(spec.variable,
                      (spec.variable, "detector", "value", "e_cut"),
                      fingerprint=fingerprint,
                      meta={"omega_in": w_in, "theta_deg": theta_deg,
                            "side": scn.side})
    for v in spec.values:
        if spec.variable == "omega":
            w = scn.exc.hw_t + v
            kp = angle_to_kpar(scn.exc, math.radians(theta_deg))
        else:
            w = scn.exc.hw_t + omega_rel
            kp = angle_to_kpar(scn.exc, math.radians(v))
        for det in detectors:
            val = calc.one_photon_intensity(w, kp, scn.side, det)
            res.add(v, det, val, scn.e_cut)
    return res


def coincidence_sweep(scn: Scenario, spec: SweepSpec,
                      pairs: Sequence[tuple[str, str]] = (("H", "H"),),
                      theta_deg: float = 0.0, side2: str | None = None,
                      fingerprint: str = "") -> SweepResult:
    """Correlated-pair signal S over an omega grid (photon 1 frequency
    relative to w_T); photon 2 rides the conjugate channel."""
    calc = scn.calculator()
    w_in = scn.pump(calc)
    s2 = side2 or scn.side
    res = SweepResult("omega", ("omega", "pol1", "pol2", "value", "e_cut"),
                      fingerprint=fingerprint,
                      meta={"omega_in": w_in, "theta_deg": theta_deg,
                            "side1": scn.side, "side2": s2})
    kp = angle_to_kpar(scn.exc, math.radians(theta_deg))
    for v in spec.values:
        w1 = scn.exc.hw_t + v
        for (p1, p2) in pairs:
            val = calc.signal(w1, kp, p1, p2, scn.side, s2)
            res.add(v, p1, p2, val, scn.e_cut)
    return res


def _efficiency_and_performance(calc: RhpsCalculator, scn: Scenario,
                                w_in: float) -> tuple[float, float]:
    """S/I_in^2 and P at theta = 0, omega_1/2 = w_in +- 0+, summed over
    the co-linear H/V pairs."""
    eps = 0.0
    s = calc.signal(w_in + eps, 0.0, "total", "total", scn.side, scn.side)
    n = calc.noise(w_in, w_in, 0.0, 0.0, "total", "total", scn.side, scn.side)
    i_in = abs(scn.pump_amplitude) ** 2
    eff = s / i_in**2
    p = performance(s, n, scn.alpha)
    return eff, p


def thickness_sweep(scn: Scenario, spec: SweepSpec,
                    normalize_ideal: bool = True,
                    fingerprint: str = "") -> SweepResult:
    """Generation efficiency S/I_in^2 and performance P over thickness,
    pump retuned at each point.  P is normalized to the maximum of the
    same sweep recomputed with Gamma = 0 (the ideal quantity) when
    normalize_ideal is set."""
    if spec.variable != "thickness":
        raise ValueError("thickness_sweep needs a thickness grid")

    def run(scenario: Scenario) -> list[tuple[float, float, float]]:
        rows = []
        for d in spec.values:
            calc = scenario.calculator(d)
            w_in = scenario.pump(calc)
            eff, p = _efficiency_and_performance(calc, scenario, w_in)
            rows.append((d, eff, p))
        return rows

    rows = run(scn)
    p_ideal = None
    if normalize_ideal:
        ideal = replace(scn, exc=replace(scn.exc, gamma=0.0))
        p_ideal = max(r[2] for r in run(ideal))
    res = SweepResult("thickness",
                      ("thickness", "efficiency", "performance", "e_cut"),
                      fingerprint=fingerprint,
                      meta={"normalized": bool(normalize_ideal),
                            "p_ideal": p_ideal})
    for d, eff, p in rows:
        res.add(d, eff, p / p_ideal if p_ideal else p, scn.e_cut)
    return res


# ---------------------------------------------------------------------------
# figure presets
# ---------------------------------------------------------------------------

def spectrum_scenario(fig_id: int, exc: ExcitonParams, bx: BiexcitonParams,
                      count: int = 241, e_cut: float | None = None,
                      fingerprint: str = "") -> list[SweepResult]:
    """Preset scenarios matching the published geometries:

    3: 7 um film in vacuum, forward singles at theta = 0/30/60 deg
    4: 7 um film, theta = 60 deg, H- and V-resolved singles
    5: 200 nm film, theta = 60 deg, H/V singles, pump at the n=6 biexciton
    6: 7 um and 200 nm films, theta = 60 deg, pair signal in HH/VV/HV and
       circular bases (omega > omega_in half)
    7: 200 nm film, theta = 0, pair signal spectrum, pump at n=6
    10: 72 nm layer in the 4/16-period Bragg cavity, backward signal
    """
    out: list[SweepResult] = []
    if fig_id == 3:
        scn = Scenario(exc, bx, thickness=7000.0, e_cut=e_cut or 2.0)
        grid = SweepSpec.linspace("omega", -40.0, 2.0, count)
        for th in (0.0, 30.0, 60.0):
            r = one_photon_sweep(scn, grid, ("total",), th, fingerprint)
            r.meta["figure"] = 3
            out.append(r)
    elif fig_id == 4:
        scn = Scenario(exc, bx, thickness=7000.0, e_cut=e_cut or 2.0)
        grid = SweepSpec.linspace("omega", -40.0, 2.0, count)
        r = one_photon_sweep(scn, grid, ("H", "V"), 60.0, fingerprint)
        r.meta["figure"] = 4
        out.append(r)
    elif fig_id == 5:
        scn = Scenario(exc, bx, thickness=200.0, pump_tune=6,
                       e_cut=e_cut or 150.0)
        grid = SweepSpec.linspace("omega", -40.0, 10.0, count)
        r = one_photon_sweep(scn, grid, ("H", "V"), 60.0, fingerprint)
        r.meta["figure"] = 5
        out.append(r)
    elif fig_id == 6:
        for d, ecut_d in ((7000.0, e_cut or 2.0), (200.0, 150.0)):
            scn = Scenario(exc, bx, thickness=d, e_cut=ecut_d)
            grid = SweepSpec.linspace("omega", -16.0, -4.0, count)
            pairs = (("H", "H"), ("V", "V"), ("H", "V"),
                     ("L", "R"), ("R", "L"), ("L", "L"), ("R", "R"))
            r = coincidence_sweep(scn, grid, pairs, 60.0,
                                  fingerprint=fingerprint)
            r.meta["figure"] = 6
            r.meta["thickness"] = d
            out.append(r)
    elif fig_id == 7:
        scn = Scenario(exc, bx, thickness=200.0, pump_tune=6,
                       e_cut=e_cut or 150.0)
        grid = SweepSpec.linspace("omega", -26.0, -6.0, count)
        r = coincidence_sweep(scn, grid, (("H", "H"), ("V", "V")), 0.0,
                              fingerprint=fingerprint)
        r.meta["figure"] = 7
        out.append(r)
    elif fig_id == 10:
        scn = Scenario(exc, bx, stack_kind="dbr", thickness=72.0,
                       side="left", e_cut=e_cut or 150.0)
        grid = SweepSpec.linspace("omega", -26.0, -6.0, count)
        r = coincidence_sweep(scn, grid, (("H", "H"), ("V", "V")), 0.0,
                              fingerprint=fingerprint)
        r.meta["figure"] = 10
        out.append(r)
    else:
        raise ValueError(f"no preset for figure {fig_id}")
    return out


# ---------------------------------------------------------------------------
# convergence control
# ---------------------------------------------------------------------------

def converge_e_cut(observable: Callable[[float], np.ndarray],
                   e_cut0: float, rtol: float = 0.005,
                   max_doublings: int = 4) -> tuple[float, list[float]]:
    """Double the basis cutoff until the observable vector shifts by less
    than rtol (relative, max norm).  Returns the accepted cutoff and the
    shift history."""
    prev = np.asarray(observable(e_cut0), dtype=float)
    shifts = []
    e = e_cut0
    for _ in range(max_doublings):
        e2 = 2.0 * e
        cur = np.asarray(observable(e2), dtype=float)
        scale = np.max(np.abs(prev))
        shift = float(np.max(np.abs(cur - prev)) / (scale if scale else 1.0))
        shifts.append(shift)
        if shift < rtol:
            return e, shifts
        prev, e = cur, e2
    raise RuntimeError(
        f"observable not converged after {max_doublings} doublings "
        f"(shifts: {shifts})")
