import json

import numpy as np
import pytest

from rhps_sim import sweeps as sw
from rhps_sim.materials import HBAR_C

W_T = 3202.2


@pytest.fixture(scope="module")
def scn(cucl):
    exc, bx = cucl
    return sw.Scenario(exc, bx, thickness=150.0, pump_tune=4, e_cut=60.0)


class TestSpec:
    def test_monotone_grid_required(self):
        with pytest.raises(ValueError):
            sw.SweepSpec("omega", (1.0, 1.0, 2.0))
        with pytest.raises(ValueError):
            sw.SweepSpec("omega", (1.0,))
        with pytest.raises(ValueError):
            sw.SweepSpec("energy", (1.0, 2.0))

    def test_linspace(self):
        spec = sw.SweepSpec.linspace("thickness", 50.0, 100.0, 6)
        assert spec.values == (50.0, 60.0, 70.0, 80.0, 90.0, 100.0)

    def test_angle_convention(self, exc):
        assert sw.angle_to_kpar(exc, 0.0) == 0.0
        assert sw.angle_to_kpar(exc, np.pi / 2) == pytest.approx(
            W_T / HBAR_C, rel=1e-12)


class TestResults:
    def test_determinism_and_csv(self, scn, tmp_path):
        spec = sw.SweepSpec.linspace("omega", -20.0, -10.0, 5)
        fp = sw.config_fingerprint({"case": "unit"})
        r1 = sw.one_photon_sweep(scn, spec, ("total",), 0.0, fingerprint=fp)
        r2 = sw.one_photon_sweep(scn, spec, ("total",), 0.0, fingerprint=fp)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        r1.to_csv(p1)
        r2.to_csv(p2)
        assert p1.read_bytes() == p2.read_bytes()
        lines = p1.read_text(encoding="utf-8").splitlines()
        assert lines[0] == f"# fingerprint: {fp}"
        assert lines[1] == "omega,detector,value,e_cut"
        assert len(lines) == 2 + 5

    def test_rows_sorted_and_stamped(self, scn):
        spec = sw.SweepSpec.linspace("omega", -20.0, -10.0, 5)
        res = sw.one_photon_sweep(scn, spec)
        om = res.column("omega")
        assert np.all(np.diff(om) > 0)
        assert np.all(res.column("e_cut") == scn.e_cut)

    def test_manifest(self, scn, tmp_path):
        spec = sw.SweepSpec.linspace("omega", -20.0, -15.0, 3)
        res = sw.one_photon_sweep(scn, spec, fingerprint="abc")
        mpath = tmp_path / "run.manifest.jsonl"
        res.write_manifest(mpath)
        rec = json.loads(mpath.read_text(encoding="utf-8"))
        assert rec["fingerprint"] == "abc"
        assert rec["n_rows"] == len(res.rows)
        assert "omega_in" in rec


class TestThicknessSweep:
    def test_small_sweep_with_normalization(self, cucl):
        exc, bx = cucl
        scn = sw.Scenario(exc, bx, eps_left=exc.eps_bg,
                          eps_right=exc.eps_bg, e_cut=12.0)
        spec = sw.SweepSpec.linspace("thickness", 80.0, 160.0, 9)
        res = sw.thickness_sweep(scn, spec, normalize_ideal=True)
        p = res.column("performance")
        assert res.meta["p_ideal"] > 0
        assert p.max() <= 1.0 + 1e-9
        assert np.all(res.column("efficiency") > 0)

    def test_requires_thickness_variable(self, scn):
        with pytest.raises(ValueError):
            sw.thickness_sweep(scn, sw.SweepSpec.linspace("omega", -1, 1, 3))


class TestConvergence:
    def test_converge_e_cut(self, cucl):
        exc, bx = cucl
        scn = sw.Scenario(exc, bx, thickness=150.0, pump_tune=4)

        def observable(e_cut):
            calc = sw.Scenario(exc, bx, thickness=150.0, pump_tune=4,
                               e_cut=e_cut).calculator()
            w_in = scn.pump(calc)
            return [calc.one_photon_intensity(w_in + 3.0, 0.0, "right",
                                              "total")]

        e_ok, shifts = sw.converge_e_cut(observable, 30.0, rtol=0.005)
        assert shifts[-1] < 0.005

    def test_non_convergence_raises(self):
        calls = {"n": 0}

        def jumpy(e_cut):
            calls["n"] += 1
            return [calls["n"] * 1.0]

        with pytest.raises(RuntimeError):
            sw.converge_e_cut(jumpy, 1.0, rtol=1e-6, max_doublings=2)


class TestPresets:
    def test_figure5_preset_metadata(self, cucl):
        exc, bx = cucl
        out = sw.spectrum_scenario(5, exc, bx, count=5)
        assert len(out) == 1
        res = out[0]
        assert res.meta["figure"] == 5
        assert res.meta["theta_deg"] == 60.0
        dets = set(res.column("detector"))
        assert dets == {"H", "V"}

    def test_unknown_figure(self, cucl):
        exc, bx = cucl
        with pytest.raises(ValueError):
            sw.spectrum_scenario(8, exc, bx)
