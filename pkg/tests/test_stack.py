import math

import numpy as np
import pytest

from rhps_sim.materials import HBAR_C
from rhps_sim import stack as st


W_T = 3202.2


def flux_sum(eps_a, eps_b, w, kpar, pol):
    ch = st.PlaneWaveChannel(w, kpar, pol)
    r, t = st.interface_coefficients(eps_a, eps_b, ch)
    ka = math.sqrt(eps_a * (w / HBAR_C) ** 2 - kpar**2)
    kb_sq = eps_b * (w / HBAR_C) ** 2 - kpar**2
    if kb_sq <= 0:
        return abs(r) ** 2
    return abs(r) ** 2 + (math.sqrt(kb_sq) / ka) * abs(t) ** 2


class TestInterface:
    def test_no_interface(self):
        ch = st.PlaneWaveChannel(W_T, 0.01, "V")
        r, t = st.interface_coefficients(2.25, 2.25, ch)
        assert r == 0 and t == 1
        r, t = st.interface_coefficients(2.25, 2.25,
                                         st.PlaneWaveChannel(W_T, 0.01, "H"))
        assert r == 0 and t == 1

    def test_normal_incidence_fresnel(self):
        # vacuum -> eps 5.59 at normal incidence
        n = math.sqrt(5.59)
        ch = st.PlaneWaveChannel(W_T, 0.0, "V")
        r, _ = st.interface_coefficients(1.0, 5.59, ch)
        assert r.real == pytest.approx((1 - n) / (1 + n), abs=1e-12)
        assert abs(r - (-0.4056)) < 5e-4

    @pytest.mark.parametrize("pol", ["V", "H"])
    @pytest.mark.parametrize("kpar", [0.0, 0.008, 0.0140])
    def test_energy_conservation(self, pol, kpar):
        for (ea, eb) in [(1.0, 5.59), (5.59, 1.0), (3.46, 8.70)]:
            assert flux_sum(ea, eb, W_T, kpar, pol) == pytest.approx(
                1.0, abs=1e-12)

    def test_evanescent_total_reflection(self):
        # kpar beyond the light line of medium b: |r| = 1, no error
        kpar = 1.2 * (W_T / HBAR_C)
        ch = st.PlaneWaveChannel(W_T, kpar, "V")
        r, _ = st.interface_coefficients(5.59, 1.0, ch)
        assert abs(abs(r) - 1.0) < 1e-12


class TestGeneralizedRT:
    def test_matched_medium(self, exc):
        stack = st.film_stack(300.0, exc.eps_bg, exc.eps_bg)
        rt = st.generalized_RT(stack, st.PlaneWaveChannel(W_T, 0.0, "V"))
        assert rt.R_L == 0 and rt.R_R == 0
        assert rt.M == 1.0
        assert rt.T_L == 1.0 and rt.T_R == 1.0

    def test_film_in_vacuum_single_interface(self, exc):
        stack = st.film_stack(300.0, exc.eps_bg)
        for pol in ("V", "H"):
            ch = st.PlaneWaveChannel(W_T - 10.0, 0.006, pol)
            rt = st.generalized_RT(stack, ch)
            r, _ = st.interface_coefficients(exc.eps_bg, 1.0, ch)
            assert rt.R_L == pytest.approx(r, abs=1e-14)
            assert rt.R_R == pytest.approx(r, abs=1e-14)

    def test_dbr_reflectance(self, exc):
        # 16-period quarter-wave mirror seen from the excitonic medium
        t_lo = st.quarter_wave_thickness(1.86, W_T)
        t_hi = st.quarter_wave_thickness(2.95, W_T)
        layers = [st.Layer(1.0, exc.eps_bg, excitonic=True)]
        for _ in range(16):
            layers += [st.Layer(t_hi, 2.95**2), st.Layer(t_lo, 1.86**2)]
        stack = st.LayerStack(exc.eps_bg, layers, 1.0)
        for pol in ("V", "H"):
            rt = st.generalized_RT(stack, st.PlaneWaveChannel(W_T, 0.0, pol))
            assert abs(rt.R_R) ** 2 > 0.99

    @pytest.mark.parametrize("pol", ["V", "H"])
    def test_lossless_flux_conservation(self, pol, exc, dbr_cavity):
        # |R|^2 + flux-weighted transmissions to both sides sum to 1
        for stack in (st.film_stack(450.0, exc.eps_bg), dbr_cavity):
            ch = st.PlaneWaveChannel(W_T - 7.0, 0.004, pol)
            r, t = st.stack_reflection_transmission(stack, ch)
            kl = stack.kz(0, ch.omega, ch.kpar).real
            kr = stack.kz(stack.n_regions - 1, ch.omega, ch.kpar).real
            assert abs(r) ** 2 + (kr / kl) * abs(t) ** 2 == pytest.approx(
                1.0, abs=1e-10)

    def test_continuity_across_interior_threshold(self, exc):
        # crossing the propagating/evanescent threshold of an interior
        # layer must not jump
        layers = [st.Layer(80.0, 1.1), st.Layer(200.0, exc.eps_bg,
                                                excitonic=True)]
        stack = st.LayerStack(2.25, layers, 2.25)
        kpar = 1.0487 * W_T / HBAR_C
        w_c = kpar * HBAR_C / math.sqrt(1.1)  # threshold of the 1.1 layer
        vals = []
        for w in (w_c - 1e-4, w_c + 1e-4):
            rt = st.generalized_RT(stack, st.PlaneWaveChannel(w, kpar, "V"))
            vals.append(rt.R_L)
        assert abs(vals[0] - vals[1]) < 1e-5


class TestPumpField:
    def test_uniform_medium_pure_forward(self, exc):
        stack = st.film_stack(500.0, exc.eps_bg, exc.eps_bg)
        pf = st.pump_field(stack, W_T - 16.0, 0.0, "V")
        zs = np.linspace(-100.0, 600.0, 23)
        mags = [abs(pf.scalar(z)) for z in zs]
        assert np.allclose(mags, 1.0, atol=1e-12)
        assert pf.reflected == 0

    def test_fabry_perot_unit_transmission(self, exc):
        # pick d with k d = m pi inside the film: unit transmission
        w = W_T - 16.0
        k = math.sqrt(exc.eps_bg) * w / HBAR_C
        d = 6 * math.pi / k
        stack = st.film_stack(d, exc.eps_bg)
        pf = st.pump_field(stack, w, 0.0, "V")
        assert abs(pf.transmitted) ** 2 == pytest.approx(1.0, abs=1e-10)
        assert abs(pf.reflected) ** 2 == pytest.approx(0.0, abs=1e-10)

    def test_field_continuity_at_interfaces(self, dbr_cavity):
        pf = st.pump_field(dbr_cavity, W_T - 5.0, 0.003, "V")
        for zb in dbr_cavity.boundaries:
            left = pf.scalar(zb - 1e-9)
            right = pf.scalar(zb + 1e-9)
            assert abs(left - right) < 1e-8 * max(1.0, abs(left))

    def test_h_pol_tangential_field_continuity(self, dbr_cavity):
        pf = st.pump_field(dbr_cavity, W_T - 5.0, 0.004, "H")
        for zb in dbr_cavity.boundaries:
            ex_l = pf.field_vector(zb - 1e-9)[0]
            ex_r = pf.field_vector(zb + 1e-9)[0]
            assert abs(ex_l - ex_r) < 1e-8 * max(1.0, abs(ex_l))

    def test_cavity_enhancement(self, exc):
        # at the cavity mode, the intracavity intensity exceeds the input
        lam = 2 * math.pi * HBAR_C / W_T
        d = lam / (2 * math.sqrt(exc.eps_bg))
        cav = st.build_dbr_cavity(d, 4, 16, W_T, exc.eps_bg)
        pf = st.pump_field(cav, W_T, 0.0, "V")
        zs = np.linspace(0.0, d, 101)
        peak = max(abs(pf.scalar(z)) ** 2 for z in zs)
        assert peak > 1.0


class TestDbrBuilder:
    def test_zero_periods_is_bare_film(self, exc):
        cav = st.build_dbr_cavity(200.0, 0, 0, W_T, exc.eps_bg)
        assert cav.n_regions == 3
        assert cav.d == 200.0

    def test_quarter_wave_thickness(self):
        assert st.quarter_wave_thickness(1.86, W_T) == pytest.approx(
            52.06, abs=0.02)

    def test_cavity_mode_and_q(self, exc):
        # half-wave excitonic slab: passive mode lands on the design energy.
        # The quoted Q-factor of 50 matches the penetration-free finesse
        # estimate; the transmission linewidth (which includes the mirror
        # penetration depth) gives ~79 for the same structure.
        lam = 2 * math.pi * HBAR_C / W_T
        d = lam / (2 * math.sqrt(exc.eps_bg))
        cav = st.build_dbr_cavity(d, 4, 16, W_T, exc.eps_bg)
        mode, q_lw = st.cavity_mode_q(cav, (W_T - 150.0, W_T + 150.0))
        assert abs(mode - W_T) < 1.0
        assert 40.0 < q_lw < 120.0
        # finesse-style estimate from the weak-mirror reflectance
        t_lo = st.quarter_wave_thickness(1.86, W_T)
        t_hi = st.quarter_wave_thickness(2.95, W_T)
        weak = [st.Layer(t_hi, 2.95**2), st.Layer(t_lo, 1.86**2)] * 4
        mirror = st.LayerStack(exc.eps_bg,
                               weak + [st.Layer(10.0, exc.eps_bg,
                                                excitonic=True)], 1.0)
        r, _ = st.stack_reflection_transmission(
            mirror, st.PlaneWaveChannel(W_T, 0.0, "V"))
        r1 = abs(r) ** 2
        fin = math.pi * r1**0.25 / (1.0 - math.sqrt(r1))
        q_fin = fin * 2.0 * math.sqrt(exc.eps_bg) * d / lam
        assert abs(q_fin - 50.0) / 50.0 < 0.30

    def test_validation(self, exc):
        with pytest.raises(ValueError):
            st.build_dbr_cavity(100.0, -1, 4, W_T, exc.eps_bg)
        with pytest.raises(ValueError):
            st.LayerStack(1.0, [st.Layer(10.0, 2.0)], 1.0)  # no excitonic
