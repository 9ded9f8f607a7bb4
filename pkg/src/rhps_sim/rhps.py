"""Biexciton-resonant hyperparametric scattering observables.

Pipeline: the pump drives linear exciton amplitudes b1; pairs of them feed
the resonant biexciton amplitude Btilde_n; a biexciton decays by emitting
a photon at (omega, kpar) while leaving a conjugate exciton fluctuation at
(2 w_in - omega, -kpar).  The joint pair-emission tensor and the one-photon
(singles) tensor are bilinear chains

    T_pair    = (1/2 pi i) [E W](z2, w2) . Q . [E W](z1, w1)^T
    T_singles = (1/2 pi i) conj(ENL(z)) . [W - W^dag](w_bar) . ENL(z')^T,
    ENL       = [E W](z, w) . Q

where E are the far-field radiation kernels of the basis modes, W is the
inverse response matrix, and Q carries the biexciton-mediated coupling
(triple sine overlaps, energy factors, Btilde).  Signal, noise, and
performance follow as

    S = (dw)^2 |e2* . T_pair . e1*|^2        (on omega1 + omega2 = 2 w_in)
    N = I1(channel 1) I1(channel 2),  I1 = dw (e . T_singles . e*)
    P = S^2 / (alpha N).

All intensities are in arbitrary units; S ~ I_in^2, N ~ I_in^4, P is
pump-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .basis import (ExcitonBasis, biexciton_count, biexciton_energy,
                    truncate_basis)
from .linear_response import (LUSolver, PumpSpec, assemble_A, factorize,
                              linear_amplitudes)
from .materials import HBAR_C, BiexcitonParams, ExcitonParams
from .greens import GreensKernel
from .oscint import sin_exp, sine_line_integral

Side = Literal["left", "right"]


class NoFarFieldError(ValueError):
    """Outgoing channel is evanescent in the requested end medium."""


class ConfigurationError(ValueError):
    pass


class UndefinedPerformance(ZeroDivisionError):
    pass


class _NormalIncidenceHSolver:
    """Block solver for the H sector at kpar = 0, where the x block equals
    the V block exactly and the z block is the diagonal of longitudinal
    exciton energies."""

    def __init__(self, vlu, zdiag: np.ndarray):
        self.vlu = vlu
        self.zdiag = zdiag

    def solve(self, b: np.ndarray, trans: int = 0) -> np.ndarray:
        n = len(self.zdiag)
        x = np.empty_like(np.asarray(b, dtype=complex))
        x[:n] = self.vlu.solve(b[:n], trans=trans)
        zd = np.conj(self.zdiag) if trans == 2 else self.zdiag
        x[n:] = (b[n:].T / zd).T
        return x


# ---------------------------------------------------------------------------
# polarization geometry
# ---------------------------------------------------------------------------

def polarization_vectors(stack, omega: float, kpar: float, side: Side
                         ) -> dict[str, np.ndarray]:
    """Detector polarization unit vectors for the outgoing channel.

    V is y^.  H lies in the x-z plane orthogonal to the outgoing wavevector,
    with positive x component at normal incidence: forward (right side)
    e_H = (kz, 0, -kpar)/k_med, backward e_H = (kz, 0, +kpar)/k_med.
    L/R are (e_H +- i e_V)/sqrt(2) for the outgoing direction.
    """
    region = 0 if side == "left" else stack.n_regions - 1
    kz = stack.kz(region, omega, kpar)
    if abs(kz.imag) > 1e-12 * abs(kz) or kz.real <= 0.0:
        raise NoFarFieldError(
            f"channel (omega={omega}, kpar={kpar}) is evanescent on the "
            f"{side} side")
    kz = kz.real
    kmed = math.sqrt(stack.eps[region]) * omega / HBAR_C
    zsign = -1.0 if side == "right" else 1.0
    e_h = np.array([kz / kmed, 0.0, zsign * kpar / kmed], dtype=complex)
    e_v = np.array([0.0, 1.0, 0.0], dtype=complex)
    return {"H": e_h, "V": e_v,
            "L": (e_h + 1j * e_v) / math.sqrt(2.0),
            "R": (e_h - 1j * e_v) / math.sqrt(2.0)}


def project_polarization(tensor: np.ndarray, vectors: dict[str, np.ndarray],
                         basis2: str, basis1: str | None = None,
                         vectors1: dict[str, np.ndarray] | None = None):
    """Project a 3x3 emission tensor onto detector bases.

    For a singles tensor pass one basis: returns the real intensity
    e . T . e*.  For a pair tensor pass both (photon-2 basis first): returns
    the complex amplitude e2* . T . e1*.
    """
    e2 = vectors[basis2]
    if basis1 is None:
        return float(np.real(e2 @ tensor @ e2.conj()))
    e1 = (vectors1 or vectors)[basis1]
    return complex(e2.conj() @ tensor @ e1.conj())


# ---------------------------------------------------------------------------
# radiation kernels
# ---------------------------------------------------------------------------

def radiation_kernels(stack, basis: ExcitonBasis, params: ExcitonParams,
                      omega: float, kpar: float, side: Side
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Far-field emission amplitudes of the basis modes at an end-region
    face: (E_V, E_H) with shapes (1, N) over y-excitons and (2, 2N) over
    (x, z)-excitons, rows being the (y,) and (x, z) field components."""
    kern = GreensKernel(stack, omega, kpar)
    d, qs = basis.d, basis.qs
    k = kern.k
    k0 = omega / HBAR_C
    rad = math.sqrt(params.eps_bg * params.delta_lt) * k0 * k0
    pref = rad * math.sqrt(2.0 / d)
    I = (sin_exp(k, qs, d), sin_exp(-k, qs, d))

    ocV = kern.outside_coeffs("V", side)
    EV = np.zeros((1, basis.size), dtype=complex)
    EV[0] = (-1.0 / (2j * k)) * pref * (ocV.rho[0] * I[0] + ocV.rho[1] * I[1])

    ocH = kern.outside_coeffs("H", side)
    hpref = 1.0 / (math.sqrt(params.eps_bg * ocH.eps_out) * k0 * k0)
    dz_obs = 1j * ocH.sigma * ocH.kz_out
    n = basis.size
    EH = np.zeros((2, 2 * n), dtype=complex)
    for sj, sp in enumerate((1.0, -1.0)):
        src = ocH.rho[sj] * I[sj]
        dzp = 1j * sp * k
        EH[0, :n] += dz_obs * dzp * src          # x field <- x exciton
        EH[0, n:] += dz_obs * 1j * kpar * src    # x field <- z exciton
        EH[1, :n] += -1j * kpar * dzp * src      # z field <- x exciton
        EH[1, n:] += kpar * kpar * src           # z field <- z exciton
    EH *= (-1.0 / (2j * k)) * pref * hpref
    return EV, EH


# ---------------------------------------------------------------------------
# biexciton amplitude
# ---------------------------------------------------------------------------

class TripleOverlapTables:
    """Precomputed sine-line-integral tables turning sums over the triple
    overlap C(n, m, m') into matrix-vector products.

    M1[n-1, j + N-1] = T(n + j),   j = m - m' in [-(N-1), N-1]
    M2[n-1, s - 2]   = T(s - n) - T(n + s),   s = m + m' in [2, 2N]
    with T(j) = int_0^d sin(j pi z/d) dz and n = 1 .. 2N.
    """

    def __init__(self, d: float, n_modes: int):
        self.d = d
        self.N = n_modes
        self.n_bx = 2 * n_modes
        n = np.arange(1, self.n_bx + 1)
        j = np.arange(-(self.N - 1), self.N)
        s = np.arange(2, 2 * self.N + 1)
        self.M1 = sine_line_integral(n[:, None] + j[None, :], d)
        self.M2 = (sine_line_integral(s[None, :] - n[:, None], d)
                   - sine_line_integral(n[:, None] + s[None, :], d))
        self.c3 = (2.0 / d) ** 1.5

    def sum_over_modes(self, v: np.ndarray, u: np.ndarray) -> np.ndarray:
        """num[n] = sum_{m,m'} C(n, m, m') v_m u_{m'} for n = 1..2N."""
        cor = np.convolve(v, u[::-1])          # cor[d + N-1] = sum v_m u_{m-d}
        con = np.convolve(v, u)                # con[s - 2]  = sum_{m+m'=s}
        t1 = self.M1 @ cor
        t2 = self.M1 @ cor[::-1]
        t3 = self.M2 @ con
        return 0.25 * self.c3 * (t1 + t2 + t3)

    def sum_over_n(self, beta: np.ndarray) -> np.ndarray:
        """S[m'-1, m-1] = sum_n beta_n C(n, m', m) as an N x N matrix."""
        g1 = self.M1.T @ beta
        g2 = self.M2.T @ beta
        idx = np.arange(self.N)
        dsym = g1[(idx[:, None] - idx[None, :]) + self.N - 1]
        dsym = dsym + g1[(idx[None, :] - idx[:, None]) + self.N - 1]
        ssum = g2[(idx[:, None] + idx[None, :])]
        return 0.25 * self.c3 * (dsym + ssum)


def biexciton_amplitude(basis_in: ExcitonBasis, exc: ExcitonParams,
                        bx: BiexcitonParams, amplitudes, omega_in: float,
                        tables: TripleOverlapTables | None = None
                        ) -> np.ndarray:
    """Btilde_n(2 w_in) for n = 1..2N: resonant Lorentzian denominator times
    the pump-bilinear source sum_{xi,m,m'} f C(n,m,m') (E_m - w_in) b_m b_m'.
    """
    if tables is None:
        tables = TripleOverlapTables(basis_in.d, basis_in.size)
    n = basis_in.size
    vecs = []
    if amplitudes.sector == "V":
        vecs.append(amplitudes.vector)
    else:
        vecs.append(amplitudes.vector[:n])
        vecs.append(amplitudes.vector[n:])
    num = np.zeros(tables.n_bx, dtype=complex)
    for b1 in vecs:
        if not np.any(b1):
            continue
        v = (basis_in.energies - omega_in) * b1
        num += tables.sum_over_modes(v, b1)
    ns = np.arange(1, tables.n_bx + 1)
    omegas_bx = biexciton_energy(exc, bx, basis_in.d,
                                 2.0 * basis_in.kpar, ns)
    denom = omegas_bx - 2.0 * omega_in - 0.5j * bx.gamma
    return bx.f * num / denom


# ---------------------------------------------------------------------------
# scattering calculator
# ---------------------------------------------------------------------------

@dataclass
class PumpState:
    pump: PumpSpec
    basis_in: ExcitonBasis
    amplitudes: object
    btilde: np.ndarray
    s0: np.ndarray     # sum_n Btilde_n C(n, m', m)
    s1: np.ndarray     # sum_n Btilde_n Omega_n C(n, m', m)


class RhpsCalculator:
    """Holds a stack + material set and evaluates RHPS observables.

    Heavy pieces (LU factorizations per (sector, |kpar|, omega), overlap
    tables, the pump state) are cached; all returned observables are pure
    functions of the configuration.
    """

    def __init__(self, stack, exc: ExcitonParams, bx: BiexcitonParams,
                 e_cut: float = 150.0, delta_omega: float = 0.01,
                 max_m: int | None = None, lu_cache: int = 8):
        self.stack = stack
        self.exc = exc
        self.bx = bx
        self.e_cut = e_cut
        self.max_m = max_m
        self.delta_omega = delta_omega
        self._bases: dict[float, ExcitonBasis] = {}
        self._lus: dict[tuple, LUSolver] = {}
        self._lu_cap = lu_cache
        self._tables: TripleOverlapTables | None = None
        self.pump_state: PumpState | None = None

    # -- caches ---------------------------------------------------------
    def basis_at(self, kpar: float) -> ExcitonBasis:
        key = abs(float(kpar))
        if key not in self._bases:
            self._bases[key] = truncate_basis(self.exc, self.stack.d, key,
                                              self.e_cut, self.max_m)
        return self._bases[key]

    @property
    def tables(self) -> TripleOverlapTables:
        if self._tables is None:
            b = self.basis_at(0.0)
            self._tables = TripleOverlapTables(b.d, b.size)
        return self._tables

    def _solver(self, sector: str, kpar: float, omega: float):
        key = (sector, abs(float(kpar)), float(omega))
        if key not in self._lus:
            if len(self._lus) >= self._lu_cap:
                self._lus.pop(next(iter(self._lus)))
            if sector == "H" and kpar == 0.0:
                # x block == V block and the z block is diagonal at kpar=0
                basis = self.basis_at(0.0)
                vlu = self._solver("V", 0.0, omega)
                zdiag = (basis.energies + self.exc.delta_lt - omega
                         - 0.5j * self.exc.gamma)
                self._lus[key] = _NormalIncidenceHSolver(vlu, zdiag)
            else:
                A = assemble_A(self.stack, self.basis_at(kpar), self.exc,
                               omega, sector)
                self._lus[key] = factorize(A)
        return self._lus[key]

    def _solve(self, sector: str, kpar: float, omega: float, b: np.ndarray,
               adjoint: bool = False) -> np.ndarray:
        """Solve A(omega, kpar) x = b handling the sign of kpar: the H
        sector obeys A(-kpar) = P A(kpar) P with P flipping the z block."""
        lu = self._solver(sector, kpar, omega)
        if sector == "V" or kpar >= 0:
            return lu.solve(b, trans=2 if adjoint else 0)
        n = self.basis_at(kpar).size
        bb = np.array(b, copy=True)
        bb[n:] = -bb[n:]
        x = lu.solve(bb, trans=2 if adjoint else 0)
        x[n:] = -x[n:]
        return x

    # -- pump -----------------------------------------------------------
    def set_pump(self, pump: PumpSpec) -> PumpState:
        basis_in = self.basis_at(pump.kpar_in)
        la = linear_amplitudes(self.stack, basis_in, self.exc, pump)
        bt = biexciton_amplitude(basis_in, self.exc, self.bx, la,
                                 pump.omega_in, self.tables)
        ns = np.arange(1, self.tables.n_bx + 1)
        om_bx = biexciton_energy(self.exc, self.bx, basis_in.d,
                                 2.0 * pump.kpar_in, ns)
        s0 = self.tables.sum_over_n(bt)
        s1 = self.tables.sum_over_n(bt * om_bx)
        self.pump_state = PumpState(pump, basis_in, la, bt, s0, s1)
        return self.pump_state

    def btilde_metric(self, omega_in: float, target: int | None = None,
                      pump: PumpSpec | None = None) -> float:
        """sum_n |Btilde_n|^2, or |Btilde_target|^2, at a trial pump
        frequency (used by the tuner; does not touch the pump state)."""
        base = pump or PumpSpec(omega_in=omega_in)
        p = replace(base, omega_in=omega_in)
        basis_in = self.basis_at(p.kpar_in)
        la = linear_amplitudes(self.stack, basis_in, self.exc, p)
        bt = biexciton_amplitude(basis_in, self.exc, self.bx, la,
                                 p.omega_in, self.tables)
        if target is None:
            return float(np.sum(np.abs(bt) ** 2))
        return float(np.abs(bt[target - 1]) ** 2)

    # -- emission chains --------------------------------------------------
    def _chains(self, omega: float, kpar: float, side: Side):
        """F = [E W](omega, kpar) for both sectors: shapes (1, N), (2, 2N)."""
        basis = self.basis_at(kpar)
        EV, EH = radiation_kernels(self.stack, basis, self.exc, omega, kpar,
                                   side)
        # E W = solve(A^T, E^T)^T, reusing the same LU with trans=1
        lu = self._solver("V", kpar, omega)
        FV = lu.solve(EV.T, trans=1).T
        FH = self._hsolve_T(kpar, omega, EH)
        return FV, FH

    def _hsolve_T(self, kpar: float, omega: float, E: np.ndarray
                  ) -> np.ndarray:
        """rows(E) . W for the H sector at signed kpar."""
        lu = self._solver("H", kpar, omega)
        n = self.basis_at(kpar).size
        ET = E.T.copy()
        if kpar < 0:
            ET[n:] = -ET[n:]
        X = lu.solve(ET, trans=1)
        if kpar < 0:
            X[n:] = -X[n:]
        return X.T

    def _q_matrix(self, kpar: float) -> np.ndarray:
        """Q[m', m] = sum_n Btilde_n (E_m' + E_m - Omega_n) C(n, m', m)
        at the scattering in-plane wavenumber."""
        if self.pump_state is None:
            raise ConfigurationError("pump not set")
        e = self.basis_at(kpar).energies
        return ((e[:, None] + e[None, :]) * self.pump_state.s0
                - self.pump_state.s1)

    def _enl(self, omega: float, kpar: float, side: Side
             ) -> tuple[np.ndarray, np.ndarray]:
        """Nonlinear emission coefficients ENL = [E W] Q, per sector.

        Column (xi, m) multiplies the conjugate exciton fluctuation at
        (xi, -kpar, m) and frequency 2 w_in - omega."""
        FV, FH = self._chains(omega, kpar, side)
        Q = self._q_matrix(kpar)
        n = self.basis_at(kpar).size
        ENL_V = FV @ Q
        ENL_H = np.empty_like(FH)
        ENL_H[:, :n] = FH[:, :n] @ Q
        ENL_H[:, n:] = FH[:, n:] @ Q
        return ENL_V, ENL_H

    # -- tensors ----------------------------------------------------------
    def pair_amplitude(self, omega1: float, kpar1: float,
                       side1: Side = "right", side2: Side = "right"
                       ) -> np.ndarray:
        """Joint two-photon emission tensor T[a2, a1] over field components,
        photon 1 at (omega1, kpar1, side1), photon 2 at the conjugate
        channel (2 w_in - omega1, -kpar1, side2)."""
        ps = self.pump_state
        if ps is None:
            raise ConfigurationError("pump not set")
        w_in = ps.pump.omega_in
        omega2 = 2.0 * w_in - omega1
        kpar2 = 2.0 * ps.pump.kpar_in - kpar1
        F1V, F1H = self._chains(omega1, kpar1, side1)
        F2V, F2H = self._chains(omega2, kpar2, side2)
        Q = self._q_matrix(kpar1)
        n = self.basis_at(kpar1).size
        pref = 1.0 / (2j * math.pi)
        T = np.zeros((3, 3), dtype=complex)
        T[1, 1] = pref * (F2V @ Q @ F1V.T)[0, 0]
        TH = np.zeros((2, 2), dtype=complex)
        TH += F2H[:, :n] @ Q @ F1H[:, :n].T
        TH += F2H[:, n:] @ Q @ F1H[:, n:].T
        TH *= pref
        T[0, 0], T[0, 2] = TH[0, 0], TH[0, 1]
        T[2, 0], T[2, 2] = TH[1, 0], TH[1, 1]
        return T

    def singles_tensor(self, omega: float, kpar: float, side: Side = "right"
                       ) -> np.ndarray:
        """One-photon emission tensor T[a, b]: Hermitian, PSD diagonal."""
        ps = self.pump_state
        if ps is None:
            raise ConfigurationError("pump not set")
        w_in = ps.pump.omega_in
        w_bar = 2.0 * w_in - omega
        k_bar = 2.0 * ps.pump.kpar_in - kpar
        ENL_V, ENL_H = self._enl(omega, kpar, side)
        pref = 1.0 / (2j * math.pi)
        T = np.zeros((3, 3), dtype=complex)
        x = self._solve("V", k_bar, w_bar, ENL_V.T)
        xh = self._solve("V", k_bar, w_bar, ENL_V.T, adjoint=True)
        T[1, 1] = pref * (ENL_V.conj() @ (x - xh))[0, 0]
        y = self._hsolve_cols(k_bar, w_bar, ENL_H.T)
        yh = self._hsolve_cols(k_bar, w_bar, ENL_H.T, adjoint=True)
        TH = pref * (ENL_H.conj() @ (y - yh))
        T[0, 0], T[0, 2] = TH[0, 0], TH[0, 1]
        T[2, 0], T[2, 2] = TH[1, 0], TH[1, 1]
        # enforce the exact Hermiticity the formula implies
        return 0.5 * (T + T.conj().T)

    def _hsolve_cols(self, kpar: float, omega: float, B: np.ndarray,
                     adjoint: bool = False) -> np.ndarray:
        lu = self._solver("H", kpar, omega)
        n = self.basis_at(kpar).size
        BB = np.array(B, copy=True)
        if kpar < 0:
            BB[n:] = -BB[n:]
        X = lu.solve(BB, trans=2 if adjoint else 0)
        if kpar < 0:
            X[n:] = -X[n:]
        return X

    # -- observables ------------------------------------------------------
    def one_photon_intensity(self, omega: float, kpar: float,
                             side: Side = "right",
                             detector: str = "total") -> float:
        """I1 = dw [T_singles]_pp for detector in H/V/L/R or 'total'."""
        T = self.singles_tensor(omega, kpar, side)
        if detector == "total":
            vecs = polarization_vectors(self.stack, omega, kpar, side)
            val = (project_polarization(T, vecs, "H")
                   + project_polarization(T, vecs, "V"))
        else:
            vecs = polarization_vectors(self.stack, omega, kpar, side)
            val = project_polarization(T, vecs, detector)
        return self.delta_omega * val

    def signal(self, omega1: float, kpar1: float, pol1: str, pol2: str,
               side1: Side = "right", side2: Side = "right") -> float:
        """S = (dw)^2 |amplitude|^2 for the correlated pair, photon 1
        detected in pol1 and its partner in pol2; 'total' sums H/V pairs."""
        ps = self.pump_state
        w_in = ps.pump.omega_in
        T = self.pair_amplitude(omega1, kpar1, side1, side2)
        v1 = polarization_vectors(self.stack, omega1, kpar1, side1)
        v2 = polarization_vectors(self.stack, 2.0 * w_in - omega1,
                                  2.0 * ps.pump.kpar_in - kpar1, side2)
        dw2 = self.delta_omega ** 2
        if pol1 == pol2 == "total":
            return dw2 * sum(
                abs(project_polarization(T, v2, p2, p1, v1)) ** 2
                for p1 in ("H", "V") for p2 in ("H", "V"))
        amp = project_polarization(T, v2, pol2, pol1, v1)
        return dw2 * abs(amp) ** 2

    def noise(self, omega1: float, omega2: float, kpar1: float, kpar2: float,
              pol1: str = "total", pol2: str = "total",
              side1: Side = "right", side2: Side = "right") -> float:
        """Accidental coincidence N = I1(channel 1) * I1(channel 2)."""
        i1 = self.one_photon_intensity(omega1, kpar1, side1, pol1)
        i2 = self.one_photon_intensity(omega2, kpar2, side2, pol2)
        return i1 * i2


def performance(signal_value: float, noise_value: float,
                alpha: float = 1.0) -> float:
    """P = S^2/(alpha N); independent of the pump intensity."""
    if noise_value == 0.0:
        raise UndefinedPerformance("noise vanishes; performance undefined")
    return signal_value ** 2 / (alpha * noise_value)


# ---------------------------------------------------------------------------
# pump tuning
# ---------------------------------------------------------------------------

def bulk_two_photon_frequency(exc: ExcitonParams, bx: BiexcitonParams,
                              kpar_in: float = 0.0, tol: float = 1e-10,
                              max_iter: int = 200) -> float:
    """Phase-matched two-photon absorption frequency of the bulk crystal.

    Two co-propagating lower-branch polaritons at (w_in, k_LP) create a
    biexciton at 2 k_LP, so w_in solves 2 w_in = Omega(2 k_LP(w_in)); the
    solution sits slightly above hw_T - binding/2.  The undamped dispersion
    with spatial dispersion is quadratic in k^2 and is solved exactly at
    each fixed-point step.
    """
    kap = exc.kinetic_const
    w = exc.hw_t - 0.5 * bx.binding
    for _ in range(max_iter):
        k0sq = exc.eps_bg * (w / HBAR_C) ** 2
        w0 = exc.hw_t + kap * kpar_in * kpar_in - w
        b = w0 - kap * k0sq
        ksq = (-b + math.sqrt(b * b + 4.0 * kap * k0sq
                              * (w0 + exc.delta_lt))) / (2.0 * kap)
        q_bx = 2.0 * math.sqrt(ksq - kpar_in * kpar_in)
        w_new = 0.5 * (2.0 * exc.hw_t - bx.binding
                       + bx.kinetic_const * (q_bx * q_bx
                                             + 4.0 * kpar_in * kpar_in))
        if abs(w_new - w) < tol:
            return float(w_new)
        w = w_new
    return float(w)


def tune_pump(calc: RhpsCalculator, target: int | str = "bulk",
              pump: PumpSpec | None = None,
              window: tuple[float, float] | None = None,
              coarse: int = 81, xtol: float = 1e-4) -> float:
    """Pump frequency for resonant biexciton creation.

    target 'bulk': the phase-matched bulk two-photon absorption frequency
    (thickness independent).  Integer n: maximize |Btilde_n|^2 by a coarse
    scan near Omega_n/2 plus golden-section refinement to xtol (meV).
    """
    from scipy.optimize import minimize_scalar

    exc, bx = calc.exc, calc.bx
    kpin = (pump.kpar_in if pump else 0.0)
    if target == "bulk":
        return bulk_two_photon_frequency(exc, bx, kpin)
    tgt = int(target)
    if window is None:
        half = 0.5 * biexciton_energy(exc, bx, calc.stack.d, 2.0 * kpin, tgt)
        pad = max(10.0 * bx.gamma, 0.05)
        window = (half - pad, half + pad)
    grid = np.linspace(window[0], window[1], coarse)
    vals = np.array([calc.btilde_metric(w, tgt, pump) for w in grid])
    i0 = int(np.argmax(vals))
    if i0 in (0, len(grid) - 1):
        raise ConfigurationError(
            f"no interior biexciton-response maximum in window {window}")
    bracket = (grid[i0 - 1], grid[i0], grid[i0 + 1])
    res = minimize_scalar(lambda w: -calc.btilde_metric(w, tgt, pump),
                          bracket=bracket, method="golden",
                          options={"xtol": xtol / abs(grid[i0])})
    return float(res.x)
