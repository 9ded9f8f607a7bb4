"""Exciton-photon linear response: coefficient matrix, inversion, coupled
modes, and pump-driven amplitudes.

The coefficient matrix over confinement modes is

    A[(xi,m),(xi',m')] = (E_{xi,kpar,m} - w - i Gamma/2) delta
        - eps_bg dLT (w/c)^2 (2/d) Int Int sin(q_m z) G_{xi xi'}(z,z')
                                          sin(q_m' z') dz dz'

with every z, z' double integral in closed form: image terms factorize into
single sin/exponential overlaps, the |z-z'| kernels use the slab identities
of oscint, and the zz contact term integrates to -dLT delta_mm'.  The V
sector (xi = y) is an N x N block; the H sector couples (x, z) into a
2N x 2N block that decouples at kpar = 0 (the x block then equals the V
block and the z block is diagonal at the longitudinal exciton energy).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack as _lapack

from .basis import ExcitonBasis, exciton_energy
from .greens import GreensKernel
from .materials import HBAR_C, ExcitonParams
from .oscint import j_direct_matrix, j_sgn_matrix, sin_exp
from .stack import LayerStack, PlaneWaveChannel, pump_field, \
    stack_reflection_transmission

_SIGNS = (1.0, -1.0)


@dataclass
class ResponseMatrix:
    """Dense coefficient matrix A (kind='A') or its inverse W (kind='W')
    for one sector at one (omega, kpar)."""

    omega: complex
    kpar: float
    sector: str            # 'V' or 'H'
    basis: ExcitonBasis
    matrix: np.ndarray
    kind: str = "A"

    @property
    def n_modes(self) -> int:
        return self.basis.size

    def block(self, xi: str, xip: str) -> np.ndarray:
        """(xi, xi') sub-block; V sector owns only (y, y)."""
        n = self.basis.size
        if self.sector == "V":
            if xi == xip == "y":
                return self.matrix
            raise KeyError("V sector holds only the (y, y) block")
        idx = {"x": slice(0, n), "z": slice(n, 2 * n)}
        return self.matrix[idx[xi], idx[xip]]


def self_energy_prefactor(params: ExcitonParams, omega: complex) -> complex:
    """eps_bg * delta_LT * (omega/c)^2 in meV/nm^2."""
    k0 = omega / HBAR_C
    return params.eps_bg * params.delta_lt * k0 * k0


def assemble_A(stack: LayerStack, basis: ExcitonBasis, params: ExcitonParams,
               omega: complex, sector: str) -> ResponseMatrix:
    if sector not in ("V", "H"):
        raise ValueError("sector must be 'V' or 'H'")
    d, kpar = basis.d, basis.kpar
    qs = basis.qs
    n = basis.size
    kern = GreensKernel(stack, omega, kpar)
    k = kern.k
    pref = self_energy_prefactor(params, omega)
    kfac = -1.0 / (2j * k)
    norm = 2.0 / d
    diag = basis.energies - omega - 0.5j * params.gamma

    I_p = sin_exp(k, qs, d)
    I_m = sin_exp(-k, qs, d)
    I = (I_p, I_m)
    Jd = j_direct_matrix(k, qs, d)

    if sector == "V":
        ic = kern.inside_coeffs("V")
        sig = Jd.astype(complex).copy()
        for si, s in enumerate(_SIGNS):
            for sj, sp in enumerate(_SIGNS):
                sig += ic.c[si, sj] * np.outer(I[si], I[sj])
        A = np.diag(diag) - pref * kfac * norm * sig
        return ResponseMatrix(omega, kpar, "V", basis, A)

    ic = kern.inside_coeffs("H")
    k0sq = kern.k0 * kern.k0
    hpref = 1.0 / (params.eps_bg * k0sq)
    Js = j_sgn_matrix(k, qs, d)
    sig_xx = k * k * Jd
    sig_xz = -k * kpar * Js
    sig_zx = -k * kpar * Js
    sig_zz = kpar * kpar * Jd
    for si, s in enumerate(_SIGNS):
        for sj, sp in enumerate(_SIGNS):
            img = ic.c[si, sj] * np.outer(I[si], I[sj])
            sig_xx += -s * sp * k * k * img
            sig_xz += -s * k * kpar * img
            sig_zx += sp * k * kpar * img
            sig_zz += kpar * kpar * img
    scale = pref * kfac * norm * hpref
    A = np.zeros((2 * n, 2 * n), dtype=complex)
    A[:n, :n] = np.diag(diag) - scale * sig_xx
    A[:n, n:] = -scale * sig_xz
    A[n:, :n] = -scale * sig_zx
    # zz contact term integrates to -delta_LT * identity in the self-energy
    A[n:, n:] = np.diag(diag + params.delta_lt) - scale * sig_zz
    return ResponseMatrix(omega, kpar, "H", basis, A)


@dataclass
class LUSolver:
    """LU factorization of a response matrix, reusable for many solves."""

    rm: ResponseMatrix
    lu: np.ndarray = field(repr=False)
    piv: np.ndarray = field(repr=False)

    def solve(self, b: np.ndarray, trans: int = 0) -> np.ndarray:
        """Solve A x = b (trans=0), A^T x = b (1), or A^H x = b (2)."""
        return sla.lu_solve((self.lu, self.piv), b, trans=trans)

    def logdet(self) -> complex:
        du = np.diag(self.lu)
        sign = 1.0 - 2.0 * ((np.arange(len(self.piv)) != self.piv).sum() % 2)
        return np.log(du).sum() + np.log(complex(sign))


def factorize(rm: ResponseMatrix, warn_tol: float = 1e-12) -> LUSolver:
    lu, piv = sla.lu_factor(rm.matrix)
    du = np.abs(np.diag(lu))
    if du.min() < warn_tol * max(du.max(), 1.0):
        anorm = np.abs(rm.matrix).sum(axis=0).max()
        rcond = _lapack.zgecon(lu, anorm)[0]
        warnings.warn(
            f"response matrix nearly singular at omega={rm.omega}: "
            f"rcond={rcond:.2e}", RuntimeWarning)
    return LUSolver(rm, lu, piv)


def invert_A(rm: ResponseMatrix) -> ResponseMatrix:
    """W = A^{-1}, preserving block structure."""
    if rm.kind != "A":
        raise ValueError("invert_A expects a coefficient matrix")
    W = sla.lu_solve(sla.lu_factor(rm.matrix), np.eye(len(rm.matrix),
                                                      dtype=complex))
    return ResponseMatrix(rm.omega, rm.kpar, rm.sector, rm.basis, W, kind="W")


# ---------------------------------------------------------------------------
# pump-driven linear amplitudes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PumpSpec:
    """Monochromatic plane-wave pump incident from the left.

    polarization 'x' drives the H sector, 'y' the V sector; the intensity
    I_in = |amplitude|^2 is dimensionless (arbitrary units).
    """

    omega_in: float
    kpar_in: float = 0.0
    polarization: str = "x"
    amplitude: complex = 1.0

    @property
    def intensity(self) -> float:
        return abs(self.amplitude) ** 2


@dataclass
class LinearAmplitudes:
    """Pump-driven exciton amplitudes b^(1) in one sector."""

    pump: PumpSpec
    sector: str
    basis: ExcitonBasis
    vector: np.ndarray
    drive: np.ndarray


def pump_drive(stack: LayerStack, basis: ExcitonBasis, params: ExcitonParams,
               pump: PumpSpec) -> tuple[str, np.ndarray]:
    """Overlap of the driven pump field with the basis modes.

    Returns (sector, drive vector): component D_{xi,m} = M sqrt(2/d)
    int sin(q_m z) [e_xi . E0(z)] dz, in closed form.
    """
    d = basis.d
    qs = basis.qs
    pol = "V" if pump.polarization == "y" else "H"
    pf = pump_field(stack, pump.omega_in, pump.kpar_in, pol, pump.amplitude)
    f, b, k = pf.exciton_layer_amplitudes()
    I_p = sin_exp(k, qs, d)
    I_m = sin_exp(-k, qs, d)
    coupling = np.sqrt(params.eps_bg * params.delta_lt)
    pref = coupling * np.sqrt(2.0 / d)
    if pump.polarization == "y":
        return "V", pref * (f * I_p + b * I_m)
    km = np.sqrt(params.eps_bg) * (pump.omega_in / HBAR_C)
    dx = pref * k * (-f * I_p + b * I_m) / km
    dz = pref * pump.kpar_in * (f * I_p + b * I_m) / km
    return "H", np.concatenate([dx, dz])


def linear_amplitudes(stack: LayerStack, basis: ExcitonBasis,
                      params: ExcitonParams, pump: PumpSpec
                      ) -> LinearAmplitudes:
    """b^(1) = W(omega_in) . drive for the pump-selected sector."""
    sector, drive = pump_drive(stack, basis, params, pump)
    n = basis.size
    if sector == "H" and pump.kpar_in == 0.0:
        # normal incidence: no z drive, and the x block equals the V block
        A = assemble_A(stack, basis, params, pump.omega_in, "V")
        vec = np.concatenate([factorize(A).solve(drive[:n]),
                              np.zeros(n, dtype=complex)])
    else:
        A = assemble_A(stack, basis, params, pump.omega_in, sector)
        vec = factorize(A).solve(drive)
    return LinearAmplitudes(pump=pump, sector=sector, basis=basis,
                            vector=vec, drive=drive)


# ---------------------------------------------------------------------------
# coupled modes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoupledMode:
    """Complex root of det A: resonance Re, full width -2 Im."""

    omega: complex
    sector: str
    kpar: float
    dominant_xi: str
    dominant_m: int

    @property
    def resonance(self) -> float:
        return float(self.omega.real)

    @property
    def width(self) -> float:
        return float(-2.0 * self.omega.imag)


def bulk_polariton(params: ExcitonParams, q: float, kpar: float = 0.0,
                   gamma: float | None = None) -> list[complex]:
    """Complex bulk-polariton frequencies at total wavenumber (q, kpar) from
    c^2 q_tot^2 / w^2 = eps_bg [1 + dLT/(w_T + kin - w - i Gamma/2)]."""
    g = params.gamma if gamma is None else gamma
    q2 = q * q + kpar * kpar
    W0 = params.hw_t + params.kinetic_const * q2 - 0.5j * g
    K = (HBAR_C * HBAR_C * q2) / params.eps_bg
    roots = np.roots([1.0, -(W0 + params.delta_lt), -K, K * W0])
    return sorted((complex(r) for r in roots if r.real > 0),
                  key=lambda r: r.real)


def _passive_resonance_seeds(stack: LayerStack, kpar: float, pol: str,
                             window: tuple[float, float],
                             spacing: float = 0.05) -> list[float]:
    lo, hi = window
    n = max(16, int((hi - lo) / spacing))
    om = np.linspace(lo, hi, n)
    T = np.empty(n)
    for i, w in enumerate(om):
        _, t = stack_reflection_transmission(stack,
                                             PlaneWaveChannel(w, kpar, pol))
        T[i] = abs(t) ** 2
    peaks = [om[i] for i in range(1, n - 1)
             if T[i] >= T[i - 1] and T[i] >= T[i + 1]]
    return peaks


def find_coupled_modes(stack: LayerStack, basis: ExcitonBasis,
                       params: ExcitonParams, kpar: float,
                       window: tuple[float, float], sector: str,
                       extra_seeds: list[complex] | None = None,
                       tol: float = 1e-9, max_iter: int = 60
                       ) -> list[CoupledMode]:
    """Complex roots of det A(omega) by Newton iteration on the
    log-determinant, seeded from quantized bulk-polariton energies and
    passive cavity resonances; unconverged seeds are dropped and converged
    roots deduplicated within 1e-6 meV."""
    lo, hi = window
    seeds: list[complex] = list(extra_seeds or [])
    for q, E in zip(basis.qs, basis.energies):
        for r in bulk_polariton(params, q, kpar):
            if lo - 2.0 <= r.real <= hi + 2.0:
                seeds.append(r)
        if sector == "H":
            wl = E + params.delta_lt - 0.5j * params.gamma
            if lo - 2.0 <= wl.real <= hi + 2.0:
                seeds.append(wl)
    pol = "V" if sector == "V" else "H"
    for w in _passive_resonance_seeds(stack, kpar, pol, window):
        seeds.append(w - 0.5j * max(params.gamma, 0.05))

    def matrix(w: complex) -> np.ndarray:
        return assemble_A(stack, basis, params, w, sector).matrix

    roots: list[complex] = []
    h = 1e-5
    for seed in seeds:
        w = complex(seed)
        ok = False
        for _ in range(max_iter):
            A = matrix(w)
            dA = (matrix(w + h) - matrix(w - h)) / (2.0 * h)
            try:
                lu = sla.lu_factor(A)
            except sla.LinAlgError:
                break
            tr = np.trace(sla.lu_solve(lu, dA))
            if tr == 0:
                break
            step = -1.0 / tr
            if abs(step) > 2.0:
                step *= 2.0 / abs(step)
            w = w + step
            if abs(step) < tol:
                ok = True
                break
        if not ok or not (lo <= w.real <= hi) or w.imag > 1e-9:
            continue
        if any(abs(w - r) < 1e-6 for r in roots):
            continue
        roots.append(w)

    modes = []
    for w in sorted(roots, key=lambda r: r.real):
        A = matrix(w)
        rng = np.random.default_rng(12345)
        b = rng.standard_normal(len(A)) + 1j * rng.standard_normal(len(A))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                v = sla.lu_solve(sla.lu_factor(A), b)
            except sla.LinAlgError:
                v = b
        i = int(np.argmax(np.abs(v)))
        n = basis.size
        if sector == "V":
            xi, m = "y", int(basis.ms[i])
        elif i < n:
            xi, m = "x", int(basis.ms[i])
        else:
            xi, m = "z", int(basis.ms[i - n])
        modes.append(CoupledMode(omega=w, sector=sector, kpar=kpar,
                                 dominant_xi=xi, dominant_m=m))
    return modes
