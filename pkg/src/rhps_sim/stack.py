"""Planar multilayer geometry and plane-wave transfer-matrix machinery.

Conventions (used consistently by every module):

* The stack is ordered along +z.  The excitonic layer occupies 0 < z < d;
  everything to its left sits at z < 0 and the two outermost regions are
  semi-infinite, lossless dielectrics.
* A channel is (omega [meV], kpar [nm^-1], polarization).  Per-region normal
  wavenumbers are kz_j = sqrt(eps_j (omega/c)^2 - kpar^2) on the branch with
  Im kz >= 0 (and Re kz >= 0 when Im kz = 0); numpy's principal square root
  realizes this and continues analytically to the complex frequencies used
  by the mode finder.
* V polarization propagates E_y; amplitudes are E_y values.
* H polarization is bookkept with the E-field amplitude along the unit
  vectors e_p(+-) = (-+ kz x^ + kpar z^)/(sqrt(eps) omega/c) for waves
  running toward +-z.  With this choice the Fresnel coefficients are
      r = (eps_b kz_a - eps_a kz_b)/(eps_b kz_a + eps_a kz_b)
      t = 2 sqrt(eps_a eps_b) kz_a /(eps_b kz_a + eps_a kz_b)
  and the derivative form of the H-polarized layered Green's tensor holds
  with the 1/(sqrt(eps_bg eps_j) (omega/c)^2) prefactor.  The power flux of
  a transmitted wave carries the polarization-independent weight
  Re(kz_b)/Re(kz_a).
* Interface amplitudes are referenced at layer faces: generalized
  reflection coefficients are measured at the excitonic layer's own faces,
  generalized transmissions map the outgoing amplitude at the excitonic
  layer's face to the amplitude at the near face of the far semi-infinite
  region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

from .materials import HBAR_C, wavenumber

Polarization = Literal["V", "H"]


class SingularResonanceError(RuntimeError):
    """Raised when a lossless cavity factor 1 - R_L R_R e^{2ikd} vanishes."""


class UnsupportedObservationPoint(ValueError):
    """Raised for field/Green's evaluations inside interior passive layers."""


@dataclass(frozen=True)
class Layer:
    """One finite interior layer: thickness (nm), dielectric constant,
    and whether it is the excitonic layer."""

    thickness: float
    eps: float
    excitonic: bool = False

    def __post_init__(self):
        if self.thickness <= 0:
            raise ValueError("interior layer thickness must be positive")
        if self.eps < 1.0:
            raise ValueError("dielectric constant must be >= 1")


class LayerStack:
    """Ordered planar regions: semi-infinite left medium, interior layers
    (exactly one excitonic), semi-infinite right medium.

    Region index j runs 0..P-1; boundaries[i] is the z coordinate of the
    interface between regions i and i+1, with the excitonic layer's left
    face pinned at z = 0.
    """

    def __init__(self, eps_left: float, layers: list[Layer], eps_right: float):
        if eps_left < 1.0 or eps_right < 1.0:
            raise ValueError("end media must have eps >= 1")
        iex = [i for i, l in enumerate(layers) if l.excitonic]
        if len(iex) != 1:
            raise ValueError("exactly one excitonic layer required")
        self.eps = np.array([eps_left] + [l.eps for l in layers] + [eps_right])
        self.thickness = np.array(
            [np.inf] + [l.thickness for l in layers] + [np.inf])
        self.iex = iex[0] + 1
        # left face of the excitonic layer at z = 0
        z = -sum(l.thickness for l in layers[: iex[0]])
        bounds = [z]
        for l in layers:
            z += l.thickness
            bounds.append(z)
        self.boundaries = np.array(bounds)

    @property
    def n_regions(self) -> int:
        return len(self.eps)

    @property
    def d(self) -> float:
        """Excitonic layer thickness."""
        return float(self.thickness[self.iex])

    @property
    def eps_exc(self) -> float:
        return float(self.eps[self.iex])

    @property
    def z_left(self) -> float:
        """Near face of the left semi-infinite region."""
        return float(self.boundaries[0])

    @property
    def z_right(self) -> float:
        """Near face of the right semi-infinite region."""
        return float(self.boundaries[-1])

    def region_of(self, z: float) -> int:
        return int(np.searchsorted(self.boundaries, z, side="right"))

    def eps_at(self, z: float) -> float:
        return float(self.eps[self.region_of(z)])

    def kz(self, region: int, omega: complex, kpar: float) -> complex:
        k0 = omega / HBAR_C
        return np.sqrt(np.asarray(self.eps[region] * k0 * k0 - kpar * kpar,
                                  dtype=complex))

    def kz_all(self, omega: complex, kpar: float) -> np.ndarray:
        k0 = omega / HBAR_C
        return np.sqrt(np.asarray(self.eps * k0 * k0 - kpar * kpar,
                                  dtype=complex))


def film_stack(d: float, eps_exc: float, eps_left: float = 1.0,
               eps_right: float | None = None) -> LayerStack:
    """Bare excitonic film between two semi-infinite media (vacuum default)."""
    if eps_right is None:
        eps_right = eps_left
    return LayerStack(eps_left, [Layer(d, eps_exc, excitonic=True)], eps_right)


def quarter_wave_thickness(n: float, energy: float) -> float:
    """lambda/(4n) for a photon of the given energy (meV)."""
    lam_vac = 2.0 * math.pi * HBAR_C / energy
    return lam_vac / (4.0 * n)


def build_dbr_cavity(d: float, periods_left: int, periods_right: int,
                     design_energy: float, eps_exc: float,
                     n_low: float = 1.86, n_high: float = 2.95,
                     eps_outside: float = 1.0) -> LayerStack:
    """Excitonic layer between quarter-wave Bragg mirrors.

    Mirrors are built from the (n_low, n_high) pair with the high-index
    layer adjacent to the excitonic layer on both sides, which tunes the
    cavity mode of a half-wave excitonic slab to the design energy.
    Zero periods on both sides degenerates to the bare film.
    """
    if periods_left < 0 or periods_right < 0:
        raise ValueError("period counts must be >= 0")
    t_lo = quarter_wave_thickness(n_low, design_energy)
    t_hi = quarter_wave_thickness(n_high, design_energy)
    lo = Layer(t_lo, n_low * n_low)
    hi = Layer(t_hi, n_high * n_high)
    left = [lo, hi] * periods_left
    right = [hi, lo] * periods_right
    layers = left + [Layer(d, eps_exc, excitonic=True)] + right
    return LayerStack(eps_outside, layers, eps_outside)


@dataclass(frozen=True)
class PlaneWaveChannel:
    """A (frequency, in-plane wavenumber, polarization) plane-wave channel."""

    omega: complex
    kpar: float
    pol: Polarization

    @property
    def k0(self) -> complex:
        return self.omega / HBAR_C


def interface_coefficients(eps_a: float, eps_b: float,
                           channel: PlaneWaveChannel) -> tuple[complex, complex]:
    """Fresnel (r, t) for a wave in medium a hitting medium b."""
    k0 = channel.k0
    ka = np.sqrt(np.asarray(eps_a * k0 * k0 - channel.kpar**2, dtype=complex))
    kb = np.sqrt(np.asarray(eps_b * k0 * k0 - channel.kpar**2, dtype=complex))
    if channel.pol == "V":
        r = (ka - kb) / (ka + kb)
        t = 2.0 * ka / (ka + kb)
    else:
        den = eps_b * ka + eps_a * kb
        r = (eps_b * ka - eps_a * kb) / den
        t = 2.0 * math.sqrt(eps_a * eps_b) * ka / den
    return complex(r), complex(t)


class GeneralizedRT(NamedTuple):
    R_L: complex   # reflection of the excitonic layer against the left stack
    R_R: complex   # ... against the right stack
    T_L: complex   # transmission from the excitonic layer to the left region
    T_R: complex   # ... to the right region
    M: complex     # multiple-reflection factor [1 - R_L R_R e^{2ikd}]^{-1}
    k: complex     # normal wavenumber inside the excitonic layer


def _fresnel(stack: LayerStack, kz: np.ndarray, a: int, b: int,
             pol: Polarization) -> tuple[complex, complex]:
    ea, eb = stack.eps[a], stack.eps[b]
    ka, kb = kz[a], kz[b]
    if pol == "V":
        r = (ka - kb) / (ka + kb)
        t = 2.0 * ka / (ka + kb)
    else:
        den = eb * ka + ea * kb
        r = (eb * ka - ea * kb) / den
        t = 2.0 * math.sqrt(ea * eb) * ka / den
    return r, t


def _reflection_right(stack: LayerStack, kz: np.ndarray, pol: Polarization):
    """R_right[j]: reflection at region j's right interface, looking right."""
    P = stack.n_regions
    R = np.zeros(P, dtype=complex)
    for j in range(P - 2, -1, -1):
        r, _ = _fresnel(stack, kz, j, j + 1, pol)
        if j == P - 2:
            R[j] = r
        else:
            ph = np.exp(2j * kz[j + 1] * stack.thickness[j + 1])
            R[j] = (r + R[j + 1] * ph) / (1.0 + r * R[j + 1] * ph)
    return R


def _reflection_left(stack: LayerStack, kz: np.ndarray, pol: Polarization):
    """R_left[j]: reflection at region j's left interface, looking left."""
    P = stack.n_regions
    R = np.zeros(P, dtype=complex)
    for j in range(1, P):
        r, _ = _fresnel(stack, kz, j, j - 1, pol)
        if j == 1:
            R[j] = r
        else:
            ph = np.exp(2j * kz[j - 1] * stack.thickness[j - 1])
            R[j] = (r + R[j - 1] * ph) / (1.0 + r * R[j - 1] * ph)
    return R


def _chain_right(stack: LayerStack, kz: np.ndarray, pol: Polarization,
                 R_right: np.ndarray, j0: int) -> complex:
    """Amplitude at the near face of the rightmost region per unit rightgoing
    amplitude at region j0's right face."""
    P = stack.n_regions
    T = 1.0 + 0j
    for j in range(j0, P - 1):
        _, t = _fresnel(stack, kz, j, j + 1, pol)
        if j + 1 == P - 1:
            T *= t
        else:
            rp, _ = _fresnel(stack, kz, j + 1, j, pol)
            ph = np.exp(2j * kz[j + 1] * stack.thickness[j + 1])
            T *= t / (1.0 - rp * R_right[j + 1] * ph)
            T *= np.exp(1j * kz[j + 1] * stack.thickness[j + 1])
    return T


def _chain_left(stack: LayerStack, kz: np.ndarray, pol: Polarization,
                R_left: np.ndarray, j0: int) -> complex:
    T = 1.0 + 0j
    for j in range(j0, 0, -1):
        _, t = _fresnel(stack, kz, j, j - 1, pol)
        if j - 1 == 0:
            T *= t
        else:
            rp, _ = _fresnel(stack, kz, j - 1, j, pol)
            ph = np.exp(2j * kz[j - 1] * stack.thickness[j - 1])
            T *= t / (1.0 - rp * R_left[j - 1] * ph)
            T *= np.exp(1j * kz[j - 1] * stack.thickness[j - 1])
    return T


def generalized_RT(stack: LayerStack, channel: PlaneWaveChannel,
                   singular_tol: float = 1e-12) -> GeneralizedRT:
    """Generalized reflection/transmission of the excitonic layer against the
    sub-stacks on either side, plus the multiple-reflection factor."""
    kz = stack.kz_all(channel.omega, channel.kpar)
    e = stack.iex
    Rr = _reflection_right(stack, kz, channel.pol)
    Rl = _reflection_left(stack, kz, channel.pol)
    R_R, R_L = Rr[e], Rl[e]
    k = kz[e]
    det = 1.0 - R_L * R_R * np.exp(2j * k * stack.d)
    if abs(det) < singular_tol:
        raise SingularResonanceError(
            f"perfect cavity resonance at omega={channel.omega}")
    T_R = _chain_right(stack, kz, channel.pol, Rr, e)
    T_L = _chain_left(stack, kz, channel.pol, Rl, e)
    return GeneralizedRT(complex(R_L), complex(R_R), complex(T_L),
                         complex(T_R), complex(1.0 / det), complex(k))


def stack_reflection_transmission(stack: LayerStack, channel: PlaneWaveChannel
                                  ) -> tuple[complex, complex]:
    """(r, t) of the whole stack for a wave incident from the left, with t
    referenced at the rightmost region's near face."""
    kz = stack.kz_all(channel.omega, channel.kpar)
    Rr = _reflection_right(stack, kz, channel.pol)
    t = _chain_right(stack, kz, channel.pol, Rr, 0)
    return complex(Rr[0]), complex(t)


@dataclass
class PumpField:
    """Driven plane-wave field of a unit-amplitude wave incident from the
    left, scaled by `amplitude`.  Per-region forward/backward amplitudes are
    referenced at each region's left face (region 0: at its right face)."""

    stack: LayerStack
    channel: PlaneWaveChannel
    amplitude: complex
    f: np.ndarray
    b: np.ndarray
    kz: np.ndarray = field(repr=False)

    def scalar(self, z: float) -> complex:
        """Forward+backward scalar amplitude at z (any region)."""
        j = self.stack.region_of(z)
        zr = self.stack.boundaries[0] if j == 0 else self.stack.boundaries[j - 1]
        ph = np.exp(1j * self.kz[j] * (z - zr))
        return complex(self.f[j] * ph + self.b[j] / ph)

    def field_vector(self, z: float) -> np.ndarray:
        """E-field (x, y, z) components at z."""
        j = self.stack.region_of(z)
        zr = self.stack.boundaries[0] if j == 0 else self.stack.boundaries[j - 1]
        ph = np.exp(1j * self.kz[j] * (z - zr))
        fw, bw = self.f[j] * ph, self.b[j] / ph
        if self.channel.pol == "V":
            return np.array([0.0, fw + bw, 0.0], dtype=complex)
        kj = self.kz[j]
        km = math.sqrt(self.stack.eps[j]) * self.channel.k0
        ex = (-kj * fw + kj * bw) / km
        ez = self.channel.kpar * (fw + bw) / km
        return np.array([ex, 0.0, ez], dtype=complex)

    def exciton_layer_amplitudes(self) -> tuple[complex, complex, complex]:
        """(forward, backward, kz) in the excitonic layer, amplitudes
        referenced at its left face z=0."""
        e = self.stack.iex
        return complex(self.f[e]), complex(self.b[e]), complex(self.kz[e])

    @property
    def transmitted(self) -> complex:
        return complex(self.f[-1])

    @property
    def reflected(self) -> complex:
        return complex(self.b[0])


def pump_field(stack: LayerStack, omega: float, kpar: float,
               pol: Polarization, amplitude: complex = 1.0) -> PumpField:
    """Solve the driven field for a plane wave incident from the left."""
    channel = PlaneWaveChannel(omega, kpar, pol)
    kz = stack.kz_all(omega, kpar)
    P = stack.n_regions
    Rr = _reflection_right(stack, kz, pol)
    f = np.zeros(P, dtype=complex)
    b = np.zeros(P, dtype=complex)
    f[0] = 1.0
    b[0] = Rr[0]
    face = f[0]
    for j in range(0, P - 1):
        _, t = _fresnel(stack, kz, j, j + 1, pol)
        if j + 1 == P - 1:
            f[j + 1] = t * face
        else:
            rp, _ = _fresnel(stack, kz, j + 1, j, pol)
            ph = np.exp(2j * kz[j + 1] * stack.thickness[j + 1])
            f[j + 1] = t * face / (1.0 - rp * Rr[j + 1] * ph)
            b[j + 1] = f[j + 1] * Rr[j + 1] * ph
            face = f[j + 1] * np.exp(1j * kz[j + 1] * stack.thickness[j + 1])
    f *= amplitude
    b *= amplitude
    return PumpField(stack, channel, amplitude, f, b, kz)


def passive_stack(stack: LayerStack) -> LayerStack:
    """The same geometry with the excitonic layer treated as a passive
    dielectric (used for cavity-mode diagnostics and mode-finder seeds)."""
    layers = []
    for j in range(1, stack.n_regions - 1):
        layers.append(Layer(float(stack.thickness[j]), float(stack.eps[j]),
                            excitonic=(j == stack.iex)))
    return LayerStack(float(stack.eps[0]), layers, float(stack.eps[-1]))


def cavity_mode_q(stack: LayerStack, window: tuple[float, float],
                  kpar: float = 0.0, pol: Polarization = "V",
                  n_grid: int = 4001) -> tuple[float, float]:
    """Locate the passive transmission resonance inside `window` and return
    (mode energy, Q) from its FWHM."""
    om = np.linspace(window[0], window[1], n_grid)
    T = np.empty_like(om)
    for i, w in enumerate(om):
        ch = PlaneWaveChannel(w, kpar, pol)
        _, t = stack_reflection_transmission(stack, ch)
        kl = stack.kz(0, w, kpar)
        kr = stack.kz(stack.n_regions - 1, w, kpar)
        T[i] = abs(t) ** 2 * (kr.real / kl.real)
    i0 = int(np.argmax(T))
    peak, half = om[i0], T[i0] / 2.0
    lo = i0
    while lo > 0 and T[lo] > half:
        lo -= 1
    hi = i0
    while hi < len(om) - 1 and T[hi] > half:
        hi += 1
    if lo == 0 or hi == len(om) - 1:
        raise ValueError("transmission resonance not resolved inside window")
    w_lo = np.interp(half, [T[lo], T[lo + 1]], [om[lo], om[lo + 1]])
    w_hi = np.interp(half, [T[hi], T[hi - 1]], [om[hi], om[hi - 1]])
    return float(peak), float(peak / (w_hi - w_lo))
