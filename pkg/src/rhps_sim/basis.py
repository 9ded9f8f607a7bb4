"""Quantized center-of-mass basis inside the excitonic layer.

Center-of-mass states are sinusoidal standing waves sin(q_m z) with
q_m = m pi / d vanishing at the layer faces, labeled by polarization
direction xi in {x, y, z}, in-plane wavenumber kpar, and the confinement
index m >= 1.  Exciton and biexciton states share the same spatial basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .materials import BiexcitonParams, ExcitonParams
from .oscint import sine_line_integral


def exciton_energy(params: ExcitonParams, d: float, kpar: float, m) -> float:
    """hw_T + hbar^2/(2 m_ex) (kpar^2 + q_m^2) in meV."""
    q = np.asarray(m) * math.pi / d
    return params.hw_t + params.kinetic_const * (kpar * kpar + q * q)


def biexciton_energy(exc: ExcitonParams, bx: BiexcitonParams, d: float,
                     kpar: float, n) -> float:
    """2 hw_T - binding + hbar^2/(2 m_bx) (kpar^2 + q_n^2) in meV."""
    q = np.asarray(n) * math.pi / d
    return (2.0 * exc.hw_t - bx.binding
            + bx.kinetic_const * (kpar * kpar + q * q))


def overlap_C(d: float, n: int, m: int, mp: int) -> float:
    """(2/d)^{3/2} int_0^d sin(q_n z) sin(q_m z) sin(q_mp z) dz.

    Vanishes unless n+m+mp is odd (the integrand is odd about z = d/2
    otherwise) and is symmetric under any permutation of (n, m, mp).
    """
    if min(n, m, mp) < 1:
        raise ValueError("confinement indices start at 1")
    js = np.array([n + m - mp, n - m + mp, -n + m + mp, n + m + mp])
    signs = np.array([1.0, 1.0, 1.0, -1.0])
    integral = 0.25 * float(signs @ sine_line_integral(js, d))
    return (2.0 / d) ** 1.5 * integral


@dataclass(frozen=True)
class ModeIndex:
    xi: str          # 'x' | 'y' | 'z'
    kpar: float
    m: int

    def __post_init__(self):
        if self.xi not in ("x", "y", "z"):
            raise ValueError("xi must be one of x, y, z")
        if self.m < 1:
            raise ValueError("m >= 1")


@dataclass(frozen=True)
class ExcitonBasis:
    """Retained confinement modes at fixed (d, kpar).

    Energies are xi-independent (a single translational mass is used for
    transverse and longitudinal excitons).
    """

    d: float
    kpar: float
    e_cut: float
    ms: np.ndarray = field(repr=False)
    energies: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.ms)

    @property
    def qs(self) -> np.ndarray:
        return self.ms * math.pi / self.d


def truncate_basis(params: ExcitonParams, d: float, kpar: float,
                   e_cut: float, max_m: int | None = None) -> ExcitonBasis:
    """All m whose confinement kinetic energy hbar^2 q_m^2/(2 m_ex) stays
    at or below e_cut, ordered by m."""
    if e_cut <= 0:
        raise ValueError("e_cut must be positive")
    m_top = int(math.floor(d / math.pi * math.sqrt(e_cut / params.kinetic_const)))
    if max_m is not None:
        m_top = min(m_top, max_m)
    if m_top < 1:
        raise ValueError(
            f"cutoff {e_cut} meV retains no confinement mode at d={d} nm")
    ms = np.arange(1, m_top + 1)
    return ExcitonBasis(d=d, kpar=kpar, e_cut=e_cut, ms=ms,
                        energies=exciton_energy(params, d, kpar, ms))


def biexciton_count(basis: ExcitonBasis) -> int:
    """Biexciton confinement indices kept alongside an exciton basis; the
    triple overlaps couple |m - m'| .. m + m', so twice the exciton range
    covers every nonzero coefficient."""
    return 2 * int(basis.ms[-1])
