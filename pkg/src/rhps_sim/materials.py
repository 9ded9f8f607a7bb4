"""Units, physical constants, and material parameter sets.

Internal unit system: energies in meV, lengths in nm, angles in radians,
hbar = 1 (frequencies are energies).  Fields and pump intensities are
dimensionless (arbitrary units); only ratios and scaling laws of the
computed intensities are physical.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

# hbar*c in meV*nm (CODATA: 197.3269804 MeV*fm)
HBAR_C = 1.973269804e5
# free electron rest energy m_e c^2 in meV
ME_C2 = 5.1099895e8
# hbar^2/(2 m_e) in meV*nm^2
HBAR2_OVER_2ME = HBAR_C**2 / (2.0 * ME_C2)
# hbar in meV*ps, for damping <-> lifetime conversions
HBAR_MEV_PS = 0.6582119569


def wavenumber(energy_mev: float) -> float:
    """Vacuum wavenumber omega/c in nm^-1 for a photon energy in meV."""
    return energy_mev / HBAR_C


@dataclass(frozen=True)
class ExcitonParams:
    """Excitonic-layer material parameters.

    hw_t      : transverse exciton energy at band edge (meV)
    delta_lt  : longitudinal-transverse splitting (meV); sets the
                light-matter coupling strength
    eps_bg    : background dielectric constant of the excitonic layer
    mass      : translational mass in units of the free-electron mass
    gamma     : nonradiative damping width (meV)

    The dipole coupling is never stored independently: the exciton
    self-energy prefactor is eps_bg * delta_lt * (omega/c)^2 and the
    dipole strength is taken real and positive.
    """

    hw_t: float
    delta_lt: float
    eps_bg: float
    mass: float
    gamma: float

    def __post_init__(self):
        if not (self.hw_t > 0 and self.delta_lt > 0):
            raise ValueError("hw_t and delta_lt must be positive")
        if self.eps_bg < 1.0:
            raise ValueError("eps_bg must be >= 1")
        if self.mass <= 0:
            raise ValueError("exciton mass must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")

    @property
    def kinetic_const(self) -> float:
        """hbar^2/(2 m_ex) in meV*nm^2."""
        return HBAR2_OVER_2ME / self.mass


@dataclass(frozen=True)
class BiexcitonParams:
    """Lowest biexciton-level parameters.

    binding  : binding energy below two free excitons (meV)
    mass     : translational mass in units of the free-electron mass
    gamma    : phenomenological damping width (meV)
    f_sq     : |f|^2, effective volume of the relative-motion state (nm^3);
               the amplitude f enters observables only through |f|^2, so its
               phase is fixed to zero
    """

    binding: float
    mass: float
    gamma: float
    f_sq: float

    def __post_init__(self):
        if self.binding <= 0:
            raise ValueError("binding energy must be positive")
        if self.gamma <= 0:
            raise ValueError("biexciton damping must be positive")
        if self.f_sq <= 0:
            raise ValueError("|f|^2 must be positive")

    @property
    def kinetic_const(self) -> float:
        """hbar^2/(2 m_bx) in meV*nm^2."""
        return HBAR2_OVER_2ME / self.mass

    @property
    def f(self) -> float:
        return self.f_sq**0.5


@dataclass(frozen=True)
class PassiveMaterial:
    """Non-dispersive lossless dielectric, given by its refractive index."""

    n: float

    def __post_init__(self):
        if self.n < 1.0:
            raise ValueError("refractive index must be >= 1")

    @property
    def eps(self) -> float:
        return self.n * self.n


def cucl_defaults() -> tuple[ExcitonParams, BiexcitonParams]:
    """CuCl parameter set.

    Transverse exciton at 3202.2 meV, LT splitting 5.7 meV, eps_bg 5.59,
    m_ex = 2.3 m_e; biexciton binding 32.2 meV, m_bx = 2.3 m_ex,
    damping hbar/(50 ps) = 13.2 ueV, effective volume 80 nm^3.
    """
    exc = ExcitonParams(hw_t=3202.2, delta_lt=5.7, eps_bg=5.59, mass=2.3,
                        gamma=0.5)
    bx = BiexcitonParams(binding=32.2, mass=2.3 * 2.3, gamma=0.0132,
                         f_sq=80.0)
    return exc, bx


# mirror materials of the Bragg-cavity structure
PBF2 = PassiveMaterial(n=1.86)
PBBR2 = PassiveMaterial(n=2.95)


def exciton_params_to_dict(p: ExcitonParams) -> dict:
    return asdict(p)


def biexciton_params_to_dict(p: BiexcitonParams) -> dict:
    return asdict(p)


def exciton_params_from_dict(d: dict) -> ExcitonParams:
    return ExcitonParams(**d)


def biexciton_params_from_dict(d: dict) -> BiexcitonParams:
    return BiexcitonParams(**d)
