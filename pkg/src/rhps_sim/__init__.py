"""Numerical simulator for biexciton-resonant hyperparametric scattering
from an excitonic layer inside a planar dielectric multilayer."""

from .materials import (BiexcitonParams, ExcitonParams, PassiveMaterial,
                        cucl_defaults)
from .stack import (Layer, LayerStack, PlaneWaveChannel, build_dbr_cavity,
                    film_stack, generalized_RT, interface_coefficients,
                    pump_field)
from .greens import GreensKernel, dyadic_greens, scalar_greens
from .basis import (ExcitonBasis, ModeIndex, biexciton_energy,
                    exciton_energy, overlap_C, truncate_basis)
from .linear_response import (CoupledMode, PumpSpec, ResponseMatrix,
                              assemble_A, bulk_polariton, find_coupled_modes,
                              invert_A, linear_amplitudes)
from .rhps import (RhpsCalculator, biexciton_amplitude,
                   bulk_two_photon_frequency, performance,
                   polarization_vectors, project_polarization, tune_pump)
from .sweeps import (Scenario, SweepResult, SweepSpec, converge_e_cut,
                     spectrum_scenario, thickness_sweep)

__version__ = "0.1.0"

__all__ = [
    "BiexcitonParams", "ExcitonParams", "PassiveMaterial", "cucl_defaults",
    "Layer", "LayerStack", "PlaneWaveChannel", "build_dbr_cavity",
    "film_stack", "generalized_RT", "interface_coefficients", "pump_field",
    "GreensKernel", "dyadic_greens", "scalar_greens",
    "ExcitonBasis", "ModeIndex", "biexciton_energy", "exciton_energy",
    "overlap_C", "truncate_basis",
    "CoupledMode", "PumpSpec", "ResponseMatrix", "assemble_A",
    "bulk_polariton", "find_coupled_modes", "invert_A", "linear_amplitudes",
    "RhpsCalculator", "biexciton_amplitude", "bulk_two_photon_frequency",
    "performance", "polarization_vectors", "project_polarization",
    "tune_pump",
    "Scenario", "SweepResult", "SweepSpec", "converge_e_cut",
    "spectrum_scenario", "thickness_sweep",
]
