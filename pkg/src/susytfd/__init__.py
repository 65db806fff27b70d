"""Interacting SUSY oscillator on a truncated Fock space, with its thermo field dynamics."""

__version__ = "0.1.0"

from .algebra import AlgebraReport, check_bullet, check_wedge, verify_full_algebra  # noqa: E402
from .bogoliubov import TransformParams, TransformedModes, canonical_transform, reduce_hamiltonian, transform_modes  # noqa: E402
from .fock import FockSpaceConfig, InsufficientCutoffError, Mode, ModeOperator, StateVector, tensor_embed  # noqa: E402
from .model import (  # noqa: E402
    ComplexRootError,
    HamiltonianBundle,
    ModelParams,
    build_detuned_model,
    build_free_susy_oscillator,
    build_interacting_model,
    solve_frequencies,
    spectrum,
)
from .thermal import (  # noqa: E402
    ThermalParams,
    ThermalVacuum,
    thermal_energy,
    thermal_point,
    thermal_vacuum,
    witten_index,
)

__all__ = [
    "AlgebraReport",
    "ComplexRootError",
    "FockSpaceConfig",
    "HamiltonianBundle",
    "InsufficientCutoffError",
    "Mode",
    "ModeOperator",
    "ModelParams",
    "StateVector",
    "ThermalParams",
    "ThermalVacuum",
    "TransformParams",
    "TransformedModes",
    "build_detuned_model",
    "build_free_susy_oscillator",
    "build_interacting_model",
    "canonical_transform",
    "check_bullet",
    "check_wedge",
    "reduce_hamiltonian",
    "solve_frequencies",
    "spectrum",
    "tensor_embed",
    "thermal_energy",
    "thermal_point",
    "thermal_vacuum",
    "transform_modes",
    "verify_full_algebra",
    "witten_index",
]
